// Quantization-dimension estimates and the scaled error sequence
// n^(2/beta) * V_n, with beta = log4/log3.
//
// Floating point enters the library only here; logs and powers are evaluated
// at 50 decimal digits and reported as doubles. Identities that are exact by
// algebra (4^(2/beta) = 9, hence 9^l * V_{4^l} = 1/4) are kept in rational
// arithmetic with no float logs involved.

#pragma once

#include <carpetq/optimal.hpp>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <utility>
#include <vector>

namespace carpetq {

using BigFloat = boost::multiprecision::cpp_bin_float_50;

inline BigFloat beta_big() {
  using boost::multiprecision::log;
  return log(BigFloat(4)) / log(BigFloat(3));
}

// The quantization dimension log4/log3 = 1.2618595...
inline double beta() { return beta_big().convert_to<double>(); }

namespace detail {

inline BigFloat log_rational(const Rat& v) {
  using boost::multiprecision::log;
  BigFloat num(boost::multiprecision::numerator(v));
  BigFloat den(boost::multiprecision::denominator(v));
  return log(num) - log(den);
}

inline BigFloat log_int(const Int& v) {
  using boost::multiprecision::log;
  return log(BigFloat(v));
}

}  // namespace detail

// 2 log n / (-log V_n); converges to beta from below as n grows.
inline double dimension_estimate(const Int& n) {
  if (n < 2) throw std::invalid_argument("dimension estimate requires n >= 2");
  BigFloat num = 2 * detail::log_int(n);
  BigFloat den = -detail::log_rational(quantization_error(n));
  return (num / den).convert_to<double>();
}

// n^(2/beta) * V_n as a float.
inline double scaled_error(const Int& n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  using boost::multiprecision::exp;
  BigFloat c = 2 / beta_big();
  BigFloat value = exp(c * detail::log_int(n) + detail::log_rational(quantization_error(n)));
  return value.convert_to<double>();
}

// 9^l * V_{4^l}, exactly; the identity 4^(2l/beta) = 9^l makes this rational.
inline Rat exact_scaled_at_power(unsigned level) {
  return Rat(pow_int(9, level)) * quantization_error(pow_int(4, level));
}

// Closed-form limit of the scaled sequence at n = x*4^l: on [1,2] the m=1
// band gives x^(2/beta)(13-4x)/36, on [2,4] both remaining bands give
// x^(2/beta)(9-2x)/36.
inline double limit_curve(double x) {
  using boost::multiprecision::exp;
  using boost::multiprecision::log;
  BigFloat c = 2 / beta_big();
  BigFloat xx(x);
  BigFloat xpow = exp(c * log(xx));
  BigFloat poly = x <= 2 ? (13 - 4 * xx) : (9 - 2 * xx);
  return (xpow * poly / 36).convert_to<double>();
}

// The published comparison curve x^(2/beta)(13-x)/36; reported alongside the
// derived limit, never asserted.
inline double published_curve(double x) {
  using boost::multiprecision::exp;
  using boost::multiprecision::log;
  BigFloat c = 2 / beta_big();
  BigFloat xx(x);
  return (exp(c * log(xx)) * (13 - xx) / 36).convert_to<double>();
}

// Maximum of the scaled sequence's limit over [2,4], attained at
// x = 9c/(2(c+1)) with c = 2/beta.
inline double limit_curve_max() {
  using boost::multiprecision::exp;
  using boost::multiprecision::log;
  BigFloat c = 2 / beta_big();
  BigFloat xstar = 9 * c / (2 * (c + 1));
  return (exp(c * log(xstar)) * (9 - 2 * xstar) / 36).convert_to<double>();
}

struct ScaledSample {
  Int n;
  unsigned level = 0;
  double x = 0;        // n / 4^level in [1,4)
  Rat v_n;
  double scaled = 0;   // n^(2/beta) * V_n
  double limit = 0;    // limit_curve(x)
  double published = 0;
};

struct ProfileReport {
  std::vector<ScaledSample> samples;
  double inf_observed = 0;
  double sup_observed = 0;
  std::vector<std::pair<Int, double>> dimension_estimates;  // at n = 4^l
};

// Samples n = round(x * 4^l) over a uniform x-grid in [1,4) for each level.
// The observed spread certifies liminf < limsup of the scaled sequence.
inline ProfileReport scaled_profile(unsigned level_min, unsigned level_max,
                                    unsigned grid_points = 64) {
  if (level_min < 1 || level_min > level_max || level_max > 15)
    throw std::invalid_argument("levels must satisfy 1 <= level_min <= level_max <= 15");
  if (grid_points < 1) throw std::invalid_argument("grid_points must be >= 1");
  ProfileReport report;
  bool first = true;
  for (unsigned level = level_min; level <= level_max; ++level) {
    Int p4 = pow_int(4, level);
    for (unsigned g = 0; g < grid_points; ++g) {
      // n = round((1 + 3g/G) * 4^l), exactly, clamped into [4^l, 4^(l+1))
      Int n = p4 + (Int(3) * g * p4 + grid_points / 2) / grid_points;
      if (n >= 4 * p4) n = 4 * p4 - 1;
      ScaledSample s;
      s.n = n;
      s.level = level;
      s.x = Rat(n, p4).convert_to<double>();
      s.v_n = quantization_error(n);
      s.scaled = scaled_error(n);
      s.limit = limit_curve(s.x);
      s.published = published_curve(s.x);
      if (first || s.scaled < report.inf_observed) report.inf_observed = s.scaled;
      if (first || s.scaled > report.sup_observed) report.sup_observed = s.scaled;
      first = false;
      report.samples.push_back(std::move(s));
    }
    report.dimension_estimates.emplace_back(p4, dimension_estimate(p4));
  }
  return report;
}

}  // namespace carpetq
