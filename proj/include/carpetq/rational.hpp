// Exact rational scalars and points for the carpet quantizer.
//
// Every coordinate, weight and distortion in the library is an arbitrary-
// precision rational; floating point only appears in the asymptotics layer.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

namespace carpetq {

using Int = boost::multiprecision::cpp_int;
// expression templates off so arithmetic yields Rat values directly
using Rat = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<boost::multiprecision::backends::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

inline Int pow_int(Int base, unsigned exp) {
  Int r = 1;
  while (exp) {
    if (exp & 1u) r *= base;
    base *= base;
    exp >>= 1u;
  }
  return r;
}

inline Rat pow_rat(const Rat& base, unsigned exp) {
  return Rat(pow_int(boost::multiprecision::numerator(base), exp),
             pow_int(boost::multiprecision::denominator(base), exp));
}

// Exact point in the plane.
struct Pt {
  Rat x;
  Rat y;

  friend bool operator==(const Pt& a, const Pt& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(const Pt& a, const Pt& b) { return !(a == b); }
  friend bool operator<(const Pt& a, const Pt& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  }
};

inline Rat sq_dist(const Pt& a, const Pt& b) {
  Rat dx = a.x - b.x;
  Rat dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline bool in_unit_square(const Pt& p) {
  return p.x >= 0 && p.x <= 1 && p.y >= 0 && p.y <= 1;
}

// "p/q" (canonical, q >= 1) with plain "p" accepted on input.
inline std::string format_rational(const Rat& r) {
  const Int& num = boost::multiprecision::numerator(r);
  const Int& den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline Rat parse_rational(std::string_view s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string_view::npos) return Rat(Int(std::string(s)));
    Int num(std::string(s.substr(0, slash)));
    Int den(std::string(s.substr(slash + 1)));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rat(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a rational: '" + std::string(s) + "'");
  }
}

// The dihedral group of the unit square (8 elements). Element order is fixed
// so tests and reports are reproducible: identity first, then the swap,
// combined with the four flip patterns.
struct Symmetry {
  bool swap_xy = false;
  bool flip_x = false;
  bool flip_y = false;

  Pt apply(const Pt& p) const {
    Rat x = swap_xy ? p.y : p.x;
    Rat y = swap_xy ? p.x : p.y;
    if (flip_x) x = 1 - x;
    if (flip_y) y = 1 - y;
    return Pt{std::move(x), std::move(y)};
  }
};

inline const std::array<Symmetry, 8>& square_symmetries() {
  static const std::array<Symmetry, 8> all = {{
      {false, false, false},
      {false, true, false},
      {false, false, true},
      {false, true, true},
      {true, false, false},
      {true, true, false},
      {true, false, true},
      {true, true, true},
  }};
  return all;
}

}  // namespace carpetq
