// Independent brute-force verification: multi-start Lloyd over depth-k atom
// measures, with k-means++-style seeding driven by std::mt19937_64. The
// refinement identity corrects the atom-measure distortion back to the
// continuous one: exact distortion = atom distortion + (1/4) * 9^-k whenever
// every Voronoi cell is a union of depth-k cylinders.

#pragma once

#include <carpetq/distortion.hpp>
#include <carpetq/optimal.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <random>
#include <thread>
#include <vector>

namespace carpetq {

struct OracleConfig {
  unsigned n = 2;
  unsigned depth = 5;
  unsigned restarts = 64;
  std::uint64_t seed = 0;
  unsigned max_iter = 200;
};

struct OracleResult {
  LloydReport best;
  Rat corrected_distortion;
  std::optional<std::size_t> matched_optimal;  // index into enumerate_optimal(n, ...)
  unsigned degenerate_restarts = 0;
  unsigned restarts_at_best = 0;  // how many restarts reached the best distortion
  unsigned best_restart_index = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Per-restart engine; independent of execution order so threaded and
// sequential runs agree bit for bit.
inline std::mt19937_64 restart_engine(std::uint64_t seed, unsigned restart) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(restart + 1)));
}

inline double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Squared-distance weighted seeding over the atom list. Weights are doubles
// (seeding only; the Lloyd iteration itself is exact).
inline Codebook seed_codebook(const std::vector<WeightedPoint>& atom_list, unsigned n,
                              std::mt19937_64& eng) {
  std::vector<double> ax(atom_list.size()), ay(atom_list.size());
  for (std::size_t i = 0; i < atom_list.size(); ++i) {
    ax[i] = atom_list[i].point.x.convert_to<double>();
    ay[i] = atom_list[i].point.y.convert_to<double>();
  }
  std::vector<std::size_t> chosen;
  chosen.push_back(static_cast<std::size_t>(eng() % atom_list.size()));
  std::vector<double> w(atom_list.size());
  while (chosen.size() < n) {
    double total = 0;
    for (std::size_t i = 0; i < atom_list.size(); ++i) {
      double best = 0;
      bool first = true;
      for (std::size_t c : chosen) {
        double dx = ax[i] - ax[c];
        double dy = ay[i] - ay[c];
        double d = dx * dx + dy * dy;
        if (first || d < best) {
          best = d;
          first = false;
        }
      }
      w[i] = best;
      total += best;
    }
    std::size_t pick = 0;
    if (total > 0) {
      double target = uniform01(eng) * total;
      double acc = 0;
      std::size_t last_positive = 0;
      for (std::size_t i = 0; i < atom_list.size(); ++i)
        if (w[i] > 0) last_positive = i;
      pick = last_positive;
      for (std::size_t i = 0; i < atom_list.size(); ++i) {
        acc += w[i];
        if (acc > target && w[i] > 0) {
          pick = i;
          break;
        }
      }
    } else {
      // all remaining atoms coincide with chosen sites; take the next unused
      for (std::size_t i = 0; i < atom_list.size(); ++i)
        if (std::find(chosen.begin(), chosen.end(), i) == chosen.end()) {
          pick = i;
          break;
        }
    }
    chosen.push_back(pick);
  }
  Codebook cb;
  cb.points.reserve(n);
  for (std::size_t c : chosen) cb.points.push_back(atom_list[c].point);
  return cb;
}

struct RestartOutcome {
  LloydReport report;
  unsigned degenerate_attempts = 0;
};

inline RestartOutcome run_restart(const std::vector<WeightedPoint>& atom_list,
                                  const OracleConfig& config, unsigned restart) {
  auto eng = restart_engine(config.seed, restart);
  RestartOutcome out;
  for (int attempt = 0; attempt < 16; ++attempt) {
    Codebook init = seed_codebook(atom_list, config.n, eng);
    try {
      out.report = lloyd_run(std::move(init), atom_list, config.max_iter);
      return out;
    } catch (const DegenerateCellError&) {
      ++out.degenerate_attempts;
    }
  }
  throw std::runtime_error("restart " + std::to_string(restart) +
                           " kept producing degenerate cells");
}

inline unsigned thread_count_override() {
  if (const char* env = std::getenv("CARPETQ_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return 1;
}

}  // namespace detail

// Minimum over site matchings of the L-infinity distance between two equal-
// size codebooks (exhaustive; intended for small n).
inline double matching_distance(const Codebook& a, const Codebook& b) {
  if (a.size() != b.size()) throw std::invalid_argument("codebook sizes differ");
  std::size_t n = a.size();
  if (n > 10) throw std::invalid_argument("matching_distance supports n <= 10");
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  auto linf = [](const Pt& p, const Pt& q) {
    double dx = std::abs(Rat(p.x - q.x).convert_to<double>());
    double dy = std::abs(Rat(p.y - q.y).convert_to<double>());
    return std::max(dx, dy);
  };
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, linf(a[i], b[perm[i]]));
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Multi-start Lloyd; deterministic for a fixed config. Restarts may run on
// CARPETQ_THREADS threads; the reduction picks the lowest distortion with
// ties broken by the lowest restart index either way.
inline OracleResult brute_force(const OracleConfig& config) {
  if (config.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (config.n < 1) throw std::invalid_argument("n must be >= 1");
  auto atom_list = atoms(config.depth);
  if (Int(config.n) > Int(atom_list.size()))
    throw std::invalid_argument("need at least as many atoms as sites");

  std::vector<detail::RestartOutcome> outcomes(config.restarts);
  unsigned threads = std::min(detail::thread_count_override(), config.restarts);
  if (threads <= 1) {
    for (unsigned r = 0; r < config.restarts; ++r)
      outcomes[r] = detail::run_restart(atom_list, config, r);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (unsigned r = t; r < config.restarts; r += threads)
          outcomes[r] = detail::run_restart(atom_list, config, r);
      });
    }
    for (auto& th : pool) th.join();
  }

  OracleResult result;
  std::size_t best_index = 0;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    result.degenerate_restarts += outcomes[r].degenerate_attempts;
    if (r == 0 || outcomes[r].report.distortion < outcomes[best_index].report.distortion)
      best_index = r;
  }
  for (const auto& o : outcomes)
    if (o.report.distortion == outcomes[best_index].report.distortion) ++result.restarts_at_best;
  result.best = outcomes[best_index].report;
  result.best_restart_index = static_cast<unsigned>(best_index);
  result.corrected_distortion =
      result.best.distortion + Rat(1, 4) * Rat(1, pow_int(9, config.depth));

  if (config.n <= 10) {
    auto enumerated = enumerate_optimal(config.n, 512);
    for (std::size_t i = 0; i < enumerated.size(); ++i) {
      if (enumerated[i].size() == result.best.codebook.size() &&
          matching_distance(result.best.codebook, enumerated[i]) <= 1e-6) {
        result.matched_optimal = i;
        break;
      }
    }
  }
  return result;
}

// The two centroidal-but-suboptimal configurations built around the square's
// diagonals: the mirror pair (7/10,3/10)/(3/10,7/10), and the three-point
// set with one point at a corner-cylinder center and two placed across the
// diagonal through it.
inline Codebook diagonal_pair_cvt() {
  return Codebook{{Pt{Rat(7, 10), Rat(3, 10)}, Pt{Rat(3, 10), Rat(7, 10)}}};
}

inline Codebook diagonal_three_point_cvt() {
  return Codebook{
      {Pt{Rat(5, 6), Rat(5, 6)}, Pt{Rat(13, 90), Rat(19, 30)}, Pt{Rat(19, 30), Rat(13, 90)}}};
}

struct DiagonalTrapReport {
  bool pair_is_cvt = false;
  bool three_point_is_cvt = false;
  Interval pair_bounds;
  Interval three_point_bounds;
  Interval triangle_bounds;        // the optimal three-point configuration
  bool pair_exceeds_optimum = false;         // pair lower bound exceeds the 2-point optimum 5/36
  bool three_point_exceeds_optimum = false;  // three-point lower bound exceeds 1/12
};

// Confirms that both diagonal configurations are exact fixed points of the
// centroid map (under the half-split rule) yet certifiably worse than the
// true optima.
inline DiagonalTrapReport diagonal_trap_check(unsigned depth) {
  if (depth < 6) throw std::invalid_argument("diagonal_trap_check needs depth >= 6");
  DiagonalTrapReport report;
  Codebook pair = diagonal_pair_cvt();
  Codebook three = diagonal_three_point_cvt();
  report.pair_is_cvt = is_cvt(pair, depth);
  report.three_point_is_cvt = is_cvt(three, depth);
  report.pair_bounds = distortion_bounds(pair, depth);
  report.three_point_bounds = distortion_bounds(three, depth);
  report.triangle_bounds = distortion_bounds(base_set(3, 0), depth);
  report.pair_exceeds_optimum = report.pair_bounds.lo > Rat(5, 36);
  report.three_point_exceeds_optimum = report.three_point_bounds.lo > Rat(1, 12);
  return report;
}

}  // namespace carpetq
