// Voronoi assignment with deterministic tie-breaking and the exact
// square-versus-cell classification used by the certified evaluator.

#pragma once

#include <carpetq/rational.hpp>

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace carpetq {

// Ordered list of distinct sites in the unit square.
struct Codebook {
  std::vector<Pt> points;

  std::size_t size() const { return points.size(); }
  const Pt& operator[](std::size_t i) const { return points[i]; }

  friend bool operator==(const Codebook& a, const Codebook& b) { return a.points == b.points; }
  friend bool operator!=(const Codebook& a, const Codebook& b) { return !(a == b); }
};

inline void validate_codebook(const Codebook& cb) {
  if (cb.points.empty()) throw std::invalid_argument("codebook is empty");
  for (std::size_t i = 0; i < cb.size(); ++i) {
    if (!in_unit_square(cb[i])) throw std::invalid_argument("codebook point outside unit square");
    for (std::size_t j = i + 1; j < cb.size(); ++j)
      if (cb[i] == cb[j]) throw std::invalid_argument("codebook points not distinct");
  }
}

// Index minimizing exact squared distance; ties go to the lowest index.
inline std::size_t nearest_site(const Codebook& cb, const Pt& p) {
  if (cb.points.empty()) throw std::invalid_argument("codebook is empty");
  std::size_t best = 0;
  Rat best_d = sq_dist(p, cb[0]);
  for (std::size_t j = 1; j < cb.size(); ++j) {
    Rat d = sq_dist(p, cb[j]);
    if (d < best_d) {
      best_d = std::move(d);
      best = j;
    }
  }
  return best;
}

// Axis-aligned square with exact corner and side.
struct SquareRegion {
  Pt corner;
  Rat side;

  Pt center() const { return Pt{corner.x + side / 2, corner.y + side / 2}; }

  std::array<Pt, 4> corners() const {
    return {Pt{corner.x, corner.y}, Pt{corner.x + side, corner.y},
            Pt{corner.x, corner.y + side}, Pt{corner.x + side, corner.y + side}};
  }
};

namespace detail {

inline Rat min_sq_dist_to_square(const Pt& p, const SquareRegion& sq) {
  auto clamp1 = [](const Rat& v, const Rat& lo, const Rat& hi) {
    if (v < lo) return lo - v;
    if (v > hi) return v - hi;
    return Rat(0);
  };
  Rat dx = clamp1(p.x, sq.corner.x, sq.corner.x + sq.side);
  Rat dy = clamp1(p.y, sq.corner.y, sq.corner.y + sq.side);
  return dx * dx + dy * dy;
}

inline Rat max_sq_dist_to_square(const Pt& p, const SquareRegion& sq) {
  Rat best(0);
  for (const Pt& c : sq.corners()) {
    Rat d = sq_dist(p, c);
    if (d > best) best = std::move(d);
  }
  return best;
}

// Drops sites that are provably beaten everywhere in the square: site i can
// be nearest (or tie) somewhere in sq only if min_dist(i)^2 <= u where
// u = min over sites of the max squared distance to sq. Pruning never
// changes a classification or a nearest-site outcome inside the square.
inline std::vector<std::size_t> prune_sites(const Codebook& cb, const SquareRegion& sq,
                                            const std::vector<std::size_t>& active) {
  Rat u;
  bool first = true;
  for (std::size_t j : active) {
    Rat m = max_sq_dist_to_square(cb[j], sq);
    if (first || m < u) {
      u = std::move(m);
      first = false;
    }
  }
  std::vector<std::size_t> keep;
  keep.reserve(active.size());
  for (std::size_t j : active)
    if (min_sq_dist_to_square(cb[j], sq) <= u) keep.push_back(j);
  return keep;
}

inline std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

// Resolved iff a single site is weakly nearest at all four corners; a convex
// cell contains the square iff it contains the corners, so the closed-cell
// test attributes measure-zero boundary contact to the lowest such site.
inline std::optional<std::size_t> classify_square_among(const Codebook& cb,
                                                        const SquareRegion& sq,
                                                        const std::vector<std::size_t>& sites) {
  std::vector<std::size_t> witnesses;
  bool first_corner = true;
  for (const Pt& c : sq.corners()) {
    Rat best_d;
    bool first = true;
    std::vector<std::size_t> argmin;
    for (std::size_t j : sites) {
      Rat d = sq_dist(c, cb[j]);
      if (first || d < best_d) {
        best_d = std::move(d);
        argmin.assign(1, j);
        first = false;
      } else if (d == best_d) {
        argmin.push_back(j);
      }
    }
    if (first_corner) {
      witnesses = std::move(argmin);
      first_corner = false;
    } else {
      std::vector<std::size_t> kept;
      for (std::size_t w : witnesses)
        if (std::find(argmin.begin(), argmin.end(), w) != argmin.end()) kept.push_back(w);
      witnesses = std::move(kept);
    }
    if (witnesses.empty()) return std::nullopt;
  }
  return witnesses.front();  // sites iterated in increasing order
}

}  // namespace detail

inline std::optional<std::size_t> classify_square(const Codebook& cb, const SquareRegion& sq) {
  if (cb.points.empty()) throw std::invalid_argument("codebook is empty");
  return detail::classify_square_among(cb, sq, detail::all_indices(cb.size()));
}

}  // namespace carpetq
