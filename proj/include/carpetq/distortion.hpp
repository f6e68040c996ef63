// Certified distortion evaluation for arbitrary codebooks via recursive
// cylinder descent, exact Voronoi-cell centroids, and Lloyd iteration on
// atomic discretizations.

#pragma once

#include <carpetq/geometry.hpp>
#include <carpetq/measure.hpp>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace carpetq {

// Certified lower/upper bound pair; lo == hi for exact results.
struct Interval {
  Rat lo;
  Rat hi;

  bool exact() const { return lo == hi; }
};

struct AmbiguousCellError : std::runtime_error {
  explicit AmbiguousCellError(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateCellError : std::runtime_error {
  std::size_t site;
  explicit DegenerateCellError(std::size_t s)
      : std::runtime_error("Voronoi cell of site " + std::to_string(s) +
                           " captured no atoms"),
        site(s) {}
};

namespace detail {

// Floor/ceil rational bounds on sqrt(v), via integer square root at a fixed
// binary scale. Used only for the leaf brackets of the descent.
inline std::pair<Rat, Rat> sqrt_bounds(const Rat& v) {
  if (v < 0) throw std::invalid_argument("sqrt of negative");
  if (v == 0) return {Rat(0), Rat(0)};
  static const Int scale = pow_int(2, 48);
  const Int scale2 = scale * scale;
  const Int& p = boost::multiprecision::numerator(v);
  const Int& q = boost::multiprecision::denominator(v);
  Int lo_int = boost::multiprecision::sqrt(Int(p * scale2 / q));
  Int hi_int = boost::multiprecision::sqrt(Int((p * scale2 + q - 1) / q)) + 1;
  return {Rat(lo_int, scale), Rat(hi_int, scale)};
}

struct BoundsAccumulator {
  Rat lo;
  Rat hi;
};

// Recursive descent over cylinder squares. A resolved cylinder contributes
// its exact closed-form integral; an ambiguous cylinder at the depth cap
// contributes the ball bracket [w*max(0,d-r)^2, w*(d+r)^2] where r is the
// half-diagonal, bounded above by the rational 17/(24*3^K).
inline void descend_bounds(const Codebook& cb, const SquareRegion& sq, unsigned depth,
                           unsigned depth_cap, const std::vector<std::size_t>& active,
                           BoundsAccumulator& acc) {
  auto resolved = classify_square_among(cb, sq, active);
  if (resolved) {
    // 4^-k * (9^-k * V + |center - site|^2) with weight/side carried by sq
    Rat w(1, pow_int(4, depth));
    Rat variance_term = Rat(1, pow_int(9, depth)) * Rat(1, 4);
    Rat d2 = sq_dist(sq.center(), cb[*resolved]);
    Rat exact = w * (variance_term + d2);
    acc.lo += exact;
    acc.hi += exact;
    return;
  }
  if (depth == depth_cap) {
    Rat w(1, pow_int(4, depth));
    Rat d2;
    bool first = true;
    Pt c = sq.center();
    for (std::size_t j : active) {
      Rat d = sq_dist(c, cb[j]);
      if (first || d < d2) {
        d2 = std::move(d);
        first = false;
      }
    }
    auto [s_lo, s_hi] = sqrt_bounds(d2);
    Rat r_hat = Rat(17, 24) / pow_int(3, depth);
    Rat low = s_lo - r_hat;
    if (low < 0) low = 0;
    acc.lo += w * low * low;
    Rat high = s_hi + r_hat;
    acc.hi += w * high * high;
    return;
  }
  Rat child_side = sq.side / 3;
  for (int i = 1; i <= 4; ++i) {
    const Pt& t = similitude(i).translation;
    SquareRegion child{Pt{sq.corner.x + sq.side * t.x, sq.corner.y + sq.side * t.y}, child_side};
    descend_bounds(cb, child, depth + 1, depth_cap, prune_sites(cb, child, active), acc);
  }
}

}  // namespace detail

// Certified bracket [lo, hi] containing the true distortion of the codebook.
inline Interval distortion_bounds(const Codebook& cb, unsigned depth_cap) {
  if (cb.points.empty()) throw std::invalid_argument("codebook is empty");
  if (depth_cap < 1) throw std::invalid_argument("depth_cap must be >= 1");
  detail::BoundsAccumulator acc{Rat(0), Rat(0)};
  SquareRegion root{Pt{Rat(0), Rat(0)}, Rat(1)};
  detail::descend_bounds(cb, root, 0, depth_cap, detail::all_indices(cb.size()), acc);
  return Interval{std::move(acc.lo), std::move(acc.hi)};
}

// Exact sum of cylinder integrals against a fixed point, over pairwise
// non-overlapping words. Reproduces the hand-computed lower-bound partial
// sums when fed the printed word families. With include_variance_terms off,
// only the weighted centroid distances are summed.
inline Rat partial_sum_lower_bound(const Pt& point, const std::vector<Word>& words,
                                   bool include_variance_terms = true) {
  for (std::size_t i = 0; i < words.size(); ++i)
    for (std::size_t j = 0; j < words.size(); ++j)
      if (i != j && words[i].extends(words[j]))
        throw std::invalid_argument("overlapping words: '" + words[i].str() + "' extends '" +
                                    words[j].str() + "'");
  Rat sum(0);
  for (const Word& w : words) {
    if (include_variance_terms) {
      sum += cylinder_point_distortion(w, point);
    } else {
      Rat weight(1, pow_int(4, static_cast<unsigned>(w.length())));
      sum += weight * sq_dist(word_apply(w, Pt{Rat(1, 2), Rat(1, 2)}), point);
    }
  }
  return sum;
}

namespace detail {

struct CellMoment {
  Pt weighted_sum{Rat(0), Rat(0)};
  Rat mass{0};
};

// When a cylinder is centered on a diagonal of the square and the surviving
// candidate sites are exactly a mirror pair across that diagonal, the
// measure inside splits half-half, and the two conditional means are the
// cylinder images of the half-carpet means: (7/10,3/10)/(3/10,7/10) about
// the main diagonal, (3/10,3/10)/(7/10,7/10) about the anti-diagonal.
struct MirrorSplit {
  std::size_t first_site;   // gets the half containing the first mean below
  std::size_t second_site;
  Pt first_mean;
  Pt second_mean;
};

inline std::optional<MirrorSplit> mirror_split(const Codebook& cb, const SquareRegion& sq,
                                               const std::vector<std::size_t>& active) {
  if (active.size() != 2) return std::nullopt;
  Pt c = sq.center();
  const Pt& a = cb[active[0]];
  const Pt& b = cb[active[1]];
  if (c.x == c.y && a.x == b.y && a.y == b.x && a.x != a.y) {
    // main diagonal; the site with larger x owns the lower half (x2 < x1)
    Pt below{sq.corner.x + sq.side * Rat(7, 10), sq.corner.y + sq.side * Rat(3, 10)};
    Pt above{sq.corner.x + sq.side * Rat(3, 10), sq.corner.y + sq.side * Rat(7, 10)};
    if (a.x > a.y) return MirrorSplit{active[0], active[1], std::move(below), std::move(above)};
    return MirrorSplit{active[1], active[0], std::move(below), std::move(above)};
  }
  if (c.x + c.y == 1 && a.x + b.y == 1 && a.y + b.x == 1 && a.x + a.y != 1) {
    // anti-diagonal; the site with x+y < 1 owns the lower-left half
    Pt lower{sq.corner.x + sq.side * Rat(3, 10), sq.corner.y + sq.side * Rat(3, 10)};
    Pt upper{sq.corner.x + sq.side * Rat(7, 10), sq.corner.y + sq.side * Rat(7, 10)};
    if (a.x + a.y < 1) return MirrorSplit{active[0], active[1], std::move(lower), std::move(upper)};
    return MirrorSplit{active[1], active[0], std::move(lower), std::move(upper)};
  }
  return std::nullopt;
}

inline void descend_cells(const Codebook& cb, const SquareRegion& sq, unsigned depth,
                          unsigned depth_cap, const std::vector<std::size_t>& active,
                          std::vector<CellMoment>& cells) {
  auto resolved = classify_square_among(cb, sq, active);
  if (resolved) {
    Rat w(1, pow_int(4, depth));
    Pt c = sq.center();
    CellMoment& m = cells[*resolved];
    m.weighted_sum.x += w * c.x;
    m.weighted_sum.y += w * c.y;
    m.mass += w;
    return;
  }
  if (auto split = mirror_split(cb, sq, active)) {
    Rat half(1, 2 * pow_int(4, depth));
    CellMoment& m1 = cells[split->first_site];
    m1.weighted_sum.x += half * split->first_mean.x;
    m1.weighted_sum.y += half * split->first_mean.y;
    m1.mass += half;
    CellMoment& m2 = cells[split->second_site];
    m2.weighted_sum.x += half * split->second_mean.x;
    m2.weighted_sum.y += half * split->second_mean.y;
    m2.mass += half;
    return;
  }
  if (depth == depth_cap)
    throw AmbiguousCellError("cylinder still ambiguous at depth " + std::to_string(depth_cap));
  Rat child_side = sq.side / 3;
  for (int i = 1; i <= 4; ++i) {
    const Pt& t = similitude(i).translation;
    SquareRegion child{Pt{sq.corner.x + sq.side * t.x, sq.corner.y + sq.side * t.y}, child_side};
    descend_cells(cb, child, depth + 1, depth_cap, prune_sites(cb, child, active), cells);
  }
}

inline std::vector<CellMoment> cell_moments(const Codebook& cb, unsigned depth_cap) {
  if (cb.points.empty()) throw std::invalid_argument("codebook is empty");
  std::vector<CellMoment> cells(cb.size());
  SquareRegion root{Pt{Rat(0), Rat(0)}, Rat(1)};
  descend_cells(cb, root, 0, depth_cap, all_indices(cb.size()), cells);
  return cells;
}

}  // namespace detail

struct CellCentroid {
  Pt mean;
  Rat mass;
};

// Exact conditional mean and mass of one Voronoi cell, or AmbiguousCellError
// when some cylinder neither resolves nor splits by the depth cap.
inline CellCentroid cell_centroid(const Codebook& cb, std::size_t site, unsigned depth_cap) {
  if (site >= cb.size()) throw std::invalid_argument("site index out of range");
  auto cells = detail::cell_moments(cb, depth_cap);
  const auto& m = cells[site];
  if (m.mass == 0) throw std::domain_error("cell of site " + std::to_string(site) + " has mass 0");
  return CellCentroid{Pt{m.weighted_sum.x / m.mass, m.weighted_sum.y / m.mass}, m.mass};
}

// True iff every site equals the exact centroid of its own cell.
inline bool is_cvt(const Codebook& cb, unsigned depth_cap) {
  auto cells = detail::cell_moments(cb, depth_cap);
  for (std::size_t j = 0; j < cb.size(); ++j) {
    if (cells[j].mass == 0) return false;
    if (Pt{cells[j].weighted_sum.x / cells[j].mass, cells[j].weighted_sum.y / cells[j].mass} !=
        cb[j])
      return false;
  }
  return true;
}

namespace detail {

// Atom coordinates over a per-point common denominator, so Lloyd assignment
// can compare squared distances by cpp_int cross-multiplication with no
// rational normalization. Exactly equivalent to comparing Rat values.
struct ScaledPt {
  Int xn, yn, den;
};

inline ScaledPt scale_point(const Pt& p) {
  const Int& xd = boost::multiprecision::denominator(p.x);
  const Int& yd = boost::multiprecision::denominator(p.y);
  Int den = boost::multiprecision::lcm(xd, yd);
  return ScaledPt{boost::multiprecision::numerator(p.x) * (den / xd),
                  boost::multiprecision::numerator(p.y) * (den / yd), std::move(den)};
}

struct Assignment {
  std::vector<std::size_t> site_of_atom;
  Rat distortion;  // mass-weighted sum of squared distances
};

inline Assignment assign_atoms(const Codebook& cb, const std::vector<WeightedPoint>& atom_list) {
  std::vector<ScaledPt> sites;
  sites.reserve(cb.size());
  for (const Pt& p : cb.points) sites.push_back(scale_point(p));

  Assignment out;
  out.site_of_atom.resize(atom_list.size());
  out.distortion = Rat(0);

  Int dx, dy, num, best_num, best_den, cross_a, cross_b;
  for (std::size_t i = 0; i < atom_list.size(); ++i) {
    ScaledPt a = scale_point(atom_list[i].point);
    std::size_t best = 0;
    bool first = true;
    for (std::size_t j = 0; j < sites.size(); ++j) {
      const ScaledPt& s = sites[j];
      dx = a.xn * s.den - s.xn * a.den;
      dy = a.yn * s.den - s.yn * a.den;
      num = dx * dx + dy * dy;
      Int den = s.den * s.den;  // the a.den^2 factor is common to all sites
      if (first) {
        best_num = num;
        best_den = den;
        best = j;
        first = false;
      } else {
        cross_a = num * best_den;
        cross_b = best_num * den;
        if (cross_a < cross_b) {
          best_num = num;
          best_den = std::move(den);
          best = j;
        }
      }
    }
    out.site_of_atom[i] = best;
    out.distortion += atom_list[i].mass * Rat(best_num, best_den * a.den * a.den);
  }
  return out;
}

}  // namespace detail

// Distortion of a codebook against an atom list, exactly.
inline Rat atom_distortion(const Codebook& cb, const std::vector<WeightedPoint>& atom_list) {
  if (cb.points.empty()) throw std::invalid_argument("codebook is empty");
  return detail::assign_atoms(cb, atom_list).distortion;
}

namespace detail {

inline Codebook centroid_update(const Codebook& cb, const std::vector<WeightedPoint>& atom_list,
                                const Assignment& assignment) {
  std::vector<Pt> sums(cb.size(), Pt{Rat(0), Rat(0)});
  std::vector<Rat> masses(cb.size(), Rat(0));
  for (std::size_t i = 0; i < atom_list.size(); ++i) {
    std::size_t j = assignment.site_of_atom[i];
    sums[j].x += atom_list[i].mass * atom_list[i].point.x;
    sums[j].y += atom_list[i].mass * atom_list[i].point.y;
    masses[j] += atom_list[i].mass;
  }
  Codebook next;
  next.points.reserve(cb.size());
  for (std::size_t j = 0; j < cb.size(); ++j) {
    if (masses[j] == 0) throw DegenerateCellError(j);
    next.points.push_back(Pt{sums[j].x / masses[j], sums[j].y / masses[j]});
  }
  return next;
}

}  // namespace detail

// One Lloyd update: each site moves to the mass-weighted mean of the atoms
// assigned to it (ties to the lowest index); an empty cell raises
// DegenerateCellError carrying the offending site.
inline Codebook lloyd_step(const Codebook& cb, const std::vector<WeightedPoint>& atom_list) {
  if (cb.points.empty()) throw std::invalid_argument("codebook is empty");
  return detail::centroid_update(cb, atom_list, detail::assign_atoms(cb, atom_list));
}

struct LloydReport {
  Codebook codebook;
  Rat distortion;  // of the final codebook, on the atom measure
  unsigned iterations = 0;
  bool converged = false;
  std::vector<Rat> distortion_trace;  // distortion before each step
};

// Iterates lloyd_step until the codebook repeats exactly or max_iter is hit.
inline LloydReport lloyd_run(Codebook initial, const std::vector<WeightedPoint>& atom_list,
                             unsigned max_iter) {
  validate_codebook(initial);
  LloydReport report;
  report.codebook = std::move(initial);
  while (report.iterations < max_iter) {
    auto assignment = detail::assign_atoms(report.codebook, atom_list);
    report.distortion_trace.push_back(assignment.distortion);
    Codebook next = detail::centroid_update(report.codebook, atom_list, assignment);
    ++report.iterations;
    if (next == report.codebook) {
      report.converged = true;
      report.distortion = std::move(assignment.distortion);
      return report;
    }
    report.codebook = std::move(next);
  }
  report.distortion = atom_distortion(report.codebook, atom_list);
  return report;
}

}  // namespace carpetq
