// The self-similar measure on the Sierpinski carpet: the four corner
// similitudes of ratio 1/3, symbolic cylinder squares, exact moments, the
// closed-form cylinder integral, and finite atomic discretizations.

#pragma once

#include <carpetq/rational.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace carpetq {

// Symbolic address over the alphabet {1,2,3,4}; empty word allowed.
class Word {
 public:
  Word() = default;

  explicit Word(std::string_view digits) {
    letters_.reserve(digits.size());
    for (char c : digits) {
      if (c < '1' || c > '4') throw std::invalid_argument("word letter outside {1,2,3,4}");
      letters_.push_back(static_cast<std::uint8_t>(c - '0'));
    }
  }

  static Word from_letters(std::vector<std::uint8_t> letters) {
    for (auto l : letters)
      if (l < 1 || l > 4) throw std::invalid_argument("word letter outside {1,2,3,4}");
    Word w;
    w.letters_ = std::move(letters);
    return w;
  }

  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  const std::vector<std::uint8_t>& letters() const { return letters_; }

  Word concat(const Word& tail) const {
    Word w = *this;
    w.letters_.insert(w.letters_.end(), tail.letters_.begin(), tail.letters_.end());
    return w;
  }

  Word appended(std::uint8_t letter) const {
    if (letter < 1 || letter > 4) throw std::invalid_argument("word letter outside {1,2,3,4}");
    Word w = *this;
    w.letters_.push_back(letter);
    return w;
  }

  // True when *this = prefix . x for some (possibly empty) x.
  bool extends(const Word& prefix) const {
    if (prefix.length() > length()) return false;
    return std::equal(prefix.letters_.begin(), prefix.letters_.end(), letters_.begin());
  }

  std::string str() const {
    std::string s;
    s.reserve(letters_.size());
    for (auto l : letters_) s.push_back(static_cast<char>('0' + l));
    return s;
  }

  friend bool operator==(const Word& a, const Word& b) { return a.letters_ == b.letters_; }
  friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }
  friend bool operator<(const Word& a, const Word& b) { return a.letters_ < b.letters_; }

 private:
  std::vector<std::uint8_t> letters_;
};

// All words of the given length in lexicographic order (1 < 2 < 3 < 4).
inline std::vector<Word> words_of_length(unsigned k) {
  std::vector<Word> out;
  out.reserve(static_cast<std::size_t>(1) << (2 * k));
  std::vector<std::uint8_t> cur(k, 1);
  while (true) {
    out.push_back(Word::from_letters(cur));
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == 4) {
      cur[static_cast<std::size_t>(i)] = 1;
      --i;
    }
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
  }
  return out;
}

// One of the four generating similitudes: p -> p/3 + translation(i).
struct Similitude {
  int index;
  Rat ratio;       // exactly 1/3
  Pt translation;  // one of (0,0),(2/3,0),(0,2/3),(2/3,2/3)
};

inline const Similitude& similitude(int i) {
  static const std::array<Similitude, 4> maps = {{
      {1, Rat(1, 3), Pt{Rat(0), Rat(0)}},
      {2, Rat(1, 3), Pt{Rat(2, 3), Rat(0)}},
      {3, Rat(1, 3), Pt{Rat(0), Rat(2, 3)}},
      {4, Rat(1, 3), Pt{Rat(2, 3), Rat(2, 3)}},
  }};
  if (i < 1 || i > 4) throw std::invalid_argument("similitude index outside {1,2,3,4}");
  return maps[static_cast<std::size_t>(i - 1)];
}

inline Pt similitude_apply(int i, const Pt& p) {
  const Similitude& s = similitude(i);
  return Pt{p.x / 3 + s.translation.x, p.y / 3 + s.translation.y};
}

// Composition in the address order: the first letter is applied last, so
// word_apply("12", p) = S_1(S_2(p)); the empty word is the identity.
inline Pt word_apply(const Word& w, Pt p) {
  const auto& ls = w.letters();
  for (auto it = ls.rbegin(); it != ls.rend(); ++it) p = similitude_apply(*it, p);
  return p;
}

// Geometric and measure data of the cylinder square addressed by a word.
struct CylinderSquare {
  Word word;
  Pt lower_corner;
  Rat side;      // 3^-k
  Pt centroid;   // image of the center (1/2,1/2)
  Rat weight;    // 4^-k
};

inline CylinderSquare cylinder(const Word& w) {
  const unsigned k = static_cast<unsigned>(w.length());
  Rat side = Rat(1, pow_int(3, k));
  Pt corner = word_apply(w, Pt{Rat(0), Rat(0)});
  Pt centroid{corner.x + side / 2, corner.y + side / 2};
  return CylinderSquare{w, std::move(corner), std::move(side), std::move(centroid),
                        Rat(1, pow_int(4, k))};
}

struct MomentData {
  Pt mean;       // (1/2, 1/2)
  Rat variance;  // 1/4 = 1/8 + 1/8
};

inline MomentData moments() { return MomentData{Pt{Rat(1, 2), Rat(1, 2)}, Rat(1, 4)}; }

// Expected squared distance from the cylinder's restriction of the measure to
// a fixed point: 4^-k * (9^-k * V + |centroid - a|^2) with V = 1/4.
inline Rat cylinder_point_distortion(const Word& w, const Pt& a) {
  const unsigned k = static_cast<unsigned>(w.length());
  Pt c = word_apply(w, Pt{Rat(1, 2), Rat(1, 2)});
  return Rat(1, pow_int(4, k)) * (Rat(1, pow_int(9, k)) * Rat(1, 4) + sq_dist(c, a));
}

struct WeightedPoint {
  Pt point;
  Rat mass;
};

struct DepthLimitError : std::runtime_error {
  explicit DepthLimitError(unsigned requested, unsigned max)
      : std::runtime_error("atom depth " + std::to_string(requested) + " exceeds maximum " +
                           std::to_string(max)) {}
};

inline constexpr unsigned kDefaultMaxAtomDepth = 12;

namespace detail {

template <typename Visit>
void visit_cells(Pt corner, Rat side, unsigned depth, const Visit& visit) {
  if (depth == 0) {
    visit(std::move(corner), std::move(side));
    return;
  }
  Rat child = side / 3;
  for (int i = 1; i <= 4; ++i) {
    const Pt& t = similitude(i).translation;
    visit_cells(Pt{corner.x + side * t.x, corner.y + side * t.y}, child, depth - 1, visit);
  }
}

}  // namespace detail

// Depth-k discretization: one atom of mass 4^-k at each cylinder centroid,
// in lexicographic word order.
inline std::vector<WeightedPoint> atoms(unsigned k, unsigned max_depth = kDefaultMaxAtomDepth) {
  if (k > max_depth) throw DepthLimitError(k, max_depth);
  std::vector<WeightedPoint> out;
  out.reserve(static_cast<std::size_t>(1) << (2 * k));
  Rat mass(1, pow_int(4, k));
  detail::visit_cells(Pt{Rat(0), Rat(0)}, Rat(1), k, [&](Pt corner, Rat side) {
    out.push_back(WeightedPoint{Pt{corner.x + side / 2, corner.y + side / 2}, mass});
  });
  return out;
}

struct WeightedValue {
  Rat value;
  Rat mass;
};

enum class Axis { X, Y };

// Projection of the depth-k atoms onto one axis, equal coordinates merged.
// The result is the depth-k discretization of the middle-thirds Cantor
// distribution: 2^k values of mass 2^-k each, ascending.
inline std::vector<WeightedValue> marginal_atoms(unsigned k,
                                                 Axis axis,
                                                 unsigned max_depth = kDefaultMaxAtomDepth) {
  std::map<Rat, Rat> merged;
  for (const auto& a : atoms(k, max_depth)) {
    const Rat& c = axis == Axis::X ? a.point.x : a.point.y;
    merged[c] += a.mass;
  }
  std::vector<WeightedValue> out;
  out.reserve(merged.size());
  for (auto& [v, m] : merged) out.push_back(WeightedValue{v, m});
  return out;
}

// Depth-k atoms of the Cantor distribution built directly from the two maps
// x -> x/3 and x -> x/3 + 2/3, lexicographic (equivalently ascending).
inline std::vector<WeightedValue> cantor_atoms(unsigned k) {
  std::vector<Rat> vals{Rat(1, 2)};
  for (unsigned d = 0; d < k; ++d) {
    std::vector<Rat> next;
    next.reserve(vals.size() * 2);
    for (const Rat& v : vals) {
      next.push_back(v / 3);
      next.push_back(v / 3 + Rat(2, 3));
    }
    vals = std::move(next);
  }
  std::sort(vals.begin(), vals.end());
  Rat mass(1, pow_int(2, k));
  std::vector<WeightedValue> out;
  out.reserve(vals.size());
  for (Rat& v : vals) out.push_back(WeightedValue{std::move(v), mass});
  return out;
}

// CSV schema: word,x_num,x_den,y_num,y_den,mass_num,mass_den
inline void write_atoms_csv(std::ostream& os, unsigned k,
                            unsigned max_depth = kDefaultMaxAtomDepth) {
  if (k > max_depth) throw DepthLimitError(k, max_depth);
  os << "word,x_num,x_den,y_num,y_den,mass_num,mass_den\n";
  Rat mass(1, pow_int(4, k));
  const Int mnum = boost::multiprecision::numerator(mass);
  const Int mden = boost::multiprecision::denominator(mass);
  for (const Word& w : words_of_length(k)) {
    Pt c = word_apply(w, Pt{Rat(1, 2), Rat(1, 2)});
    os << w.str() << ',' << boost::multiprecision::numerator(c.x) << ','
       << boost::multiprecision::denominator(c.x) << ',' << boost::multiprecision::numerator(c.y)
       << ',' << boost::multiprecision::denominator(c.y) << ',' << mnum << ',' << mden << '\n';
  }
}

}  // namespace carpetq
