// Closed-form construction, counting, and error formula for optimal sets of
// n-means on the carpet measure.
//
// For n >= 4 write n = m*4^l + k with 4^l <= n < 4^(l+1) and m in {1,2,3};
// an optimal set places a scaled optimal m-set in every level-l cylinder
// except the k cylinders of a chosen subset t, which receive a scaled
// optimal (m+1)-set. Base cases: one point at the mean; two points on a
// bisector of opposite sides (two variants); three points in an isosceles
// triangle (four rotations); the four level-1 centers (unique).

#pragma once

#include <carpetq/distortion.hpp>
#include <carpetq/geometry.hpp>
#include <carpetq/measure.hpp>

#include <map>
#include <stdexcept>
#include <vector>

namespace carpetq {

inline unsigned base_variant_count(int m) {
  switch (m) {
    case 1: return 1;
    case 2: return 2;
    case 3: return 4;
    case 4: return 1;
    default: throw std::invalid_argument("base set size must be in {1,2,3,4}");
  }
}

inline Codebook base_set(int m, unsigned variant) {
  if (variant >= base_variant_count(m))
    throw std::invalid_argument("variant index out of range for base set of size " +
                                std::to_string(m));
  auto p = [](int xn, int xd, int yn, int yd) { return Pt{Rat(xn, xd), Rat(yn, yd)}; };
  switch (m) {
    case 1:
      return Codebook{{p(1, 2, 1, 2)}};
    case 2:
      if (variant == 0) return Codebook{{p(1, 6, 1, 2), p(5, 6, 1, 2)}};
      return Codebook{{p(1, 2, 1, 6), p(1, 2, 5, 6)}};
    case 3:
      switch (variant) {
        case 0: return Codebook{{p(1, 6, 1, 6), p(5, 6, 1, 6), p(1, 2, 5, 6)}};
        case 1: return Codebook{{p(1, 6, 5, 6), p(5, 6, 5, 6), p(1, 2, 1, 6)}};
        case 2: return Codebook{{p(1, 6, 1, 6), p(1, 6, 5, 6), p(5, 6, 1, 2)}};
        default: return Codebook{{p(5, 6, 1, 6), p(5, 6, 5, 6), p(1, 6, 1, 2)}};
      }
    default:
      return Codebook{{p(1, 6, 1, 6), p(5, 6, 1, 6), p(1, 6, 5, 6), p(5, 6, 5, 6)}};
  }
}

struct Decomposition {
  Int n;
  unsigned level = 0;  // l with 4^l <= n < 4^(l+1)
  int m = 0;           // in {1,2,3}
  Int k;               // n - m*4^l, 0 <= k < 4^l
  std::vector<Word> t;  // the words given an extra point; |t| = k
};

inline Decomposition decompose(const Int& n) {
  if (n < 4) throw std::invalid_argument("decompose requires n >= 4");
  unsigned level = static_cast<unsigned>(boost::multiprecision::msb(n) / 2);
  while (pow_int(4, level + 1) <= n) ++level;
  while (pow_int(4, level) > n) --level;
  Int p4 = pow_int(4, level);
  Int m = n / p4;
  Decomposition d;
  d.n = n;
  d.level = level;
  d.m = static_cast<int>(m);
  d.k = n - m * p4;
  return d;
}

// Number of distinct optimal sets, exactly.
inline Int optimal_count(const Int& n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (n == 1) return 1;
  if (n == 2) return 2;
  if (n == 3) return 4;
  Decomposition d = decompose(n);
  if (d.level > 10) throw std::length_error("optimal_count: level too large to materialize");
  Int words = pow_int(4, d.level);
  unsigned vm = base_variant_count(d.m);
  if (d.k == 0) return pow_int(Int(vm), static_cast<unsigned>(words));
  // C(4^l, k) subset choices; variant choices per word on both sides of t
  Int choose = 1;
  for (Int i = 0; i < d.k; ++i) {
    choose *= words - i;
    choose /= i + 1;
  }
  unsigned plain = static_cast<unsigned>(words - d.k);
  unsigned boosted = static_cast<unsigned>(d.k);
  unsigned vm1 = base_variant_count(d.m + 1);
  return pow_int(Int(vm), plain) * choose * pow_int(Int(vm1), boosted);
}

// n-th quantization error, exactly. Base values 1/4, 5/36, 1/12, 1/36; above
// four the level-l decomposition scales them by 36^-l.
inline Rat quantization_error(const Int& n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  static const Rat base[5] = {Rat(0), Rat(1, 4), Rat(5, 36), Rat(1, 12), Rat(1, 36)};
  if (n <= 4) return base[static_cast<unsigned>(n)];
  Decomposition d = decompose(n);
  Int p4 = pow_int(4, d.level);
  Rat vm = base[static_cast<std::size_t>(d.m)];
  Rat vm1 = base[static_cast<std::size_t>(d.m + 1)];
  Rat plain = Rat((Int(d.m) + 1) * p4 - n);
  Rat boosted = Rat(d.k);
  return (plain * vm + boosted * vm1) / pow_int(36, d.level);
}

// Variant assignment for the words of one level; words absent from the map
// use variant 0.
using VariantMap = std::map<Word, unsigned>;

inline Codebook optimal_set(const Int& n, const std::vector<Word>& t,
                            const VariantMap& variants = {}) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  auto variant_of = [&variants](const Word& w) -> unsigned {
    auto it = variants.find(w);
    return it == variants.end() ? 0u : it->second;
  };
  if (n <= 3) {
    if (!t.empty()) throw std::invalid_argument("t must be empty for n <= 3");
    return base_set(static_cast<int>(n), variant_of(Word{}));
  }
  Decomposition d = decompose(n);
  if (Int(t.size()) != d.k)
    throw std::invalid_argument("t must contain exactly " + d.k.str() + " words");
  for (const Word& w : t) {
    if (w.length() != d.level)
      throw std::invalid_argument("word '" + w.str() + "' is not at level " +
                                  std::to_string(d.level));
  }
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j)
      if (t[i] == t[j]) throw std::invalid_argument("t contains duplicate words");

  Codebook out;
  out.points.reserve(static_cast<std::size_t>(d.n));
  for (const Word& w : words_of_length(d.level)) {
    bool in_t = std::find(t.begin(), t.end(), w) != t.end();
    int m = in_t ? d.m + 1 : d.m;
    unsigned variant = variant_of(w);
    if (variant >= base_variant_count(m))
      throw std::invalid_argument("variant " + std::to_string(variant) +
                                  " out of range at word '" + w.str() + "'");
    for (const Pt& p : base_set(m, variant).points) out.points.push_back(word_apply(w, p));
  }
  return out;
}

namespace detail {

// Odometer over per-word variant choices; the last word steps fastest.
inline bool advance_variants(std::vector<unsigned>& digits, const std::vector<unsigned>& radix) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < radix[i]) return true;
    digits[i] = 0;
  }
  return false;
}

// Lexicographically next k-subset of {0,...,total-1}; idx[i] may grow up to
// total - k + i.
inline bool advance_subset(std::vector<std::size_t>& idx, std::size_t total) {
  if (idx.empty()) return false;
  std::size_t k = idx.size();
  std::size_t i = k;
  while (i-- > 0) {
    if (idx[i] < total - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace detail

struct EnumeratedSet {
  Codebook codebook;
  std::vector<Word> t;
  VariantMap variants;
};

// Deterministic enumeration of distinct optimal sets: subsets t in
// lexicographic order, then variant assignments in mixed-radix order with
// the last word stepping fastest.
inline std::vector<EnumeratedSet> enumerate_optimal_sets(const Int& n, std::size_t limit) {
  if (limit < 1) throw std::invalid_argument("limit must be >= 1");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  std::vector<EnumeratedSet> out;
  if (n <= 3) {
    for (unsigned v = 0; v < base_variant_count(static_cast<int>(n)) && out.size() < limit; ++v) {
      VariantMap vm;
      if (v != 0) vm[Word{}] = v;
      out.push_back(EnumeratedSet{base_set(static_cast<int>(n), v), {}, std::move(vm)});
    }
    return out;
  }
  Decomposition d = decompose(n);
  auto words = words_of_length(d.level);
  std::size_t k = static_cast<std::size_t>(d.k);

  std::vector<std::size_t> subset(k);
  for (std::size_t i = 0; i < k; ++i) subset[i] = i;
  bool more_subsets = true;
  while (more_subsets && out.size() < limit) {
    std::vector<Word> t;
    t.reserve(k);
    for (std::size_t i : subset) t.push_back(words[i]);

    std::vector<unsigned> radix(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
      bool in_t = std::find(subset.begin(), subset.end(), i) != subset.end();
      radix[i] = base_variant_count(in_t ? d.m + 1 : d.m);
    }
    std::vector<unsigned> digits(words.size(), 0);
    do {
      VariantMap vm;
      for (std::size_t i = 0; i < words.size(); ++i)
        if (digits[i] != 0) vm[words[i]] = digits[i];
      out.push_back(EnumeratedSet{optimal_set(n, t, vm), t, std::move(vm)});
    } while (out.size() < limit && detail::advance_variants(digits, radix));

    if (k == 0) break;
    more_subsets = detail::advance_subset(subset, words.size());
  }
  return out;
}

inline std::vector<Codebook> enumerate_optimal(const Int& n, std::size_t limit) {
  std::vector<Codebook> out;
  for (auto& e : enumerate_optimal_sets(n, limit)) out.push_back(std::move(e.codebook));
  return out;
}

}  // namespace carpetq
