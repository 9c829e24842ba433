#pragma once

// Reed-Muller index sets, the monomial view of polar-transform rows, and
// single-argument dynamic freezing constraints that stay invariant under
// coordinate permutations fixing the top index bit.
//
// Bit order: bit t of an index k is the coefficient of 2^t, so the top bit
// (bit n-1) is set exactly for k >= N/2.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "rmdyn/error.hpp"
#include "rmdyn/gf2.hpp"

namespace rmdyn {

inline int hamming_weight(std::size_t k) noexcept { return std::popcount(k); }

struct CodeSpec {
  int n = 0;                            // log2 block length
  int r = 0;                            // Reed-Muller order
  std::size_t length = 1;               // N = 2^n
  std::size_t dimension = 1;            // K
  std::vector<std::size_t> info_set;    // ascending
  std::vector<std::size_t> frozen_set;  // ascending
  std::vector<std::uint8_t> is_info;    // length N mask

  std::size_t redundancy() const noexcept { return length - dimension; }
  double rate() const noexcept { return static_cast<double>(dimension) / static_cast<double>(length); }
  bool top_bit(std::size_t k) const noexcept { return n > 0 && ((k >> (n - 1)) & 1U); }
  std::size_t complement(std::size_t k) const noexcept { return (length - 1) ^ k; }

  friend bool operator==(const CodeSpec& a, const CodeSpec& b) noexcept { return a.n == b.n && a.r == b.r; }
};

// R(r, n): information rows are those whose index has weight >= n - r.
inline CodeSpec make_spec(int r, int n) {
  if (n < 0 || n > kMaxLogLength) throw ConfigError("make_spec: n must be in [0, 16]");
  if (r < 0 || r > n) throw ConfigError("make_spec: r must be in [0, n]");
  CodeSpec spec;
  spec.n = n;
  spec.r = r;
  spec.length = std::size_t{1} << n;
  spec.is_info.assign(spec.length, 0);
  for (std::size_t k = 0; k < spec.length; ++k) {
    if (hamming_weight(k) >= n - r) {
      spec.info_set.push_back(k);
      spec.is_info[k] = 1;
    } else {
      spec.frozen_set.push_back(k);
    }
  }
  spec.dimension = spec.info_set.size();
  return spec;
}

// Monomial prod_{j in variables} z_j. Row k of G_N is the evaluation of the
// monomial whose variables are the zero bits of k.
struct Monomial {
  std::vector<int> variables;  // ascending
  int degree() const noexcept { return static_cast<int>(variables.size()); }
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

inline Monomial monomial_of_row(std::size_t k, int n) {
  if (n < 0 || n > kMaxLogLength || k >= (std::size_t{1} << n)) throw ConfigError("monomial_of_row: index out of range");
  Monomial m;
  for (int j = 0; j < n; ++j) {
    if (((k >> j) & 1U) == 0) m.variables.push_back(j);
  }
  return m;
}

inline std::size_t row_of_monomial(const Monomial& m, int n) {
  std::size_t k = (std::size_t{1} << n) - 1;
  for (int v : m.variables) k &= ~(std::size_t{1} << v);
  return k;
}

// Coordinate m is evaluated at the point whose binary representation is N-m-1.
inline std::vector<std::uint8_t> eval_monomial(const Monomial& mono, int n) {
  if (n < 0 || n > kMaxLogLength) throw ConfigError("eval_monomial: n out of range");
  std::size_t mask = 0;
  for (int v : mono.variables) {
    if (v < 0 || v >= n) throw ConfigError("eval_monomial: variable index out of range");
    mask |= std::size_t{1} << v;
  }
  const std::size_t len = std::size_t{1} << n;
  std::vector<std::uint8_t> out(len);
  for (std::size_t m = 0; m < len; ++m) {
    const std::size_t point = len - m - 1;
    out[m] = (point & mask) == mask ? 1 : 0;
  }
  return out;
}

enum class RuleKind : std::uint8_t { kInfo, kZero, kDynamic };

struct FreezeRule {
  RuleKind kind = RuleKind::kZero;
  std::size_t source = 0;  // meaningful for kDynamic only
  friend bool operator==(const FreezeRule&, const FreezeRule&) = default;
};

// Set of frozen-side Hamming weights whose dynamic constraints are active.
using Variant = std::vector<int>;

struct Constraint {
  CodeSpec spec;
  Variant variant;               // ascending
  std::vector<FreezeRule> rules;  // one per index 0..N-1
  BitMatrix v;                   // (N-K) x N, one row per frozen index in ascending order
  BitMatrix w;                   // K x N, one row per information index in ascending order

  std::size_t dynamic_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(rules.begin(), rules.end(), [](const FreezeRule& f) { return f.kind == RuleKind::kDynamic; }));
  }
};

// Weights i for which both the frozen class {k in F : top bit set, wt = i}
// and its partner {j in I : top bit clear, wt = n - i} are non-empty.
// These are exactly 1 <= i <= min(r, n - r - 1).
inline std::vector<int> dynamic_weight_classes(const CodeSpec& spec) {
  std::vector<bool> frozen_side(static_cast<std::size_t>(spec.n) + 1, false);
  std::vector<bool> info_side(static_cast<std::size_t>(spec.n) + 1, false);
  for (std::size_t k = 0; k < spec.length; ++k) {
    const int wt = hamming_weight(k);
    if (!spec.is_info[k] && spec.top_bit(k)) frozen_side[static_cast<std::size_t>(wt)] = true;
    if (spec.is_info[k] && !spec.top_bit(k)) info_side[static_cast<std::size_t>(wt)] = true;
  }
  std::vector<int> out;
  for (int i = 1; i <= spec.n; ++i) {
    if (frozen_side[static_cast<std::size_t>(i)] && info_side[static_cast<std::size_t>(spec.n - i)]) out.push_back(i);
  }
  return out;
}

inline Constraint build_constraint(const CodeSpec& spec, Variant variant) {
  std::sort(variant.begin(), variant.end());
  variant.erase(std::unique(variant.begin(), variant.end()), variant.end());
  const auto classes = dynamic_weight_classes(spec);
  for (int i : variant) {
    if (!std::binary_search(classes.begin(), classes.end(), i)) {
      throw ConfigError("build_constraint: variant weight " + std::to_string(i) + " references an empty weight class");
    }
  }

  Constraint c;
  c.spec = spec;
  c.variant = variant;
  c.rules.resize(spec.length);
  for (std::size_t k = 0; k < spec.length; ++k) {
    if (spec.is_info[k]) {
      c.rules[k] = {RuleKind::kInfo, 0};
      continue;
    }
    c.rules[k] = {RuleKind::kZero, 0};
    if (!spec.top_bit(k)) continue;
    const std::size_t j = spec.complement(k);
    // A frozen complement means u_k = u_j = 0; no transitive chasing.
    if (spec.is_info[j] && std::binary_search(variant.begin(), variant.end(), hamming_weight(k))) {
      c.rules[k] = {RuleKind::kDynamic, j};
    }
  }

  std::vector<std::size_t> info_row(spec.length, 0);
  for (std::size_t t = 0; t < spec.info_set.size(); ++t) info_row[spec.info_set[t]] = t;

  c.v = BitMatrix(spec.redundancy(), spec.length);
  c.w = BitMatrix(spec.dimension, spec.length);
  for (std::size_t t = 0; t < spec.info_set.size(); ++t) c.w.set(t, spec.info_set[t], true);
  for (std::size_t t = 0; t < spec.frozen_set.size(); ++t) {
    const std::size_t k = spec.frozen_set[t];
    c.v.set(t, k, true);
    if (c.rules[k].kind == RuleKind::kDynamic) {
      c.v.set(t, c.rules[k].source, true);
      c.w.set(info_row[c.rules[k].source], k, true);
    }
  }
  return c;
}

// D = min(|{i in F : top bit 1}|, |{j in I : top bit 0}|).
inline std::size_t max_dynamic_count(const CodeSpec& spec) {
  std::size_t frozen_high = 0;
  std::size_t info_low = 0;
  for (std::size_t k = 0; k < spec.length; ++k) {
    if (!spec.is_info[k] && spec.top_bit(k)) ++frozen_high;
    if (spec.is_info[k] && !spec.top_bit(k)) ++info_low;
  }
  return std::min(frozen_high, info_low);
}

// min(2^{n-r-1}, 2^r) for 0 < r < n.
inline std::uint64_t count_stable_variants(const CodeSpec& spec) {
  if (spec.r <= 0 || spec.r >= spec.n) throw ConfigError("count_stable_variants: degenerate order r in {0, n}");
  const int e = std::min(spec.n - spec.r - 1, spec.r);
  return std::uint64_t{1} << e;
}

// Every subset of dynamic_weight_classes(spec), including the empty one,
// in increasing bitmask order.
inline std::vector<Variant> enumerate_variants(const CodeSpec& spec) {
  const auto classes = dynamic_weight_classes(spec);
  std::vector<Variant> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << classes.size()); ++mask) {
    Variant v;
    for (std::size_t b = 0; b < classes.size(); ++b) {
      if ((mask >> b) & 1U) v.push_back(classes[b]);
    }
    out.push_back(std::move(v));
  }
  return out;
}

inline Variant full_variant(const CodeSpec& spec) { return dynamic_weight_classes(spec); }

}  // namespace rmdyn
