#pragma once

// Affine maps z -> A z + b over GF(2)^n, the coordinate permutations they
// induce on length-2^n words, sampling from the usual subgroups, and the
// transformation of a constraint matrix under such a permutation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rmdyn/codespec.hpp"
#include "rmdyn/error.hpp"
#include "rmdyn/gf2.hpp"

namespace rmdyn {

struct AffinePerm {
  BitMatrix a;                        // n x n, invertible
  std::vector<std::uint8_t> offset;   // b, length n
  std::vector<std::size_t> perm;      // perm[i] = bi2int(A * bin(i) + b)

  int n() const noexcept { return static_cast<int>(a.rows()); }
  std::size_t length() const noexcept { return perm.size(); }
  bool is_identity() const noexcept {
    for (std::size_t i = 0; i < perm.size(); ++i) {
      if (perm[i] != i) return false;
    }
    return true;
  }
  friend bool operator==(const AffinePerm& x, const AffinePerm& y) noexcept {
    return x.a == y.a && x.offset == y.offset;
  }
};

// bi2int(A * bin(z) + b), bit t of z being coordinate t.
inline std::size_t apply_affine(const BitMatrix& a, std::size_t offset_bits, std::size_t z) {
  std::size_t out = 0;
  const std::size_t n = a.rows();
  for (std::size_t t = 0; t < n; ++t) {
    std::size_t acc = (offset_bits >> t) & 1U;
    for (std::size_t s = 0; s < n; ++s) acc ^= (a.get(t, s) ? ((z >> s) & 1U) : 0U);
    out |= acc << t;
  }
  return out;
}

inline AffinePerm to_permutation(const BitMatrix& a, std::vector<std::uint8_t> offset) {
  if (a.rows() != a.cols()) throw ConfigError("to_permutation: A must be square");
  if (offset.size() != a.rows()) throw ConfigError("to_permutation: |b| must equal n");
  if (a.rows() > static_cast<std::size_t>(kMaxLogLength)) throw ConfigError("to_permutation: dimension overflow");
  if (!is_invertible(a)) throw ConfigError("to_permutation: A is singular");
  std::size_t b = 0;
  for (std::size_t t = 0; t < offset.size(); ++t) {
    if (offset[t] > 1) throw ConfigError("to_permutation: b entries must be 0 or 1");
    b |= static_cast<std::size_t>(offset[t]) << t;
  }
  AffinePerm p{a, std::move(offset), {}};
  const std::size_t len = std::size_t{1} << a.rows();
  p.perm.resize(len);
  for (std::size_t i = 0; i < len; ++i) p.perm[i] = apply_affine(a, b, i);
  return p;
}

inline AffinePerm identity_perm(int n) {
  return to_permutation(BitMatrix::identity(static_cast<std::size_t>(n)), std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0));
}

inline std::vector<std::size_t> inverse_permutation(const std::vector<std::size_t>& perm) {
  std::vector<std::size_t> inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = i;
  return inv;
}

inline AffinePerm inverse(const AffinePerm& p) {
  // (A z + b)^{-1} = A^{-1} z + A^{-1} b. Invert A by Gauss-Jordan on [A | I].
  const std::size_t n = p.a.rows();
  BitMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.set(i, j, p.a.get(i, j));
    aug.set(i, n + i, true);
  }
  const auto red = rref(aug).matrix;
  BitMatrix ainv(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) ainv.set(i, j, red.get(i, n + j));
  }
  std::size_t b = 0;
  for (std::size_t t = 0; t < n; ++t) b |= static_cast<std::size_t>(p.offset[t]) << t;
  const std::size_t nb = apply_affine(ainv, 0, b);
  std::vector<std::uint8_t> off(n);
  for (std::size_t t = 0; t < n; ++t) off[t] = static_cast<std::uint8_t>((nb >> t) & 1U);
  return to_permutation(ainv, std::move(off));
}

inline bool is_permutation_matrix(const BitMatrix& a) {
  if (a.rows() != a.cols()) return false;
  std::vector<int> col_count(a.cols(), 0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    if (a.row_popcount(r) != 1) return false;
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (a.get(r, c)) ++col_count[c];
    }
  }
  return std::all_of(col_count.begin(), col_count.end(), [](int x) { return x == 1; });
}

inline bool offset_is_zero(const AffinePerm& p) {
  return std::all_of(p.offset.begin(), p.offset.end(), [](std::uint8_t x) { return x == 0; });
}

inline bool in_pl(const AffinePerm& p) { return is_permutation_matrix(p.a) && offset_is_zero(p); }

// Block-lower-triangular with diagonal blocks of sizes `blocks` (each
// invertible by construction of p).
inline bool in_blta(const AffinePerm& p, const std::vector<int>& blocks) {
  const std::size_t n = p.a.rows();
  std::vector<std::size_t> block_of(n);
  std::size_t pos = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (int i = 0; i < blocks[b]; ++i) {
      if (pos >= n) return false;
      block_of[pos++] = b;
    }
  }
  if (pos != n) return false;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (p.a.get(r, c) && block_of[c] > block_of[r]) return false;
    }
  }
  // Diagonal blocks of an invertible block-triangular matrix are invertible.
  return is_invertible(p.a);
}

inline bool in_blta_pl(const AffinePerm& p) {
  const int n = p.n();
  return in_pl(p) && (n == 0 || p.a.get(static_cast<std::size_t>(n - 1), static_cast<std::size_t>(n - 1)));
}

// Proposition-1 index map: bin(k') = A bin(k) for a permutation matrix A.
inline std::size_t permute_monomial(const BitMatrix& a, std::size_t k) {
  if (!is_permutation_matrix(a)) throw ConfigError("permute_monomial: A is not a permutation matrix");
  if (k >= (std::size_t{1} << a.rows())) throw ConfigError("permute_monomial: row index out of range");
  return apply_affine(a, 0, k);
}

// T^{-1}: entry (perm[i], i) is 1. With this orientation a codeword x of the
// original code maps to x' with x'[perm[i]] = x[i], and x' belongs to the
// pre-transformed code defined by transform_constraint(V, p).
inline BitMatrix post_transformation_matrix(const AffinePerm& p) {
  const std::size_t len = p.length();
  BitMatrix t(len, len);
  for (std::size_t i = 0; i < len; ++i) t.set(p.perm[i], i, true);
  return t;
}

// V_T = V (G_N T^{-1} G_N)^T.
inline BitMatrix transform_constraint(const BitMatrix& v, const AffinePerm& p) {
  if (v.cols() != p.length()) throw ConfigError("transform_constraint: V must have N columns");
  const BitMatrix g = kron_power(p.n());
  const BitMatrix m = mat_mul(mat_mul(g, post_transformation_matrix(p)), g);
  return mat_mul(v, m.transpose());
}

// Row-space equivalence of V and V_T. Both have full row rank for any
// constraint built here; a rank drop signals a malformed input and throws.
inline bool is_stable(const Constraint& c, const AffinePerm& p) {
  if (p.n() != c.spec.n) throw ConfigError("is_stable: permutation and constraint disagree on n");
  const BitMatrix vt = transform_constraint(c.v, p);
  const auto rv = rref(c.v);
  const auto rt = rref(vt);
  if (rv.pivots.size() != c.v.rows() || rt.pivots.size() != vt.rows()) {
    throw std::logic_error("is_stable: constraint matrix is rank deficient");
  }
  if (!(rv.matrix == rt.matrix)) return false;
  if (!mat_mul(c.w, vt.transpose()).is_zero()) {
    throw std::logic_error("is_stable: W V_T^T != 0 for an equivalent V_T");
  }
  return true;
}

// ---------------------------------------------------------------------------
// Sampling

namespace detail {

inline std::uint64_t factorial(int m) {
  std::uint64_t f = 1;
  for (int i = 2; i <= m; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

// Permutation of {0..m-1} with Lehmer rank `rank` (0 = identity).
inline std::vector<int> lehmer_decode(std::uint64_t rank, int m) {
  std::vector<int> pool(static_cast<std::size_t>(m));
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(m));
  for (int i = m; i >= 1; --i) {
    const std::uint64_t f = factorial(i - 1);
    const auto idx = static_cast<std::size_t>(rank / f);
    rank %= f;
    out.push_back(pool[idx]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
  }
  return out;
}

// A[t][sigma[t]] = 1 on the first m coordinates, identity elsewhere.
inline AffinePerm perm_matrix_member(const std::vector<int>& sigma, int n) {
  BitMatrix a(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (std::size_t t = 0; t < sigma.size(); ++t) a.set(t, static_cast<std::size_t>(sigma[t]), true);
  for (auto t = sigma.size(); t < static_cast<std::size_t>(n); ++t) a.set(t, t, true);
  return to_permutation(a, std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0));
}

// M distinct ranks from [lo, hi) without replacement.
inline std::vector<std::uint64_t> sample_ranks(std::uint64_t lo, std::uint64_t hi, std::size_t count, std::mt19937_64& rng) {
  const std::uint64_t span = hi - lo;
  std::vector<std::uint64_t> out;
  if (span <= 4 * static_cast<std::uint64_t>(count) + 64) {
    std::vector<std::uint64_t> all(span);
    std::iota(all.begin(), all.end(), lo);
    for (std::size_t i = 0; i < count; ++i) {
      std::uniform_int_distribution<std::uint64_t> pick(i, span - 1);
      std::swap(all[i], all[pick(rng)]);
    }
    all.resize(count);
    return all;
  }
  std::set<std::uint64_t> seen;
  std::uniform_int_distribution<std::uint64_t> dist(lo, hi - 1);
  while (out.size() < count) {
    const std::uint64_t x = dist(rng);
    if (seen.insert(x).second) out.push_back(x);
  }
  return out;
}

inline std::size_t offset_bits(const AffinePerm& p) {
  std::size_t b = 0;
  for (std::size_t t = 0; t < p.offset.size(); ++t) b |= static_cast<std::size_t>(p.offset[t]) << t;
  return b;
}

inline std::string encode_member(const AffinePerm& p) { return to_text(p.a) + "|" + std::to_string(offset_bits(p)); }

inline double gl2_order(int s) {
  double ord = 1.0;
  for (int i = 0; i < s; ++i) ord *= std::ldexp(1.0, s) - std::ldexp(1.0, i);
  return ord;
}

}  // namespace detail

inline std::uint64_t blta_pl_group_size(int n) { return n <= 1 ? 1 : detail::factorial(n - 1); }

// Distinct members of BLTA(n-1,1) ∩ PL: permutation matrices fixing the
// last coordinate, b = 0. The identity is excluded unless the whole group
// is requested. Deterministic for a fixed seed.
inline std::vector<AffinePerm> sample_blta_pl(int n, std::size_t count, std::uint64_t seed) {
  if (n < 1 || n > kMaxLogLength) throw ConfigError("sample_blta_pl: n out of range");
  const std::uint64_t order = blta_pl_group_size(n);
  if (count > order) {
    throw ConfigError("sample_blta_pl: M=" + std::to_string(count) + " exceeds group size " + std::to_string(order));
  }
  std::vector<std::uint64_t> ranks;
  if (count == order) {
    ranks.resize(order);
    std::iota(ranks.begin(), ranks.end(), 0);
  } else {
    std::mt19937_64 rng(seed);
    ranks = detail::sample_ranks(1, order, count, rng);
  }
  std::vector<AffinePerm> out;
  out.reserve(count);
  for (std::uint64_t rk : ranks) out.push_back(detail::perm_matrix_member(detail::lehmer_decode(rk, n - 1), n));
  return out;
}

inline double blta_group_size(const std::vector<int>& blocks, int n) {
  double size = std::ldexp(1.0, n);  // offsets
  int before = 0;
  for (int s : blocks) {
    size *= detail::gl2_order(s) * std::ldexp(1.0, before * s);
    before += s;
  }
  return size;
}

inline void check_blocks(const std::vector<int>& blocks, int n) {
  if (n < 1 || n > kMaxLogLength) throw ConfigError("BLTA: n out of range");
  int sum = 0;
  for (int s : blocks) {
    if (s < 1) throw ConfigError("BLTA: block sizes must be positive");
    sum += s;
  }
  if (sum != n) throw ConfigError("BLTA: block sizes must sum to n");
}

// Distinct members of BLTA(blocks): uniformly random invertible diagonal
// blocks, arbitrary entries below them, arbitrary offset.
inline std::vector<AffinePerm> sample_blta(const std::vector<int>& blocks, int n, std::size_t count, std::uint64_t seed) {
  check_blocks(blocks, n);
  const double order = blta_group_size(blocks, n);
  if (static_cast<double>(count) > order) throw ConfigError("sample_blta: M exceeds group size");
  std::vector<std::size_t> block_of;
  for (std::size_t b = 0; b < blocks.size(); ++b) block_of.insert(block_of.end(), static_cast<std::size_t>(blocks[b]), b);

  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::set<std::string> seen;
  std::vector<AffinePerm> out;
  const auto un = static_cast<std::size_t>(n);
  while (out.size() < count) {
    BitMatrix a(un, un);
    for (std::size_t r = 0; r < un; ++r) {
      for (std::size_t c = 0; c < un; ++c) {
        if (block_of[c] <= block_of[r]) a.set(r, c, coin(rng));
      }
    }
    if (!is_invertible(a)) continue;
    std::vector<std::uint8_t> off(un);
    for (auto& x : off) x = coin(rng) ? 1 : 0;
    AffinePerm p = to_permutation(a, std::move(off));
    if (seen.insert(detail::encode_member(p)).second) out.push_back(std::move(p));
  }
  return out;
}

// Group descriptors understood by the survey and the CLI:
//   identity | pl | blta_pl | lta | ga | blta:s1,s2,...
struct GroupDescriptor {
  enum class Kind { kIdentity, kPermutationLinear, kBltaPl, kBlta };
  Kind kind = Kind::kBltaPl;
  std::vector<int> blocks;  // explicit blta:... only; lta/ga resolve against n
  std::string label;

  static GroupDescriptor parse(const std::string& text) {
    GroupDescriptor g;
    g.label = text;
    if (text == "identity") {
      g.kind = Kind::kIdentity;
    } else if (text == "pl") {
      g.kind = Kind::kPermutationLinear;
    } else if (text == "blta_pl") {
      g.kind = Kind::kBltaPl;
    } else if (text == "lta") {
      g.kind = Kind::kBlta;
    } else if (text == "ga") {
      g.kind = Kind::kBlta;
    } else if (text.rfind("blta:", 0) == 0) {
      g.kind = Kind::kBlta;
      std::stringstream ss(text.substr(5));
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          g.blocks.push_back(std::stoi(item));
        } catch (const std::exception&) {
          throw ConfigError("group descriptor: bad block size '" + item + "'");
        }
      }
      if (g.blocks.empty()) throw ConfigError("group descriptor: empty block structure");
    } else {
      throw ConfigError("unknown group descriptor '" + text + "'");
    }
    return g;
  }

  std::vector<int> resolve_blocks(int n) const {
    if (label == "lta") return std::vector<int>(static_cast<std::size_t>(n), 1);
    if (label == "ga") return {n};
    return blocks;
  }

  double size(int n) const {
    switch (kind) {
      case Kind::kIdentity: return 1.0;
      case Kind::kPermutationLinear: return static_cast<double>(detail::factorial(n));
      case Kind::kBltaPl: return static_cast<double>(blta_pl_group_size(n));
      case Kind::kBlta: return blta_group_size(resolve_blocks(n), n);
    }
    return 0.0;
  }
};

// Up to `count` distinct members. When `count` reaches the group size the
// whole group is returned (identity included).
inline std::vector<AffinePerm> sample_group(const GroupDescriptor& g, int n, std::size_t count, std::uint64_t seed) {
  const double order = g.size(n);
  const bool whole = static_cast<double>(count) >= order;
  if (whole) count = static_cast<std::size_t>(order);
  switch (g.kind) {
    case GroupDescriptor::Kind::kIdentity:
      return {identity_perm(n)};
    case GroupDescriptor::Kind::kBltaPl:
      return sample_blta_pl(n, count, seed);
    case GroupDescriptor::Kind::kPermutationLinear: {
      std::mt19937_64 rng(seed);
      const auto ord = detail::factorial(n);
      std::vector<std::uint64_t> ranks;
      if (whole) {
        ranks.resize(ord);
        std::iota(ranks.begin(), ranks.end(), 0);
      } else {
        ranks = detail::sample_ranks(1, ord, count, rng);
      }
      std::vector<AffinePerm> out;
      for (auto rk : ranks) out.push_back(detail::perm_matrix_member(detail::lehmer_decode(rk, n), n));
      return out;
    }
    case GroupDescriptor::Kind::kBlta:
      return sample_blta(g.resolve_blocks(n), n, count, seed);
  }
  return {};
}

struct SurveyReport {
  std::size_t samples = 0;
  std::size_t stable = 0;
  std::vector<AffinePerm> counterexamples;  // at most 10
  double fraction() const noexcept { return samples == 0 ? 1.0 : static_cast<double>(stable) / static_cast<double>(samples); }
};

inline SurveyReport stability_survey(const Constraint& c, const GroupDescriptor& g, std::size_t samples, std::uint64_t seed) {
  constexpr std::size_t kMaxCounterexamples = 10;
  SurveyReport rep;
  for (const auto& p : sample_group(g, c.spec.n, samples, seed)) {
    ++rep.samples;
    if (is_stable(c, p)) {
      ++rep.stable;
    } else if (rep.counterexamples.size() < kMaxCounterexamples) {
      rep.counterexamples.push_back(p);
    }
  }
  return rep;
}

}  // namespace rmdyn
