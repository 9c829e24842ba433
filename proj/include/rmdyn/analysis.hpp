#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "rmdyn/autgroup.hpp"
#include "rmdyn/codespec.hpp"
#include "rmdyn/encdec.hpp"
#include "rmdyn/error.hpp"
#include "rmdyn/gf2.hpp"

namespace rmdyn {

enum class SpectrumMethod { kBrute, kFormula, kSclEstimate };

inline const char* to_string(SpectrumMethod m) {
  switch (m) {
    case SpectrumMethod::kBrute: return "brute";
    case SpectrumMethod::kFormula: return "formula";
    case SpectrumMethod::kSclEstimate: return "scl";
  }
  return "?";
}

struct WeightSpectrum {
  std::map<std::size_t, std::uint64_t> counts;  // weight -> number of codewords
  bool exact = false;
  SpectrumMethod method = SpectrumMethod::kBrute;

  std::uint64_t at(std::size_t w) const {
    const auto it = counts.find(w);
    return it == counts.end() ? 0 : it->second;
  }
  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (const auto& [w, c] : counts) t += c;
    return t;
  }
  // Smallest weight > 0 with a nonzero count, or 0 if there is none.
  std::size_t min_distance() const {
    for (const auto& [w, c] : counts) {
      if (w > 0 && c > 0) return w;
    }
    return 0;
  }
};

inline constexpr std::size_t kMaxBruteDimension = 24;

// Exact spectrum over all 2^K information words. The Gray-code walk is
// split into contiguous ranges, one per worker, merged by addition.
inline WeightSpectrum brute_weight_enum(const Constraint& c, unsigned workers = 1) {
  const std::size_t k = c.spec.dimension;
  if (k > kMaxBruteDimension) throw ResourceError("brute_weight_enum: K=" + std::to_string(k) + " exceeds 24");
  const std::size_t len = c.spec.length;
  const std::size_t words = (len + 63) / 64;

  // Packed codeword of each unit information vector.
  const FreezeMap rules = FreezeMap::from_constraint(c);
  std::vector<std::uint64_t> gen(k * words, 0);
  for (std::size_t t = 0; t < k; ++t) {
    std::vector<std::uint8_t> e(k, 0);
    e[t] = 1;
    const auto x = encode(e, rules);
    for (std::size_t m = 0; m < len; ++m) {
      if (x[m]) gen[t * words + m / 64] |= std::uint64_t{1} << (m % 64);
    }
  }

  const std::uint64_t total = std::uint64_t{1} << k;
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::uint64_t>(total, 64))));
  std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(len + 1, 0));

  auto walk = [&](unsigned id) {
    const std::uint64_t begin = total * id / workers;
    const std::uint64_t end = total * (id + 1) / workers;
    std::vector<std::uint64_t> acc(words, 0);
    const std::uint64_t gray = begin ^ (begin >> 1);
    for (std::size_t t = 0; t < k; ++t) {
      if ((gray >> t) & 1U) {
        for (std::size_t q = 0; q < words; ++q) acc[q] ^= gen[t * words + q];
      }
    }
    auto& hist = partial[id];
    for (std::uint64_t i = begin; i < end; ++i) {
      if (i != begin) {
        const auto t = static_cast<std::size_t>(std::countr_zero(i));
        for (std::size_t q = 0; q < words; ++q) acc[q] ^= gen[t * words + q];
      }
      std::size_t wt = 0;
      for (std::uint64_t q : acc) wt += static_cast<std::size_t>(std::popcount(q));
      ++hist[wt];
    }
  };

  if (workers == 1) {
    walk(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned id = 0; id < workers; ++id) pool.emplace_back(walk, id);
    for (auto& th : pool) th.join();
  }

  WeightSpectrum ws;
  ws.exact = true;
  ws.method = SpectrumMethod::kBrute;
  for (std::size_t w = 0; w <= len; ++w) {
    std::uint64_t sum = 0;
    for (const auto& h : partial) sum += h[w];
    if (sum) ws.counts[w] = sum;
  }
  return ws;
}

// Number of minimum-weight (2^{n-r}) codewords of R(r, n):
// 2^r * prod_{i=0}^{n-r-1} (2^{n-i} - 1) / (2^{n-r-i} - 1), i.e. 2^r times
// the Gaussian binomial [n choose r]_2.
inline std::uint64_t rm_minweight_count(int r, int n) {
  if (n < 1 || n > kMaxLogLength || r <= 0 || r >= n) throw ConfigError("rm_minweight_count: requires 0 < r < n <= 16");
  using U = unsigned __int128;
  // Pascal-style recurrence [m, j] = [m-1, j-1] + 2^j [m-1, j].
  std::vector<U> row(static_cast<std::size_t>(r) + 1, 0);
  row[0] = 1;
  for (int m = 1; m <= n; ++m) {
    for (int j = std::min(m, r); j >= 1; --j) {
      row[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j) - 1] + (U{1} << j) * row[static_cast<std::size_t>(j)];
    }
  }
  const U value = row[static_cast<std::size_t>(r)] << r;
  if (value > static_cast<U>(UINT64_MAX)) throw ResourceError("rm_minweight_count: count overflows 64 bits");
  return static_cast<std::uint64_t>(value);
}

// Low-weight estimate from list decoding of a noiseless all-zero
// transmission: every survivor of weight <= w_max is tallied. Survivors are
// distinct codewords, so the result is a lower bound on each A_w.
inline WeightSpectrum low_weight_enum_scl(const Constraint& c, std::size_t list_size, std::size_t w_max) {
  if (w_max > 24) throw ConfigError("low_weight_enum_scl: w_max must be <= 24");
  if (list_size > (std::size_t{1} << 20)) throw ResourceError("low_weight_enum_scl: list size above 2^20");
  if (static_cast<double>(list_size) * static_cast<double>(c.spec.length) > 1.0e9) {
    throw ResourceError("low_weight_enum_scl: list buffers would exceed the memory cap");
  }
  ListDecoder dec(FreezeMap::from_constraint(c), list_size);
  const auto survivors = dec.decode(SoftInput::from_llrs(std::vector<float>(c.spec.length, 1.0F)));
  WeightSpectrum ws;
  ws.exact = false;
  ws.method = SpectrumMethod::kSclEstimate;
  for (const auto& s : survivors) {
    const auto wt = static_cast<std::size_t>(std::count(s.codeword.begin(), s.codeword.end(), std::uint8_t{1}));
    if (wt <= w_max) ++ws.counts[wt];
  }
  return ws;
}

// Gaussian tail probability.
inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// sum_{0 < w <= w_max} A_w Q(sqrt(2 R w Eb/N0)).
inline double truncated_union_bound(const WeightSpectrum& ws, double rate, double ebn0_db, std::size_t w_max) {
  if (ws.counts.empty()) throw ConfigError("truncated_union_bound: empty spectrum");
  const double ebn0 = std::pow(10.0, ebn0_db / 10.0);
  double bound = 0.0;
  for (const auto& [w, count] : ws.counts) {
    if (w == 0 || w > w_max || count == 0) continue;
    bound += static_cast<double>(count) * q_function(std::sqrt(2.0 * rate * static_cast<double>(w) * ebn0));
  }
  return bound;
}

enum class MemoryScenario { kStable, kKnownPerms, kUnknownPerms };

struct KnownPermStorage {
  std::uint64_t dense_bits = 0;       // rows kept after RREF times N, summed over permutations
  std::uint64_t nonzero_entries = 0;  // ones in the reduced matrices, summed
};

// Row-reduced transformed matrices of the full-D constraint, one per
// permutation.
inline KnownPermStorage known_perm_storage(const CodeSpec& spec, const std::vector<AffinePerm>& perms) {
  const Constraint c = build_constraint(spec, full_variant(spec));
  KnownPermStorage st;
  for (const auto& p : perms) {
    const auto red = rref(transform_constraint(c.v, p));
    st.dense_bits += static_cast<std::uint64_t>(red.matrix.rows()) * spec.length;
    st.nonzero_entries += red.matrix.popcount();
  }
  return st;
}

// Additional bits an M-branch ensemble needs to hold its constraint(s).
inline std::uint64_t memory_requirements(const CodeSpec& spec, std::size_t ensemble, MemoryScenario scenario,
                                         const std::vector<AffinePerm>& perms = {}) {
  switch (scenario) {
    case MemoryScenario::kStable:
      return max_dynamic_count(spec);
    case MemoryScenario::kUnknownPerms:
      return static_cast<std::uint64_t>(ensemble) * spec.length * spec.redundancy();
    case MemoryScenario::kKnownPerms:
      if (perms.empty()) throw ConfigError("memory_requirements: known-permutation scenario needs permutations");
      return known_perm_storage(spec, perms).dense_bits;
  }
  return 0;
}

}  // namespace rmdyn
