#pragma once

// Slow, obviously-correct reference implementations used by the tests.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "rmdyn/gf2.hpp"

namespace oracle {

using Dense = std::vector<std::vector<int>>;

inline Dense to_dense(const rmdyn::BitMatrix& m) {
  Dense d(m.rows(), std::vector<int>(m.cols(), 0));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) d[r][c] = m.get(r, c) ? 1 : 0;
  return d;
}

inline Dense multiply(const Dense& a, const Dense& b) {
  const std::size_t inner = b.size();
  const std::size_t cols = inner ? b[0].size() : 0;
  Dense out(a.size(), std::vector<int>(cols, 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      int s = 0;
      for (std::size_t k = 0; k < inner; ++k) s ^= a[i][k] & b[k][j];
      out[i][j] = s;
    }
  return out;
}

// Plain Gaussian elimination, counting pivots.
inline std::size_t rank(Dense m) {
  std::size_t r = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && !m[p][c]) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = 0; i < m.size(); ++i)
      if (i != r && m[i][c])
        for (std::size_t k = 0; k < cols; ++k) m[i][k] ^= m[r][k];
    ++r;
  }
  return r;
}

// G_2^{(x)n} built by explicit Kronecker products.
inline Dense kron_power(int n) {
  Dense g = {{1}};
  for (int t = 0; t < n; ++t) {
    const std::size_t s = g.size();
    Dense next(2 * s, std::vector<int>(2 * s, 0));
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j) {
        next[i][j] = g[i][j];          // [[G, 0],
        next[s + i][j] = g[i][j];      //  [G, G]]
        next[s + i][s + j] = g[i][j];
      }
    g = std::move(next);
  }
  return g;
}

inline rmdyn::BitMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double density = 0.5) {
  std::bernoulli_distribution bit(density);
  rmdyn::BitMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, bit(rng));
  return m;
}

// u -> x by the dense generator matrix.
inline std::vector<std::uint8_t> transform(const std::vector<std::uint8_t>& u) {
  int n = 0;
  while ((std::size_t{1} << n) < u.size()) ++n;
  const Dense g = kron_power(n);
  std::vector<std::uint8_t> x(u.size(), 0);
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i])
      for (std::size_t j = 0; j < u.size(); ++j) x[j] ^= static_cast<std::uint8_t>(g[i][j]);
  return x;
}

}  // namespace oracle
