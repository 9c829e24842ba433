#pragma once

// Dense matrices over GF(2).
//
// Rows are packed into whole 64-bit words so that row elimination is a
// run of word XORs. Bits beyond `cols()` in the last word of a row are
// always zero; equality and popcount rely on that.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rmdyn/error.hpp"

namespace rmdyn {

inline constexpr int kMaxLogLength = 16;

class BitMatrix {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitMatrix() = default;

  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), stride_((cols + kWordBits - 1) / kWordBits), bits_(rows * stride_, 0) {}

  static BitMatrix identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
  }

  // Literal construction for small matrices, mostly in tests:
  // BitMatrix::from_rows({{1, 0}, {1, 1}}).
  static BitMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows) {
    std::vector<std::vector<std::uint8_t>> tmp;
    for (const auto& r : rows) tmp.emplace_back(r.begin(), r.end());
    return from_rows(tmp);
  }

  static BitMatrix from_rows(const std::vector<std::vector<std::uint8_t>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    BitMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw ConfigError("BitMatrix: ragged rows");
      for (std::size_t j = 0; j < cols; ++j) {
        if (rows[i][j] > 1) throw ConfigError("BitMatrix: entries must be 0 or 1");
        m.set(i, j, rows[i][j] != 0);
      }
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t words_per_row() const noexcept { return stride_; }

  bool get(std::size_t r, std::size_t c) const noexcept {
    return (bits_[r * stride_ + c / kWordBits] >> (c % kWordBits)) & 1U;
  }

  void set(std::size_t r, std::size_t c, bool v) noexcept {
    Word& w = bits_[r * stride_ + c / kWordBits];
    const Word mask = Word{1} << (c % kWordBits);
    w = v ? (w | mask) : (w & ~mask);
  }

  void flip(std::size_t r, std::size_t c) noexcept { bits_[r * stride_ + c / kWordBits] ^= Word{1} << (c % kWordBits); }

  std::span<const Word> row(std::size_t r) const noexcept { return {bits_.data() + r * stride_, stride_}; }
  std::span<Word> row(std::size_t r) noexcept { return {bits_.data() + r * stride_, stride_}; }

  // row(dst) ^= row(src)
  void xor_row(std::size_t dst, std::size_t src) noexcept {
    Word* d = bits_.data() + dst * stride_;
    const Word* s = bits_.data() + src * stride_;
    for (std::size_t k = 0; k < stride_; ++k) d[k] ^= s[k];
  }

  void swap_rows(std::size_t a, std::size_t b) noexcept {
    if (a == b) return;
    std::swap_ranges(bits_.begin() + static_cast<std::ptrdiff_t>(a * stride_),
                     bits_.begin() + static_cast<std::ptrdiff_t>((a + 1) * stride_),
                     bits_.begin() + static_cast<std::ptrdiff_t>(b * stride_));
  }

  bool row_is_zero(std::size_t r) const noexcept {
    const auto w = row(r);
    return std::all_of(w.begin(), w.end(), [](Word x) { return x == 0; });
  }

  std::size_t row_popcount(std::size_t r) const noexcept {
    std::size_t total = 0;
    for (Word w : row(r)) total += static_cast<std::size_t>(std::popcount(w));
    return total;
  }

  std::size_t popcount() const noexcept {
    std::size_t total = 0;
    for (Word w : bits_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
  }

  bool is_zero() const noexcept {
    return std::all_of(bits_.begin(), bits_.end(), [](Word x) { return x == 0; });
  }

  std::vector<std::uint8_t> row_bits(std::size_t r) const {
    std::vector<std::uint8_t> out(cols_);
    for (std::size_t c = 0; c < cols_; ++c) out[c] = get(r, c) ? 1 : 0;
    return out;
  }

  BitMatrix transpose() const {
    BitMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t k = 0; k < stride_; ++k) {
        Word w = bits_[r * stride_ + k];
        while (w) {
          const std::size_t c = k * kWordBits + static_cast<std::size_t>(std::countr_zero(w));
          t.set(c, r, true);
          w &= w - 1;
        }
      }
    }
    return t;
  }

  friend bool operator==(const BitMatrix& a, const BitMatrix& b) noexcept {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.bits_ == b.bits_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<Word> bits_;
};

// GF(2) product. Cost is rows(a) * popcount-per-row * words_per_row(b).
inline BitMatrix mat_mul(const BitMatrix& a, const BitMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ConfigError("mat_mul: dimension mismatch (" + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                      " * " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()) + ")");
  }
  BitMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto dst = out.row(i);
    const auto src = a.row(i);
    for (std::size_t k = 0; k < src.size(); ++k) {
      BitMatrix::Word w = src[k];
      while (w) {
        const std::size_t j = k * BitMatrix::kWordBits + static_cast<std::size_t>(std::countr_zero(w));
        const auto brow = b.row(j);
        for (std::size_t t = 0; t < dst.size(); ++t) dst[t] ^= brow[t];
        w &= w - 1;
      }
    }
  }
  return out;
}

inline BitMatrix operator*(const BitMatrix& a, const BitMatrix& b) { return mat_mul(a, b); }

// G_2^{(x)n} with kernel [[1,0],[1,1]]. Entry (i, j) is 1 iff the set bits
// of j are a subset of those of i.
inline BitMatrix kron_power(int n) {
  if (n < 0) throw ConfigError("kron_power: negative exponent");
  if (n > kMaxLogLength) throw ConfigError("kron_power: dimension overflow (n > 16)");
  const std::size_t len = std::size_t{1} << n;
  BitMatrix g(len, len);
  for (std::size_t i = 0; i < len; ++i) {
    // Enumerate submasks of i.
    std::size_t j = i;
    while (true) {
      g.set(i, j, true);
      if (j == 0) break;
      j = (j - 1) & i;
    }
  }
  return g;
}

struct RrefResult {
  BitMatrix matrix;                 // zero rows dropped
  std::vector<std::size_t> pivots;  // ascending pivot columns, one per row
};

inline RrefResult rref(const BitMatrix& m) {
  BitMatrix work = m;
  std::vector<std::size_t> pivots;
  std::size_t next = 0;
  for (std::size_t c = 0; c < work.cols() && next < work.rows(); ++c) {
    std::size_t p = next;
    while (p < work.rows() && !work.get(p, c)) ++p;
    if (p == work.rows()) continue;
    work.swap_rows(p, next);
    for (std::size_t r = 0; r < work.rows(); ++r) {
      if (r != next && work.get(r, c)) work.xor_row(r, next);
    }
    pivots.push_back(c);
    ++next;
  }
  BitMatrix reduced(next, work.cols());
  for (std::size_t r = 0; r < next; ++r) {
    const auto src = work.row(r);
    std::copy(src.begin(), src.end(), reduced.row(r).begin());
  }
  return {std::move(reduced), std::move(pivots)};
}

inline std::size_t rank(const BitMatrix& m) { return rref(m).pivots.size(); }

inline bool row_space_equal(const BitMatrix& a, const BitMatrix& b) {
  if (a.cols() != b.cols()) throw ConfigError("row_space_equal: column-count mismatch");
  return rref(a).matrix == rref(b).matrix;
}

inline bool is_invertible(const BitMatrix& m) { return m.rows() == m.cols() && rank(m) == m.rows(); }

// One row per line of '0'/'1' characters.
inline std::string to_text(const BitMatrix& m) {
  std::string out;
  out.reserve(m.rows() * (m.cols() + 1));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out.push_back(m.get(r, c) ? '1' : '0');
    out.push_back('\n');
  }
  return out;
}

inline BitMatrix parse_text(std::istream& in) {
  std::vector<std::vector<std::uint8_t>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::uint8_t> row;
    row.reserve(line.size());
    for (char ch : line) {
      if (ch != '0' && ch != '1') throw ConfigError("parse_text: invalid character '" + std::string(1, ch) + "'");
      row.push_back(ch == '1' ? 1 : 0);
    }
    rows.push_back(std::move(row));
  }
  return BitMatrix::from_rows(rows);
}

inline BitMatrix parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_text(in);
}

inline std::ostream& operator<<(std::ostream& os, const BitMatrix& m) { return os << to_text(m); }

}  // namespace rmdyn
