#pragma once

// Encoding and successive-cancellation decoding of pre-transformed polar
// codes with dynamic frozen bits, plus automorphism-ensemble decoding.
//
// Decoders work on a FreezeMap: per input index either an information bit
// or a frozen bit whose value is the XOR of earlier decisions (no sources
// means frozen to zero). A Constraint maps onto single-source entries; an
// arbitrary constraint matrix such as a transformed V_T maps onto general
// XOR entries after right-pivot reduction.
//
// LLR sign convention: positive means bit 0 is more likely. Arithmetic is
// min-sum in single precision; path metrics accumulate in double.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rmdyn/autgroup.hpp"
#include "rmdyn/codespec.hpp"
#include "rmdyn/error.hpp"
#include "rmdyn/gf2.hpp"

namespace rmdyn {

inline constexpr float kLlrClip = 1.0e4F;

struct SoftInput {
  std::vector<float> llrs;
  std::vector<double> y;  // channel observation, used for least-squares selection

  // y = BPSK image plus noise of variance sigma2; llr = 2y / sigma2, clipped.
  static SoftInput from_observation(std::vector<double> obs, double sigma2) {
    SoftInput s;
    s.llrs.resize(obs.size());
    for (std::size_t i = 0; i < obs.size(); ++i) {
      const double l = 2.0 * obs[i] / sigma2;
      s.llrs[i] = static_cast<float>(std::clamp(l, -static_cast<double>(kLlrClip), static_cast<double>(kLlrClip)));
    }
    s.y = std::move(obs);
    return s;
  }

  // Without an observation the LLRs stand in for y; least-squares order is
  // invariant to positive scaling of y, so selection is unaffected.
  static SoftInput from_llrs(std::vector<float> l) {
    SoftInput s;
    for (auto& x : l) x = std::clamp(x, -kLlrClip, kLlrClip);
    s.y.assign(l.begin(), l.end());
    s.llrs = std::move(l);
    return s;
  }
};

struct DecodeResult {
  std::vector<std::uint8_t> input;      // u
  std::vector<std::uint8_t> codeword;   // x = u G_N
  std::vector<std::uint8_t> info_bits;  // u restricted to the information set
  double path_metric = 0.0;
  double metric = 0.0;  // squared Euclidean distance between BPSK(x) and y
};

// x = u G_N in place.
inline void polar_transform(std::span<std::uint8_t> u) {
  const std::size_t len = u.size();
  for (std::size_t h = 1; h < len; h <<= 1) {
    for (std::size_t j = 0; j < len; j += 2 * h) {
      for (std::size_t i = j; i < j + h; ++i) u[i] ^= u[i + h];
    }
  }
}

inline double squared_distance(std::span<const std::uint8_t> x, std::span<const double> y) {
  double d = 0.0;
  for (std::size_t m = 0; m < x.size(); ++m) {
    const double diff = y[m] - (x[m] ? -1.0 : 1.0);
    d += diff * diff;
  }
  return d;
}

class FreezeMap {
 public:
  FreezeMap() = default;

  static FreezeMap from_constraint(const Constraint& c) {
    FreezeMap f;
    f.length_ = c.spec.length;
    f.is_info_.assign(f.length_, 0);
    f.offsets_.assign(f.length_ + 1, 0);
    for (std::size_t k = 0; k < f.length_; ++k) {
      const auto& rule = c.rules[k];
      if (rule.kind == RuleKind::kInfo) {
        f.is_info_[k] = 1;
        f.info_set_.push_back(k);
      } else if (rule.kind == RuleKind::kDynamic) {
        f.sources_.push_back(rule.source);
      }
      f.offsets_[k + 1] = f.sources_.size();
    }
    return f;
  }

  // Reduce V so that each row's last nonzero column is a pivot appearing in
  // no other row. Pivot p then reads u_p = XOR of the row's other columns,
  // all of which precede p and are non-pivot (information) columns.
  static FreezeMap from_constraint_matrix(const BitMatrix& v) {
    const std::size_t len = v.cols();
    BitMatrix rev(v.rows(), len);
    for (std::size_t r = 0; r < v.rows(); ++r) {
      for (std::size_t c = 0; c < len; ++c) {
        if (v.get(r, c)) rev.set(r, len - 1 - c, true);
      }
    }
    const auto red = rref(rev);
    std::vector<std::vector<std::size_t>> sources(len);
    std::vector<std::uint8_t> frozen(len, 0);
    for (std::size_t r = 0; r < red.matrix.rows(); ++r) {
      const std::size_t pivot = len - 1 - red.pivots[r];
      frozen[pivot] = 1;
      for (std::size_t c = 0; c < len; ++c) {
        const std::size_t col = len - 1 - c;
        if (col != pivot && red.matrix.get(r, c)) sources[pivot].push_back(col);
      }
      std::sort(sources[pivot].begin(), sources[pivot].end());
    }
    FreezeMap f;
    f.length_ = len;
    f.is_info_.assign(len, 0);
    f.offsets_.assign(len + 1, 0);
    for (std::size_t k = 0; k < len; ++k) {
      if (!frozen[k]) {
        f.is_info_[k] = 1;
        f.info_set_.push_back(k);
      } else {
        f.sources_.insert(f.sources_.end(), sources[k].begin(), sources[k].end());
      }
      f.offsets_[k + 1] = f.sources_.size();
    }
    return f;
  }

  std::size_t length() const noexcept { return length_; }
  int log_length() const noexcept { return std::countr_zero(length_); }
  std::size_t dimension() const noexcept { return info_set_.size(); }
  bool is_info(std::size_t k) const noexcept { return is_info_[k] != 0; }
  const std::vector<std::size_t>& info_set() const noexcept { return info_set_; }
  std::span<const std::size_t> sources(std::size_t k) const noexcept {
    return {sources_.data() + offsets_[k], offsets_[k + 1] - offsets_[k]};
  }
  // Total number of stored source references, a proxy for rule-table size.
  std::size_t source_count() const noexcept { return sources_.size(); }

  // Place v on the information set and fill frozen positions in index order.
  std::vector<std::uint8_t> input_vector(std::span<const std::uint8_t> v) const {
    if (v.size() != dimension()) throw ConfigError("encode: information vector has wrong length");
    std::vector<std::uint8_t> u(length_, 0);
    for (std::size_t t = 0; t < info_set_.size(); ++t) u[info_set_[t]] = v[t] & 1U;
    for (std::size_t k = 0; k < length_; ++k) {
      if (is_info_[k]) continue;
      std::uint8_t val = 0;
      for (std::size_t s : sources(k)) val ^= u[s];
      u[k] = val;
    }
    return u;
  }

 private:
  std::size_t length_ = 0;
  std::vector<std::uint8_t> is_info_;
  std::vector<std::size_t> info_set_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> sources_;
};

// Rule-table route: u from the freezing rules, x = u G_N.
inline std::vector<std::uint8_t> encode(std::span<const std::uint8_t> v, const FreezeMap& rules) {
  auto x = rules.input_vector(v);
  polar_transform(x);
  return x;
}

inline std::vector<std::uint8_t> encode(std::span<const std::uint8_t> v, const Constraint& c) {
  if (v.size() != c.spec.dimension) throw ConfigError("encode: information vector has wrong length");
  return encode(v, FreezeMap::from_constraint(c));
}

// Matrix route: x = (v W) G_N.
inline std::vector<std::uint8_t> encode_matrix(std::span<const std::uint8_t> v, const Constraint& c) {
  if (v.size() != c.spec.dimension) throw ConfigError("encode_matrix: information vector has wrong length");
  BitMatrix vm(1, v.size());
  for (std::size_t t = 0; t < v.size(); ++t) vm.set(0, t, v[t] & 1U);
  const BitMatrix x = mat_mul(mat_mul(vm, c.w), kron_power(c.spec.n));
  return x.row_bits(0);
}

namespace detail {

inline float f_minsum(float a, float b) noexcept {
  const float m = std::min(std::abs(a), std::abs(b));
  return ((a < 0.0F) != (b < 0.0F)) ? -m : m;
}

inline float g_combine(float a, float b, std::uint8_t left_bit) noexcept { return left_bit ? b - a : b + a; }

// Cost of deciding `bit` against leaf LLR `l` (ties favour 0).
inline double decision_penalty(float l, std::uint8_t bit) noexcept {
  const std::uint8_t hard = l < 0.0F ? 1 : 0;
  return hard == bit ? 0.0 : static_cast<double>(std::abs(l));
}

inline DecodeResult finish_result(std::vector<std::uint8_t> u, const FreezeMap& rules, std::span<const double> y,
                                  double path_metric) {
  DecodeResult r;
  r.info_bits.reserve(rules.dimension());
  for (std::size_t k : rules.info_set()) r.info_bits.push_back(u[k]);
  r.codeword = u;
  polar_transform(r.codeword);
  r.input = std::move(u);
  r.path_metric = path_metric;
  r.metric = squared_distance(r.codeword, y);
  return r;
}

inline void check_input(const SoftInput& s, std::size_t len) {
  if (s.llrs.size() != len) throw ConfigError("decode: expected " + std::to_string(len) + " LLRs");
  if (s.y.size() != len) throw ConfigError("decode: observation length mismatch");
}

class ScRecursion {
 public:
  ScRecursion(const FreezeMap& rules, std::vector<std::uint8_t>& u) : rules_(rules), u_(u) {}

  double metric() const noexcept { return metric_; }

  // Decodes leaves [first, first + llr.size()) and writes the sub-codeword.
  void run(std::span<const float> llr, std::size_t first, std::span<std::uint8_t> out) {
    const std::size_t size = llr.size();
    if (size == 1) {
      std::uint8_t bit = 0;
      if (rules_.is_info(first)) {
        bit = llr[0] < 0.0F ? 1 : 0;
      } else {
        for (std::size_t s : rules_.sources(first)) bit ^= u_[s];
      }
      metric_ += decision_penalty(llr[0], bit);
      u_[first] = bit;
      out[0] = bit;
      return;
    }
    const std::size_t h = size / 2;
    std::vector<float> child(h);
    for (std::size_t i = 0; i < h; ++i) child[i] = f_minsum(llr[i], llr[i + h]);
    std::vector<std::uint8_t> left(h);
    run(child, first, left);
    for (std::size_t i = 0; i < h; ++i) child[i] = g_combine(llr[i], llr[i + h], left[i]);
    std::vector<std::uint8_t> right(h);
    run(child, first + h, right);
    for (std::size_t i = 0; i < h; ++i) {
      out[i] = left[i] ^ right[i];
      out[i + h] = right[i];
    }
  }

 private:
  const FreezeMap& rules_;
  std::vector<std::uint8_t>& u_;
  double metric_ = 0.0;
};

}  // namespace detail

// Plain SC. Frozen bits follow their rule, information bits the LLR sign
// with ties decided as 0.
inline DecodeResult sc_decode(const SoftInput& s, const FreezeMap& rules) {
  detail::check_input(s, rules.length());
  std::vector<std::uint8_t> u(rules.length(), 0);
  std::vector<std::uint8_t> x(rules.length(), 0);
  detail::ScRecursion rec(rules, u);
  rec.run(s.llrs, 0, x);
  return detail::finish_result(std::move(u), rules, s.y, rec.metric());
}

inline DecodeResult sc_decode(const SoftInput& s, const Constraint& c) { return sc_decode(s, FreezeMap::from_constraint(c)); }

// Successive-cancellation list decoder.
//
// Each path owns one contiguous block of LLRs (layer s of size 2^s at
// offset 2^s - 1) and one of partial sums in the same layout. A clone made
// at leaf phi copies only the LLR layers above ctz(phi + 1), the ones the
// next leaf reads before anything is overwritten. Kills happen before
// clones, so at most `list_size` paths exist at any time.
class ListDecoder {
 public:
  ListDecoder(FreezeMap rules, std::size_t list_size) : rules_(std::move(rules)), list_size_(list_size) {
    if (list_size_ == 0) throw ConfigError("ListDecoder: list size must be >= 1");
    if (list_size_ > (std::size_t{1} << 20)) throw ResourceError("ListDecoder: list size above 2^20");
    len_ = rules_.length();
    if (len_ == 0 || !std::has_single_bit(len_)) throw ConfigError("ListDecoder: length must be a power of two");
    n_ = std::countr_zero(len_);
    words_ = (len_ + 63) / 64;
    stride_ = std::max<std::size_t>(len_ - 1, 1);
    llr_.assign(list_size_ * stride_, 0.0F);
    bits_.assign(list_size_ * stride_, 0);
    uhat_.assign(list_size_ * words_, 0);
    metric_.assign(list_size_, 0.0);
    scratch_.assign(len_, 0);
    keep_.assign(list_size_ * 2, 0);
    cand_metric_.assign(list_size_ * 2, 0.0);
  }

  const FreezeMap& rules() const noexcept { return rules_; }
  std::size_t list_size() const noexcept { return list_size_; }

  // Survivors sorted by path metric, ties by lower path index.
  std::vector<DecodeResult> decode(const SoftInput& in) {
    run(in);
    std::vector<DecodeResult> out;
    out.reserve(active_.size());
    for (std::uint32_t p : sorted_survivors()) out.push_back(detail::finish_result(input_of(p), rules_, in.y, metric_[p]));
    return out;
  }

  DecodeResult decode_best(const SoftInput& in) {
    run(in);
    std::uint32_t best = active_.front();
    for (std::uint32_t p : active_) {
      if (metric_[p] < metric_[best] || (metric_[p] == metric_[best] && p < best)) best = p;
    }
    return detail::finish_result(input_of(best), rules_, in.y, metric_[best]);
  }

 private:
  struct Candidate {
    double metric;
    std::uint32_t key;  // path * 2 + bit
  };

  float* llr_layer(std::uint32_t p, int s) noexcept {
    return llr_.data() + p * stride_ + ((std::size_t{1} << s) - 1);
  }
  std::uint8_t* bit_layer(std::uint32_t p, int s) noexcept {
    return bits_.data() + p * stride_ + ((std::size_t{1} << s) - 1);
  }

  void run(const SoftInput& in) {
    detail::check_input(in, len_);
    channel_ = in.llrs.data();
    free_paths_.resize(list_size_);
    for (std::size_t i = 0; i < list_size_; ++i) free_paths_[i] = static_cast<std::uint32_t>(list_size_ - 1 - i);
    active_.clear();
    active_.push_back(take_path());

    for (std::size_t phi = 0; phi < len_; ++phi) {
      for (std::uint32_t p : active_) compute_llr(p, phi);
      if (!rules_.is_info(phi)) {
        const auto src = rules_.sources(phi);
        for (std::uint32_t p : active_) {
          std::uint8_t bit = 0;
          for (std::size_t s : src) bit ^= get_u(p, s);
          metric_[p] += detail::decision_penalty(leaf(p), bit);
          set_u(p, phi, bit);
          combine(p, phi, bit);
        }
      } else {
        branch(phi);
      }
    }
  }

  std::uint32_t take_path() {
    const std::uint32_t p = free_paths_.back();
    free_paths_.pop_back();
    metric_[p] = 0.0;
    std::fill_n(uhat_.begin() + static_cast<std::ptrdiff_t>(p * words_), words_, 0);
    return p;
  }

  std::uint32_t clone(std::uint32_t p, std::size_t phi) {
    const std::uint32_t q = free_paths_.back();
    free_paths_.pop_back();
    if (phi + 1 < len_ && n_ > 0) {
      const std::size_t from = (std::size_t{2} << std::countr_zero(phi + 1)) - 1;
      if (from < stride_) std::copy(llr_.begin() + static_cast<std::ptrdiff_t>(p * stride_ + from),
                                    llr_.begin() + static_cast<std::ptrdiff_t>((p + 1) * stride_),
                                    llr_.begin() + static_cast<std::ptrdiff_t>(q * stride_ + from));
    }
    std::copy_n(bits_.begin() + static_cast<std::ptrdiff_t>(p * stride_), stride_,
                bits_.begin() + static_cast<std::ptrdiff_t>(q * stride_));
    std::copy_n(uhat_.begin() + static_cast<std::ptrdiff_t>(p * words_), words_,
                uhat_.begin() + static_cast<std::ptrdiff_t>(q * words_));
    metric_[q] = metric_[p];
    return q;
  }

  float leaf(std::uint32_t p) noexcept { return n_ == 0 ? channel_[0] : *llr_layer(p, 0); }

  std::uint8_t get_u(std::uint32_t p, std::size_t k) const noexcept {
    return static_cast<std::uint8_t>((uhat_[p * words_ + k / 64] >> (k % 64)) & 1U);
  }

  void set_u(std::uint32_t p, std::size_t k, std::uint8_t bit) noexcept {
    if (bit) uhat_[p * words_ + k / 64] |= std::uint64_t{1} << (k % 64);
  }

  // Layers above ctz(phi) are unchanged since the previous leaf; below it
  // the new nodes are all left children.
  void compute_llr(std::uint32_t p, std::size_t phi) {
    if (n_ == 0) return;
    const int top = phi == 0 ? n_ : std::countr_zero(phi) + 1;
    int s = top - 1;
    if (phi != 0) {
      const float* parent = (s + 1 == n_) ? channel_ : llr_layer(p, s + 1);
      const std::uint8_t* left = bit_layer(p, s);
      float* child = llr_layer(p, s);
      const std::size_t h = std::size_t{1} << s;
      for (std::size_t i = 0; i < h; ++i) child[i] = detail::g_combine(parent[i], parent[i + h], left[i]);
      --s;
    }
    for (; s >= 0; --s) {
      const float* parent = (s + 1 == n_) ? channel_ : llr_layer(p, s + 1);
      float* child = llr_layer(p, s);
      const std::size_t h = std::size_t{1} << s;
      for (std::size_t i = 0; i < h; ++i) child[i] = detail::f_minsum(parent[i], parent[i + h]);
    }
  }

  // Fold the decision into partial sums: climb while the node is a right
  // child, then store the finished left-child codeword.
  void combine(std::uint32_t p, std::size_t phi, std::uint8_t bit) {
    std::uint8_t* c = scratch_.data();
    c[0] = bit;
    int s = 0;
    while (s < n_ && ((phi >> s) & 1U)) {
      const std::uint8_t* left = bit_layer(p, s);
      const std::size_t h = std::size_t{1} << s;
      for (std::size_t i = 0; i < h; ++i) {
        c[h + i] = c[i];
        c[i] ^= left[i];
      }
      ++s;
    }
    if (s < n_) std::copy_n(c, std::size_t{1} << s, bit_layer(p, s));
  }

  void branch(std::size_t phi) {
    candidates_.clear();
    for (std::uint32_t p : active_) {
      const float l = leaf(p);
      candidates_.push_back({metric_[p] + detail::decision_penalty(l, 0), p * 2});
      candidates_.push_back({metric_[p] + detail::decision_penalty(l, 1), p * 2 + 1});
    }
    const bool prune = candidates_.size() > list_size_;
    if (prune) {
      auto less = [](const Candidate& a, const Candidate& b) {
        if (a.metric != b.metric) return a.metric < b.metric;
        if ((a.key & 1U) != (b.key & 1U)) return (a.key & 1U) < (b.key & 1U);
        return a.key < b.key;
      };
      std::nth_element(candidates_.begin(), candidates_.begin() + static_cast<std::ptrdiff_t>(list_size_),
                       candidates_.end(), less);
      candidates_.resize(list_size_);
      for (std::uint32_t p : active_) keep_[p * 2] = keep_[p * 2 + 1] = 0;
    }
    for (const auto& cand : candidates_) {
      keep_[cand.key] = 1;
      cand_metric_[cand.key] = cand.metric;
    }
    // Kill first so clones always find a free path.
    next_active_.clear();
    for (std::uint32_t p : active_) {
      if (!keep_[p * 2] && !keep_[p * 2 + 1]) {
        free_paths_.push_back(p);
      } else {
        next_active_.push_back(p);
      }
    }
    active_.clear();
    for (std::uint32_t p : next_active_) {
      const bool zero = keep_[p * 2] != 0;
      const bool one = keep_[p * 2 + 1] != 0;
      if (zero && one) {
        const std::uint32_t q = clone(p, phi);
        metric_[q] = cand_metric_[p * 2 + 1];
        set_u(q, phi, 1);
        active_.push_back(q);
      }
      metric_[p] = zero ? cand_metric_[p * 2] : cand_metric_[p * 2 + 1];
      set_u(p, phi, zero ? 0 : 1);
      active_.push_back(p);
    }
    for (std::uint32_t p : active_) keep_[p * 2] = keep_[p * 2 + 1] = 0;
    std::sort(active_.begin(), active_.end());
    for (std::uint32_t p : active_) combine(p, phi, get_u(p, phi));
  }

  std::vector<std::uint32_t> sorted_survivors() const {
    std::vector<std::uint32_t> order = active_;
    std::sort(order.begin(), order.end(), [this](std::uint32_t a, std::uint32_t b) {
      return metric_[a] < metric_[b] || (metric_[a] == metric_[b] && a < b);
    });
    return order;
  }

  std::vector<std::uint8_t> input_of(std::uint32_t p) const {
    std::vector<std::uint8_t> u(len_);
    for (std::size_t k = 0; k < len_; ++k) u[k] = get_u(p, k);
    return u;
  }

  FreezeMap rules_;
  std::size_t list_size_;
  std::size_t len_ = 0;
  int n_ = 0;
  std::size_t words_ = 0;
  std::size_t stride_ = 0;
  const float* channel_ = nullptr;

  std::vector<float> llr_;
  std::vector<std::uint8_t> bits_;
  std::vector<std::uint64_t> uhat_;
  std::vector<double> metric_;
  std::vector<std::uint32_t> free_paths_;
  std::vector<std::uint32_t> active_;
  std::vector<std::uint32_t> next_active_;
  std::vector<Candidate> candidates_;
  std::vector<std::uint8_t> keep_;
  std::vector<double> cand_metric_;
  std::vector<std::uint8_t> scratch_;
};
inline std::vector<DecodeResult> scl_decode(const SoftInput& s, const FreezeMap& rules, std::size_t list_size) {
  ListDecoder dec(rules, list_size);
  return dec.decode(s);
}

inline std::vector<DecodeResult> scl_decode(const SoftInput& s, const Constraint& c, std::size_t list_size) {
  return scl_decode(s, FreezeMap::from_constraint(c), list_size);
}

// Least-squares choice against y; ties keep the first candidate.
inline const DecodeResult& select_ml(std::span<const DecodeResult> candidates, std::span<const double> y) {
  if (candidates.empty()) throw ConfigError("select_ml: empty candidate list");
  std::size_t best = 0;
  double best_d = squared_distance(candidates[0].codeword, y);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double d = squared_distance(candidates[i].codeword, y);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return candidates[best];
}

struct AeOptions {
  // Permutations outside the stabiliser of V get their own transformed
  // constraint instead of being rejected.
  bool allow_unstable = false;
};

// Automorphism-ensemble decoder: M branches each decode a permuted copy of
// the LLRs, un-permute their best survivor, and the least-squares winner
// against the original observation is returned.
//
// A branch sees x'[perm[i]] = x[i]. Stable branches share one decoder built
// on the original constraint; unstable ones (when allowed) decode the code
// defined by their transformed constraint matrix.
class AeDecoder {
 public:
  AeDecoder(const Constraint& c, std::vector<AffinePerm> perms, std::size_t list_size, AeOptions opts = {})
      : spec_(c.spec) {
    if (perms.empty()) throw ConfigError("AeDecoder: at least one permutation is required");
    decoders_.emplace_back(FreezeMap::from_constraint(c), list_size);
    for (auto& p : perms) {
      if (p.n() != c.spec.n) throw ConfigError("AeDecoder: permutation length does not match the code");
      Branch b;
      if (is_stable(c, p)) {
        b.decoder = 0;
      } else if (opts.allow_unstable) {
        b.decoder = decoders_.size();
        decoders_.emplace_back(FreezeMap::from_constraint_matrix(transform_constraint(c.v, p)), list_size);
      } else {
        throw ConfigError("AeDecoder: permutation is not stable for this constraint");
      }
      b.perm = std::move(p.perm);
      branches_.push_back(std::move(b));
    }
    permuted_.llrs.resize(spec_.length);
    permuted_.y.resize(spec_.length);
  }

  std::size_t ensemble_size() const noexcept { return branches_.size(); }
  // Number of distinct constraint tables held by the decoder.
  std::size_t stored_constraints() const noexcept { return decoders_.size(); }

  // Branch winners mapped back to the original coordinates.
  std::vector<DecodeResult> decode_branches(const SoftInput& in) {
    detail::check_input(in, spec_.length);
    std::vector<DecodeResult> out;
    out.reserve(branches_.size());
    for (const auto& b : branches_) {
      for (std::size_t i = 0; i < spec_.length; ++i) {
        permuted_.llrs[b.perm[i]] = in.llrs[i];
        permuted_.y[b.perm[i]] = in.y[i];
      }
      DecodeResult r = decoders_[b.decoder].decode_best(permuted_);
      DecodeResult back;
      back.codeword.resize(spec_.length);
      for (std::size_t i = 0; i < spec_.length; ++i) back.codeword[i] = r.codeword[b.perm[i]];
      back.input = back.codeword;
      polar_transform(back.input);
      back.info_bits.reserve(spec_.dimension);
      for (std::size_t k : spec_.info_set) back.info_bits.push_back(back.input[k]);
      back.path_metric = r.path_metric;
      back.metric = squared_distance(back.codeword, in.y);
      out.push_back(std::move(back));
    }
    return out;
  }

  DecodeResult decode(const SoftInput& in) {
    const auto branches = decode_branches(in);
    return select_ml(branches, in.y);
  }

 private:
  struct Branch {
    std::vector<std::size_t> perm;
    std::size_t decoder = 0;
  };

  CodeSpec spec_;
  std::vector<ListDecoder> decoders_;
  std::vector<Branch> branches_;
  SoftInput permuted_;
};

inline DecodeResult ae_decode(const SoftInput& s, std::vector<AffinePerm> perms, const Constraint& c, std::size_t list_size) {
  AeDecoder dec(c, std::move(perms), list_size);
  return dec.decode(s);
}

}  // namespace rmdyn
