#pragma once

// BPSK over AWGN and a seeded Monte Carlo block-error-rate harness.
//
// Every trial draws from its own generator seeded by (seed, point, trial),
// and the stopping rule is evaluated only between fixed-size batches, so
// results do not depend on the number of workers.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "rmdyn/autgroup.hpp"
#include "rmdyn/codespec.hpp"
#include "rmdyn/encdec.hpp"
#include "rmdyn/error.hpp"

namespace rmdyn {

struct ChannelPoint {
  double ebn0_db = 0.0;
  double rate = 0.5;

  double sigma2() const {
    if (rate <= 0.0) throw ConfigError("ChannelPoint: rate must be positive");
    return 1.0 / (2.0 * rate * std::pow(10.0, ebn0_db / 10.0));
  }
};

// y_m = (1 - 2 x_m) + N(0, sigma2); llr = 2 y / sigma2, clipped.
inline SoftInput transmit(std::span<const std::uint8_t> x, const ChannelPoint& cp, std::mt19937_64& rng) {
  const double sigma2 = cp.sigma2();
  std::normal_distribution<double> noise(0.0, std::sqrt(sigma2));
  std::vector<double> y(x.size());
  for (std::size_t m = 0; m < x.size(); ++m) y[m] = (x[m] ? -1.0 : 1.0) + noise(rng);
  return SoftInput::from_observation(std::move(y), sigma2);
}

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// Wilson score interval; z = 1.96 for 95%.
inline Interval wilson_interval(std::uint64_t errors, std::uint64_t trials, double z = 1.959963984540054) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(errors) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

struct BlerPoint {
  double ebn0_db = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;

  double bler() const noexcept { return trials == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(trials); }
  Interval ci95() const { return wilson_interval(errors, trials); }
  friend bool operator==(const BlerPoint&, const BlerPoint&) = default;
};

struct StopRule {
  std::uint64_t min_errors = 100;
  std::uint64_t max_trials = 1'000'000;
  std::uint64_t batch = 512;
};

enum class DecoderKind { kSc, kScl, kAe };

struct DecoderConfig {
  DecoderKind kind = DecoderKind::kScl;
  std::size_t list_size = 16;
  std::size_t ensemble = 8;
  GroupDescriptor group = GroupDescriptor::parse("blta_pl");
  bool include_identity = false;
  std::uint64_t perm_seed = 1;
  std::vector<AffinePerm> perms;  // explicit list; overrides sampling when non-empty
  bool allow_unstable = false;

  std::string label() const {
    switch (kind) {
      case DecoderKind::kSc: return "SC";
      case DecoderKind::kScl: return "SCL-" + std::to_string(list_size);
      case DecoderKind::kAe:
        return "AE-" + std::to_string(perms.empty() ? ensemble : perms.size()) + "-SCL-" + std::to_string(list_size);
    }
    return "?";
  }
};

inline std::vector<AffinePerm> resolve_permutations(int n, const DecoderConfig& cfg) {
  if (!cfg.perms.empty()) return cfg.perms;
  if (cfg.ensemble == 0) throw ConfigError("decoder: ensemble size must be >= 1");
  const double order = cfg.group.size(n);
  if (static_cast<double>(cfg.ensemble) > order) throw ConfigError("decoder: ensemble size exceeds group size");
  std::vector<AffinePerm> out;
  if (cfg.include_identity) {
    out.push_back(identity_perm(n));
    if (cfg.ensemble > 1) {
      for (auto& p : sample_group(cfg.group, n, cfg.ensemble - 1, cfg.perm_seed)) {
        if (!p.is_identity()) out.push_back(std::move(p));
      }
    }
  } else {
    out = sample_group(cfg.group, n, cfg.ensemble, cfg.perm_seed);
  }
  return out;
}

class BlockDecoder {
 public:
  virtual ~BlockDecoder() = default;
  virtual DecodeResult decode(const SoftInput& in) = 0;
};

namespace detail {

class ScBlockDecoder final : public BlockDecoder {
 public:
  explicit ScBlockDecoder(FreezeMap rules) : rules_(std::move(rules)) {}
  DecodeResult decode(const SoftInput& in) override { return sc_decode(in, rules_); }

 private:
  FreezeMap rules_;
};

class SclBlockDecoder final : public BlockDecoder {
 public:
  SclBlockDecoder(FreezeMap rules, std::size_t list_size) : dec_(std::move(rules), list_size) {}
  DecodeResult decode(const SoftInput& in) override { return dec_.decode_best(in); }

 private:
  ListDecoder dec_;
};

class AeBlockDecoder final : public BlockDecoder {
 public:
  AeBlockDecoder(const Constraint& c, std::vector<AffinePerm> perms, std::size_t list_size, AeOptions opts)
      : dec_(c, std::move(perms), list_size, opts) {}
  DecodeResult decode(const SoftInput& in) override { return dec_.decode(in); }

 private:
  AeDecoder dec_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace detail

inline std::unique_ptr<BlockDecoder> make_decoder(const Constraint& c, const DecoderConfig& cfg) {
  switch (cfg.kind) {
    case DecoderKind::kSc:
      return std::make_unique<detail::ScBlockDecoder>(FreezeMap::from_constraint(c));
    case DecoderKind::kScl:
      return std::make_unique<detail::SclBlockDecoder>(FreezeMap::from_constraint(c), cfg.list_size);
    case DecoderKind::kAe:
      return std::make_unique<detail::AeBlockDecoder>(c, resolve_permutations(c.spec.n, cfg), cfg.list_size,
                                                      AeOptions{cfg.allow_unstable});
  }
  throw ConfigError("unknown decoder kind");
}

// Counter-based seed for one trial.
inline std::uint64_t trial_seed(std::uint64_t seed, std::size_t point, std::uint64_t trial) {
  return detail::splitmix64(detail::splitmix64(detail::splitmix64(seed) ^ point) ^ trial);
}

struct TrialOutcome {
  bool block_error = false;
};

// One encode -> transmit -> decode round with its own generator.
inline TrialOutcome run_trial(const FreezeMap& rules, BlockDecoder& dec, const ChannelPoint& cp, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> info(rules.dimension());
  for (std::size_t t = 0; t < info.size(); t += 64) {
    const std::uint64_t word = rng();
    for (std::size_t b = 0; b < 64 && t + b < info.size(); ++b) info[t + b] = static_cast<std::uint8_t>((word >> b) & 1U);
  }
  const auto x = encode(info, rules);
  const auto in = transmit(x, cp, rng);
  const auto out = dec.decode(in);
  return {out.info_bits != info};
}

using ProgressFn = std::function<void(const BlerPoint&)>;

inline std::vector<BlerPoint> run_bler(const Constraint& c, const DecoderConfig& cfg, std::span<const double> ebn0s,
                                       const StopRule& stop, std::uint64_t seed, unsigned workers = 1,
                                       const ProgressFn& progress = {}) {
  if (stop.min_errors < 1) throw ConfigError("run_bler: min_errors must be >= 1");
  if (stop.max_trials < 1 || stop.batch < 1) throw ConfigError("run_bler: max_trials and batch must be >= 1");
  workers = std::max(1U, workers);
  const FreezeMap rules = FreezeMap::from_constraint(c);
  std::vector<std::unique_ptr<BlockDecoder>> decoders;
  for (unsigned w = 0; w < workers; ++w) decoders.push_back(make_decoder(c, cfg));

  std::vector<BlerPoint> out;
  for (std::size_t pi = 0; pi < ebn0s.size(); ++pi) {
    const ChannelPoint cp{ebn0s[pi], c.spec.rate()};
    BlerPoint pt;
    pt.ebn0_db = ebn0s[pi];
    while (pt.errors < stop.min_errors && pt.trials < stop.max_trials) {
      const std::uint64_t begin = pt.trials;
      const std::uint64_t count = std::min(stop.batch, stop.max_trials - pt.trials);
      std::vector<std::uint64_t> errs(workers, 0);
      auto work = [&](unsigned id) {
        for (std::uint64_t t = begin + id; t < begin + count; t += workers) {
          if (run_trial(rules, *decoders[id], cp, trial_seed(seed, pi, t)).block_error) ++errs[id];
        }
      };
      if (workers == 1) {
        work(0);
      } else {
        std::vector<std::thread> pool;
        for (unsigned id = 0; id < workers; ++id) pool.emplace_back(work, id);
        for (auto& th : pool) th.join();
      }
      pt.trials += count;
      for (auto e : errs) pt.errors += e;
      if (progress) progress(pt);
    }
    out.push_back(pt);
  }
  return out;
}

}  // namespace rmdyn
