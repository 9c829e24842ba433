#include <gtest/gtest.h>

#include <cmath>

#include "rmdyn/analysis.hpp"
#include "rmdyn/error.hpp"
#include "rmdyn/sim.hpp"

using namespace rmdyn;

TEST(Channel, NoiseVariance) {
  EXPECT_DOUBLE_EQ((ChannelPoint{0.0, 0.5}.sigma2()), 1.0);
  EXPECT_NEAR((ChannelPoint{3.0, 0.5}.sigma2()), 1.0 / std::pow(10.0, 0.3), 1e-15);
  EXPECT_THROW((ChannelPoint{0.0, 0.0}.sigma2()), ConfigError);
}

TEST(Channel, Deterministic) {
  const std::vector<std::uint8_t> x(64, 1);
  std::mt19937_64 a(5), b(5);
  const auto sa = transmit(x, {1.0, 0.5}, a);
  const auto sb = transmit(x, {1.0, 0.5}, b);
  EXPECT_EQ(sa.llrs, sb.llrs);
  EXPECT_EQ(sa.y, sb.y);
}

TEST(Channel, HighSnrRecoversSigns) {
  std::mt19937_64 rng(6);
  std::vector<std::uint8_t> x(256);
  for (auto& b : x) b = rng() & 1U;
  const auto s = transmit(x, {40.0, 0.5}, rng);
  for (std::size_t m = 0; m < x.size(); ++m) EXPECT_EQ(s.llrs[m] < 0.0F, x[m] == 1);
}

TEST(Channel, LlrMean) {
  const ChannelPoint cp{1.0, 0.5};
  const double sigma2 = cp.sigma2();
  std::mt19937_64 rng(7);
  const std::vector<std::uint8_t> x(1000, 0);
  double sum = 0.0;
  std::size_t count = 0;
  for (int t = 0; t < 100; ++t)
    for (float l : transmit(x, cp, rng).llrs) {
      sum += l;
      ++count;
    }
  const double mean = sum / static_cast<double>(count);
  const double sd = 2.0 / std::sqrt(sigma2);  // std of 2y/sigma2
  EXPECT_NEAR(mean, 2.0 / sigma2, 3.0 * sd / std::sqrt(static_cast<double>(count)));
}

TEST(Wilson, KnownIntervals) {
  const auto a = wilson_interval(0, 10);
  EXPECT_DOUBLE_EQ(a.lo, 0.0);
  EXPECT_NEAR(a.hi, 0.2775, 1e-4);
  const auto b = wilson_interval(50, 100);
  EXPECT_NEAR(b.lo, 0.4038, 1e-4);
  EXPECT_NEAR(b.hi, 0.5962, 1e-4);
  const auto c = wilson_interval(0, 0);
  EXPECT_EQ(c.lo, 0.0);
  EXPECT_EQ(c.hi, 1.0);
}

TEST(Bler, PerfectChannel) {
  const auto s = make_spec(2, 5);
  const auto c = build_constraint(s, full_variant(s));
  const std::vector<double> e{25.0};
  for (auto kind : {DecoderKind::kSc, DecoderKind::kScl, DecoderKind::kAe}) {
    DecoderConfig cfg;
    cfg.kind = kind;
    cfg.list_size = 4;
    cfg.ensemble = 4;
    const auto pts = run_bler(c, cfg, e, {1, 1000, 256}, 1);
    EXPECT_EQ(pts[0].errors, 0u);
    EXPECT_EQ(pts[0].trials, 1000u);
  }
}

TEST(Bler, WorkerCountIndependent) {
  const auto s = make_spec(2, 6);
  const auto c = build_constraint(s, full_variant(s));
  DecoderConfig cfg;
  cfg.kind = DecoderKind::kScl;
  cfg.list_size = 4;
  const std::vector<double> e{1.0, 2.0};
  const StopRule stop{30, 5000, 128};
  const auto one = run_bler(c, cfg, e, stop, 42, 1);
  EXPECT_EQ(one, run_bler(c, cfg, e, stop, 42, 3));
  EXPECT_EQ(one, run_bler(c, cfg, e, stop, 42, 1));
  EXPECT_NE(one, run_bler(c, cfg, e, stop, 43, 1));
  EXPECT_GE(one[0].errors, 30u);
  EXPECT_EQ(one[0].trials % 128, 0u);
}

TEST(Bler, InvalidStopRule) {
  const auto c = build_constraint(make_spec(1, 3), {});
  const std::vector<double> e{1.0};
  EXPECT_THROW(run_bler(c, DecoderConfig{}, e, {0, 10, 1}, 1), ConfigError);
  EXPECT_THROW(run_bler(c, DecoderConfig{}, e, {1, 10, 0}, 1), ConfigError);
}

TEST(Bler, MonotoneInSnr) {
  const auto s = make_spec(2, 6);
  const auto c = build_constraint(s, {});
  DecoderConfig cfg;
  cfg.kind = DecoderKind::kSc;
  const std::vector<double> e{0.0, 1.0, 2.0, 3.0};
  const auto pts = run_bler(c, cfg, e, {200, 20000, 512}, 3);
  for (std::size_t i = 1; i < pts.size(); ++i) EXPECT_LE(pts[i].ci95().lo, pts[i - 1].ci95().hi);
  EXPECT_GT(pts.front().bler(), pts.back().bler());
}

TEST(Bler, BelowTwiceUnionBoundAtHighSnr) {
  const auto s = make_spec(2, 5);
  const auto c = build_constraint(s, full_variant(s));
  const auto ws = brute_weight_enum(c);
  DecoderConfig cfg;
  cfg.kind = DecoderKind::kScl;
  cfg.list_size = 16;
  const std::vector<double> e{3.5, 4.0};
  const auto pts = run_bler(c, cfg, e, {100, 200000, 1024}, 11);
  for (const auto& p : pts) {
    const double ub = truncated_union_bound(ws, s.rate(), p.ebn0_db, s.length);
    EXPECT_LT(p.bler(), 2.0 * ub) << p.ebn0_db;
  }
}

TEST(Decoders, LabelsAndEnsembleChecks) {
  DecoderConfig cfg;
  EXPECT_EQ(cfg.label(), "SCL-16");
  cfg.kind = DecoderKind::kAe;
  EXPECT_EQ(cfg.label(), "AE-8-SCL-16");
  cfg.ensemble = 721;
  EXPECT_THROW(resolve_permutations(7, cfg), ConfigError);
  cfg.ensemble = 8;
  cfg.include_identity = true;
  const auto perms = resolve_permutations(7, cfg);
  ASSERT_EQ(perms.size(), 8u);
  EXPECT_TRUE(perms[0].is_identity());
  cfg.include_identity = false;
  for (const auto& p : resolve_permutations(7, cfg)) EXPECT_FALSE(p.is_identity());
}
