#include <gtest/gtest.h>

#include <cmath>

#include "rmdyn/analysis.hpp"
#include "rmdyn/error.hpp"

using namespace rmdyn;

namespace {

// Gaussian tail by Simpson integration of the density on [x, x + 12].
double q_oracle(double x) {
  const int steps = 20000;
  const double h = 12.0 / steps;
  double s = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double t = x + i * h;
    const double f = std::exp(-t * t / 2.0) / std::sqrt(2.0 * M_PI);
    s += f * (i == 0 || i == steps ? 1.0 : (i % 2 ? 4.0 : 2.0));
  }
  return s * h / 3.0;
}

WeightSpectrum table(std::initializer_list<std::pair<const std::size_t, std::uint64_t>> counts) {
  WeightSpectrum ws;
  ws.counts = counts;
  ws.exact = false;
  return ws;
}

}  // namespace

TEST(Brute, R13) {
  const auto ws = brute_weight_enum(build_constraint(make_spec(1, 3), {}));
  EXPECT_TRUE(ws.exact);
  EXPECT_EQ(ws.counts, (std::map<std::size_t, std::uint64_t>{{0, 1}, {4, 14}, {8, 1}}));
  EXPECT_EQ(ws.min_distance(), 4u);
}

TEST(Brute, InvariantsForAllVariants) {
  for (int n = 3; n <= 6; ++n)
    for (int r = 1; r < n; ++r) {
      const auto s = make_spec(r, n);
      if (s.dimension > 20) continue;
      for (const auto& var : enumerate_variants(s)) {
        const auto ws = brute_weight_enum(build_constraint(s, var));
        EXPECT_EQ(ws.at(0), 1u);
        EXPECT_EQ(ws.total(), std::uint64_t{1} << s.dimension);
        EXPECT_GE(ws.min_distance(), std::size_t{1} << (n - r));
      }
    }
}

TEST(Brute, WorkerCountIndependent) {
  const auto s = make_spec(2, 6);
  const auto c = build_constraint(s, full_variant(s));
  EXPECT_EQ(brute_weight_enum(c, 1).counts, brute_weight_enum(c, 5).counts);
}

TEST(Brute, LargeDimensionRefused) { EXPECT_THROW(brute_weight_enum(build_constraint(make_spec(3, 7), {})), ResourceError); }

TEST(MinWeight, FormulaMatchesBrute) {
  for (int n = 2; n <= 7; ++n)
    for (int r = 1; r < n; ++r) {
      const auto s = make_spec(r, n);
      if (s.dimension > 16) continue;
      const auto ws = brute_weight_enum(build_constraint(s, {}), 4);
      EXPECT_EQ(rm_minweight_count(r, n), ws.at(std::size_t{1} << (n - r))) << r << "," << n;
    }
}

TEST(MinWeight, KnownValues) {
  EXPECT_EQ(rm_minweight_count(1, 3), 14u);
  EXPECT_EQ(rm_minweight_count(3, 7), 94488u);
  EXPECT_THROW(rm_minweight_count(0, 3), ConfigError);
}

TEST(SclEstimate, LowerBoundOfExactSpectrum) {
  const auto s = make_spec(2, 5);
  for (const auto& var : enumerate_variants(s)) {
    const auto c = build_constraint(s, var);
    const auto exact = brute_weight_enum(c);
    const auto est = low_weight_enum_scl(c, 256, 12);
    EXPECT_FALSE(est.exact);
    EXPECT_EQ(est.method, SpectrumMethod::kSclEstimate);
    for (const auto& [w, count] : est.counts) {
      EXPECT_LE(w, 12u);
      EXPECT_LE(count, exact.at(w)) << w;
    }
    EXPECT_EQ(est.at(0), 1u);
  }
}

TEST(SclEstimate, ExhaustiveListIsExact) {
  const auto s = make_spec(1, 4);
  const auto c = build_constraint(s, full_variant(s));
  const auto exact = brute_weight_enum(c);
  EXPECT_EQ(low_weight_enum_scl(c, 32, 16).counts, exact.counts);
}

TEST(SclEstimate, Caps) {
  const auto c = build_constraint(make_spec(1, 3), {});
  EXPECT_THROW(low_weight_enum_scl(c, 4, 25), ConfigError);
  EXPECT_THROW(low_weight_enum_scl(c, (std::size_t{1} << 20) + 1, 4), ResourceError);
}

TEST(UnionBound, QFunction) {
  for (double x : {0.0, 0.5, 1.0, 2.0, 3.0, 4.5})
    EXPECT_NEAR(q_function(x), q_oracle(x), 1e-9 + 1e-7 * q_oracle(x)) << x;
}

TEST(UnionBound, SumOfTerms) {
  const auto ws = table({{0, 1}, {16, 20760}, {20, 203420}});
  const double rate = 0.5, ebn0 = std::pow(10.0, 0.3);
  const double want = 20760 * q_oracle(std::sqrt(2 * rate * 16 * ebn0)) + 203420 * q_oracle(std::sqrt(2 * rate * 20 * ebn0));
  EXPECT_NEAR(truncated_union_bound(ws, rate, 3.0, 20), want, 1e-6 * want);
  // truncation drops w = 20
  EXPECT_LT(truncated_union_bound(ws, rate, 3.0, 18), want);
  EXPECT_THROW(truncated_union_bound(WeightSpectrum{}, rate, 3.0, 20), ConfigError);
}

TEST(UnionBound, DecreasingInSnr) {
  const auto ws = table({{16, 28632}, {18, 13504}, {20, 172800}});
  double prev = 1e9;
  for (double e = 1.0; e <= 5.0; e += 0.5) {
    const double b = truncated_union_bound(ws, 0.5, e, 20);
    EXPECT_LT(b, prev);
    prev = b;
  }
}

TEST(Memory, TableRows) {
  const int codes[][2] = {{3, 7}, {3, 8}, {4, 8}, {5, 8}};
  const std::uint64_t stable[] = {22, 29, 29, 8};
  const std::uint64_t unknown[] = {65536, 333824, 190464, 75776};
  for (int i = 0; i < 4; ++i) {
    const auto s = make_spec(codes[i][0], codes[i][1]);
    EXPECT_EQ(memory_requirements(s, 8, MemoryScenario::kStable), stable[i]);
    EXPECT_EQ(memory_requirements(s, 8, MemoryScenario::kUnknownPerms), unknown[i]);
  }
  EXPECT_EQ(memory_requirements(make_spec(3, 7), 0, MemoryScenario::kUnknownPerms), 0u);
}

TEST(Memory, KnownPermutations) {
  const auto s = make_spec(3, 7);
  EXPECT_THROW(memory_requirements(s, 8, MemoryScenario::kKnownPerms), ConfigError);
  const auto lta = sample_group(GroupDescriptor::parse("lta"), 7, 8, 1);
  const auto st = known_perm_storage(s, lta);
  EXPECT_EQ(st.dense_bits, 8u * s.length * s.redundancy());
  EXPECT_GT(st.nonzero_entries, 8u * s.redundancy());
  EXPECT_LT(st.nonzero_entries, st.dense_bits);
  // stable permutations reduce to V itself: one or two ones per row
  const auto pl = sample_blta_pl(7, 8, 1);
  const auto c = build_constraint(s, full_variant(s));
  EXPECT_EQ(known_perm_storage(s, pl).nonzero_entries, 8u * rref(c.v).matrix.popcount());
}
