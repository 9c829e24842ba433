#include <gtest/gtest.h>

#include <set>

#include "oracle.hpp"
#include "rmdyn/codespec.hpp"
#include "rmdyn/error.hpp"

using namespace rmdyn;

namespace {

std::uint64_t binom(int n, int k) {
  std::uint64_t b = 1;
  for (int i = 1; i <= k; ++i) b = b * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return b;
}

}  // namespace

TEST(Spec, DimensionIsBinomialSum) {
  for (int n = 0; n <= 10; ++n)
    for (int r = 0; r <= n; ++r) {
      std::uint64_t k = 0;
      for (int i = 0; i <= r; ++i) k += binom(n, i);
      const auto s = make_spec(r, n);
      EXPECT_EQ(s.dimension, k);
      EXPECT_EQ(s.info_set.size() + s.frozen_set.size(), s.length);
    }
}

TEST(Spec, R13FrozenSet) {
  const auto s = make_spec(1, 3);
  EXPECT_EQ(s.frozen_set, (std::vector<std::size_t>{0, 1, 2, 4}));
  EXPECT_EQ(s.info_set, (std::vector<std::size_t>{3, 5, 6, 7}));
}

TEST(Spec, TopBitMeansUpperHalf) {
  const auto s = make_spec(2, 5);
  for (std::size_t k = 0; k < s.length; ++k) EXPECT_EQ(s.top_bit(k), k >= s.length / 2);
}

TEST(Spec, BadArgumentsThrow) {
  EXPECT_THROW(make_spec(4, 3), ConfigError);
  EXPECT_THROW(make_spec(-1, 3), ConfigError);
  EXPECT_THROW(make_spec(1, 17), ConfigError);
}

// Row k of G_N is the evaluation of its monomial.
TEST(Monomial, RowsAreMonomialEvaluations) {
  for (int n = 1; n <= 7; ++n) {
    const auto g = oracle::kron_power(n);
    for (std::size_t k = 0; k < g.size(); ++k) {
      const auto m = monomial_of_row(k, n);
      EXPECT_EQ(m.degree(), n - hamming_weight(k));
      EXPECT_EQ(row_of_monomial(m, n), k);
      const auto ev = eval_monomial(m, n);
      for (std::size_t j = 0; j < g.size(); ++j) ASSERT_EQ(ev[j], g[k][j]) << n << " " << k << " " << j;
    }
  }
}

TEST(Constraint, R13GoldenMatrices) {
  const auto c = build_constraint(make_spec(1, 3), {1});
  const auto v = BitMatrix::from_rows({{1, 0, 0, 0, 0, 0, 0, 0},
                                       {0, 1, 0, 0, 0, 0, 0, 0},
                                       {0, 0, 1, 0, 0, 0, 0, 0},
                                       {0, 0, 0, 1, 1, 0, 0, 0}});
  const auto w = BitMatrix::from_rows({{0, 0, 0, 1, 1, 0, 0, 0},
                                       {0, 0, 0, 0, 0, 1, 0, 0},
                                       {0, 0, 0, 0, 0, 0, 1, 0},
                                       {0, 0, 0, 0, 0, 0, 0, 1}});
  EXPECT_EQ(c.v, v);
  EXPECT_EQ(c.w, w);
  EXPECT_EQ(c.rules[4], (FreezeRule{RuleKind::kDynamic, 3}));
  EXPECT_TRUE((c.w * c.v.transpose()).is_zero());
}

TEST(Constraint, OrthogonalForAllVariants) {
  for (int n = 1; n <= 8; ++n)
    for (int r = 0; r <= n; ++r) {
      const auto s = make_spec(r, n);
      for (const auto& var : enumerate_variants(s)) {
        const auto c = build_constraint(s, var);
        ASSERT_TRUE((c.w * c.v.transpose()).is_zero()) << r << "," << n;
        EXPECT_EQ(rank(c.v), s.redundancy());
        EXPECT_EQ(rank(c.w), s.dimension);
      }
    }
}

// Rule table checked against a direct reading of the freezing rule.
TEST(Constraint, RulesFollowDefinition) {
  for (int n = 2; n <= 8; ++n)
    for (int r = 1; r < n - 1; ++r) {
      const auto s = make_spec(r, n);
      for (const auto& var : enumerate_variants(s)) {
        const std::set<int> active(var.begin(), var.end());
        const auto c = build_constraint(s, var);
        for (std::size_t i = 0; i < s.length; ++i) {
          const std::size_t half = s.length / 2;
          const std::size_t j = (s.length - 1) - i;
          FreezeRule want{RuleKind::kZero, 0};
          if (hamming_weight(i) >= n - r) want = {RuleKind::kInfo, 0};
          else if (i >= half && hamming_weight(j) >= n - r && active.count(hamming_weight(i)))
            want = {RuleKind::kDynamic, j};
          ASSERT_EQ(c.rules[i], want) << r << "," << n << " i=" << i;
          if (want.kind == RuleKind::kDynamic) EXPECT_LT(j, i);
        }
      }
    }
}

TEST(Constraint, DynamicCountsR37) {
  const auto s = make_spec(3, 7);
  EXPECT_EQ(build_constraint(s, {3}).dynamic_count(), 15u);
  EXPECT_EQ(build_constraint(s, full_variant(s)).dynamic_count(), 22u);
  EXPECT_EQ(build_constraint(s, {}).dynamic_count(), 0u);
  EXPECT_EQ(full_variant(s), (Variant{1, 2, 3}));
}

TEST(Constraint, DuplicatesAndOrderNormalised) {
  const auto s = make_spec(3, 7);
  EXPECT_EQ(build_constraint(s, {3, 1, 3}).variant, (Variant{1, 3}));
}

TEST(Constraint, EmptyWeightClassThrows) {
  const auto s = make_spec(3, 7);
  EXPECT_THROW(build_constraint(s, {4}), ConfigError);
  EXPECT_THROW(build_constraint(s, {0}), ConfigError);
  EXPECT_THROW(build_constraint(make_spec(1, 3), {2}), ConfigError);
}

TEST(Constraint, FullVariantReachesD) {
  for (int n = 2; n <= 10; ++n)
    for (int r = 0; r <= n; ++r) {
      const auto s = make_spec(r, n);
      EXPECT_EQ(build_constraint(s, full_variant(s)).dynamic_count(), max_dynamic_count(s)) << r << "," << n;
    }
}

TEST(MaxDynamic, TableValues) {
  EXPECT_EQ(max_dynamic_count(make_spec(3, 7)), 22u);
  EXPECT_EQ(max_dynamic_count(make_spec(3, 8)), 29u);
  EXPECT_EQ(max_dynamic_count(make_spec(4, 8)), 29u);
  EXPECT_EQ(max_dynamic_count(make_spec(5, 8)), 8u);
}

TEST(Variants, CountMatchesEnumeration) {
  for (int n = 2; n <= 12; ++n)
    for (int r = 1; r < n; ++r) {
      const auto s = make_spec(r, n);
      const auto all = enumerate_variants(s);
      const std::set<Variant> distinct(all.begin(), all.end());
      EXPECT_EQ(distinct.size(), all.size());
      EXPECT_EQ(count_stable_variants(s), all.size()) << r << "," << n;
    }
  EXPECT_EQ(count_stable_variants(make_spec(3, 7)), 8u);
}

TEST(Variants, DegenerateOrderThrows) {
  EXPECT_THROW(count_stable_variants(make_spec(0, 5)), ConfigError);
  EXPECT_THROW(count_stable_variants(make_spec(5, 5)), ConfigError);
}
