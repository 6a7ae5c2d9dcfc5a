#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qcap/bounds.hpp"
#include "qcap/errors.hpp"

using namespace qcap;
using namespace qcap::bounds;

TEST(Params, Derived) {
  const BoundParams a = make_params(100, 0.4, 3);
  EXPECT_DOUBLE_EQ(a.log2_d, 1e6);
  EXPECT_TRUE(a.log2_d_exact);
  EXPECT_TRUE(a.thm2_ok);
  EXPECT_TRUE(a.lemmaB_ok);
  EXPECT_FALSE(a.thm1_ok);
  EXPECT_TRUE(make_params(3, 0.5, 4).thm1_ok);
  EXPECT_FALSE(make_params(2, 0.5, 5).thm1_ok);  // 2^3 = 8 is not > 8
  EXPECT_THROW(make_params(0, 0.4, 3), ValidityError);
  EXPECT_THROW(make_params(10, 1.5, 3), ValidityError);
  EXPECT_THROW(make_params(10, 0.4, 0), ValidityError);
}

TEST(Params, BoundaryOfRange) {
  // p = 1/2 - 1/n^(alpha-1) is included
  EXPECT_TRUE(make_params(100, 0.5 - 1e-4, 3).lemmaB_ok);
  EXPECT_FALSE(make_params(100, 0.5, 3).lemmaB_ok);
  EXPECT_TRUE(make_params(100, 4e-4, 3).lemmaB_ok);
  EXPECT_FALSE(make_params(100, 3.9e-4, 3).lemmaB_ok);
  EXPECT_FALSE(make_params(100, 0.3, 1).lemmaB_ok);
}

TEST(K0, Values) {
  EXPECT_NEAR(k0(make_params(100, 0.09, 3)), 0.9098 / 0.09, 1e-12);
  EXPECT_NEAR(k0(make_params(100, 0.4, 3)), 1.4995, 1e-12);
  EXPECT_NEAR(k0(make_params(100, 0.5 - 1e-4, 3)), 1.0, 1e-9);
  EXPECT_THROW(k0(make_params(100, 0.0, 3)), ValidityError);
}

TEST(BoundTable, Examples) {
  const BoundTable t = lemma_b1(make_params(100, 0.4, 3), 2);
  ASSERT_TRUE(t.q_next_lower.has_value());
  EXPECT_NEAR(*t.q_next_lower, 400000.0, 1e-6);
  EXPECT_NEAR(t.p_upper, 300100.0, 1e-6);
  EXPECT_NEAR(*t.qc_next_lower, (2.0 / 3.0) * 0.4e6, 1e-6);
  const BoundTable one = lemma_b1(make_params(100, 0.4, 3), 1);
  EXPECT_NEAR(one.pc_upper, 200.0, 1e-9);
  EXPECT_FALSE(lemma_b1(make_params(100, 0.4, 3), 101).q_next_lower.has_value());
}

TEST(BoundTable, BelowK0UsesFirstBranch) {
  const BoundParams bp = make_params(100, 0.09, 3);
  EXPECT_NEAR(lemma_b1(bp, 5).p_upper, 0.82e6, 1e-6);
}

TEST(BoundTable, Validity) {
  try {
    lemma_b1(make_params(100, 0.5, 3), 2);
    FAIL();
  } catch (const ValidityError& e) {
    EXPECT_EQ(e.predicate(), "lemmaB_ok");
  }
  EXPECT_THROW(lemma_b1(make_params(100, 0.4, 3), 0), std::exception);
}

TEST(PureGap, Examples) {
  EXPECT_NEAR(theorem1_gap(3, 4, 1), 14.25, 1e-12);
  EXPECT_NEAR(theorem1_gap(3, 4, 3), 1.375, 1e-12);
  EXPECT_THROW(theorem1_gap(3, 4, 4), ValidityError);
  EXPECT_THROW(theorem1_gap(2, 5, 1), ValidityError);
}

TEST(PureGap, PositiveOnRandomValidTuples) {
  std::mt19937_64 rng(1);
  int checked = 0;
  while (checked < 100) {
    const std::int64_t n = std::uniform_int_distribution<std::int64_t>(2, 200)(rng);
    const std::int64_t alpha = std::uniform_int_distribution<std::int64_t>(3, 6)(rng);
    if (!(int_power(n, alpha - 2) > 8.0)) continue;
    for (int k = 1; k <= n; ++k) ASSERT_GT(theorem1_gap(n, alpha, k), 0.0) << n << " " << alpha << " " << k;
    ++checked;
  }
}

TEST(MixtureGaps, Examples) {
  const BoundParams bp = make_params(100, 0.4, 3);
  EXPECT_NEAR(*theorem2_gaps(bp, 2).f, 99900.0, 1e-9);
  EXPECT_NEAR(theorem2_gaps(bp, 1).fc, 199800.0, 1e-9);
  EXPECT_FALSE(theorem2_gaps(bp, 1).f.has_value());
  EXPECT_NEAR(*theorem2_gaps(bp, 100).f, 579800.0 / 10100.0, 1e-9);
  EXPECT_NEAR(std::log2(*theorem2_gaps(bp, 2).f), 16.6083, 1e-3);
  EXPECT_NEAR(std::log2(theorem2_gaps(bp, 1).fc), 17.6084, 1e-3);
  EXPECT_THROW(theorem2_gaps(make_params(100, 0.3, 3), 2), ValidityError);
}

TEST(MixtureGaps, PositiveOnRandomValidTuples) {
  std::mt19937_64 rng(2);
  int checked = 0;
  while (checked < 100) {
    const std::int64_t n = std::uniform_int_distribution<std::int64_t>(2, 150)(rng);
    const std::int64_t alpha = std::uniform_int_distribution<std::int64_t>(3, 5)(rng);
    const double hi = 0.5 - 1.0 / int_power(n, alpha - 1);
    if (hi <= 1.0 / 3.0) continue;
    const double p = std::uniform_real_distribution<double>(1.0 / 3.0, hi)(rng);
    const BoundParams bp = make_params(n, p, alpha);
    if (!bp.thm2_ok) continue;
    for (int k = 1; k <= n; ++k) {
      const Gaps g = theorem2_gaps(bp, k);
      ASSERT_GT(g.fc, 0.0);
      if (k >= 2) ASSERT_GT(*g.f, 0.0);
    }
    ++checked;
  }
}

TEST(MinK, Examples) {
  const BoundParams bp = make_params(100, 0.4, 3);
  EXPECT_NEAR(eq24_rhs(bp), 400002.0 / 606000.0, 1e-12);
  EXPECT_EQ(eq24_min_k(bp), 3);
}

TEST(MinK, NoneWhenNoKQualifies) {
  const BoundParams bp = make_params(4, 0.484, 4);
  ASSERT_TRUE(bp.thm2_ok);
  ASSERT_GT(eq24_rhs(bp), 0.75);
  EXPECT_FALSE(eq24_min_k(bp).has_value());
}

TEST(UseCount, Examples) {
  const BoundParams bp = make_params(100, 0.09, 3);
  EXPECT_NEAR(theorem3_c(bp, 9), 8.19 / 0.0898, 1e-9);
  EXPECT_EQ(theorem3_max_k(bp), 9);
  EXPECT_EQ(theorem3_max_k(bp, 101.0), 9);
  EXPECT_GT(0.91 * 10 / 0.0898, 101.0);
}

TEST(Figure1, RowsAndCsv) {
  const auto rows = figure1(make_params(100, 0.4, 3), 100);
  ASSERT_EQ(rows.size(), 100u);
  EXPECT_FALSE(rows[0].log2_f.has_value());
  EXPECT_NEAR(*rows[1].log2_f, 16.6083, 1e-3);
  EXPECT_NEAR(*rows[0].log2_fc, 17.6084, 1e-3);
  const std::string csv = figure1_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "k,log2_f,log2_fc");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 101);
  EXPECT_NE(csv.find("\n1,,17.608"), std::string::npos);
}

TEST(Figure2, CrossingAndValues) {
  const auto rows = figure2(make_params(100, 0.09, 3));
  ASSERT_EQ(rows.size(), 100u);
  EXPECT_NEAR(rows[0].Qmax, 100.0 / 101.0 * 0.91e6, 1e-6);
  EXPECT_NEAR(rows[8].U_k, 900022.2222222, 1e-6);
  EXPECT_NEAR(rows[9].U_k, 901020.0, 1e-6);
  EXPECT_LT(rows[8].U_k, rows[8].Qmax);
  EXPECT_GT(rows[9].U_k, rows[9].Qmax);
  EXPECT_EQ(figure2_crossing(rows), 9);
  const std::string csv = figure2_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "k,U_k,Qmax");
}

TEST(BranchSwitch, BruteForceEquivalence) {
  for (std::int64_t n : {10, 20, 50, 100})
    for (std::int64_t alpha : {2, 3, 4})
      for (double p = 0.005; p < 0.5; p += 0.0125) {
        const BoundParams bp = make_params(n, p, alpha);
        if (!bp.lemmaB_ok) continue;
        const double na = bp.log2_d;
        const double kk0 = k0(bp);
        for (int k = 1; k <= n; ++k) {
          const double second = 2.0 * n / k + (k - 1.0) / k * (1.0 - p) * na;
          const bool lhs = second <= (1.0 - 2.0 * p) * na;
          const bool rhs = k <= kk0;
          // exact ties are excluded: they are measure zero on this grid
          if (std::abs(k - kk0) < 1e-9) continue;
          EXPECT_EQ(lhs, rhs) << n << " " << p << " " << alpha << " " << k;
        }
      }
}

TEST(Monotone, LowerBoundsGrowWithK) {
  const BoundParams bp = make_params(100, 0.4, 3);
  double prev = -1.0;
  for (int k = 1; k <= 100; ++k) {
    const double q = *lemma_b1(bp, k).q_next_lower;
    EXPECT_GT(q, prev);
    prev = q;
  }
}

TEST(Format, TwelveDigits) {
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(900990.099009901), "900990.09901");
}
