#include <gtest/gtest.h>

#include "reflectbench/core/errors.hpp"
#include "reflectbench/analysis/stats.hpp"

using namespace reflectbench;

// Reference values below come from scipy.stats / scipy.special.

TEST(SpecialFunctions, ReferenceValues) {
  EXPECT_NEAR(regularized_beta(0.3, 2.5, 1.5), 0.08894372317066562, 1e-12);
  EXPECT_DOUBLE_EQ(regularized_beta(0.0, 2, 3), 0.0);
  EXPECT_DOUBLE_EQ(regularized_beta(1.0, 2, 3), 1.0);
  EXPECT_NEAR(regularized_gamma_p(3, 2.0), 0.32332358381693654, 1e-12);
  EXPECT_NEAR(regularized_gamma_q(0.5, 4.0), 0.004677734981047276, 1e-12);
  EXPECT_NEAR(chi_square_sf(7.5, 2), 0.023517745856009114, 1e-12);
  EXPECT_NEAR(student_t_two_sided_p(2.1, 7.3), 0.07224671342485328, 1e-10);
  EXPECT_NEAR(normal_cdf(1.2), 0.8849303297782918, 1e-12);
}

TEST(Tukey, CriticalValue) {
  EXPECT_NEAR(ptukey(3.314, 3), 0.94995585959389, 1e-6);
  EXPECT_NEAR(qtukey(0.95, 3), 3.314493155398122, 1e-4);
  EXPECT_DOUBLE_EQ(ptukey(0.0, 3), 0.0);
  EXPECT_GT(ptukey(10.0, 3), 0.999999);
  EXPECT_LT(ptukey(2.0, 3), ptukey(2.5, 3));
}

TEST(Welch, ReferenceCase) {
  const std::vector<double> x = {0.61, 0.64, 0.62, 0.66, 0.63, 0.65};
  const std::vector<double> y = {0.58, 0.60, 0.57, 0.61, 0.59};
  const auto r = welch_t_test(x, y);
  EXPECT_NEAR(r.t, 4.323460152737353, 1e-9);
  EXPECT_NEAR(r.p, 0.0019287343508296838, 1e-9);
  const auto swapped = welch_t_test(y, x);
  EXPECT_NEAR(swapped.t, -r.t, 1e-12);
  EXPECT_NEAR(swapped.p, r.p, 1e-15);
}

TEST(Welch, Degenerate) {
  const std::vector<double> same = {1, 1, 1};
  EXPECT_THROW(welch_t_test(same, same), Error);
  const std::vector<double> one = {1};
  EXPECT_THROW(welch_t_test(one, same), Error);
}

TEST(Ranks, TiesShareMean) {
  const std::vector<double> row = {0.5, 0.9, 0.5, 0.1};
  EXPECT_EQ(average_ranks(row), (std::vector<double>{2.5, 4, 2.5, 1}));
}

TEST(Friedman, ReferenceCases) {
  const ScoreMatrix m = {{0.9, 0.8, 0.7}, {0.85, 0.8, 0.6}, {0.7, 0.75, 0.5}, {0.95, 0.9, 0.85},
                         {0.6, 0.5, 0.55}};
  const auto r = friedman_test(m);
  EXPECT_NEAR(r.chi2, 6.4, 1e-9);
  EXPECT_DOUBLE_EQ(r.df, 2);
  EXPECT_NEAR(r.p, 0.04076220397836611, 1e-9);
  EXPECT_EQ(r.mean_ranks.size(), 3u);
  // Binary scores with ties need the tie correction.
  const ScoreMatrix b = {{1, 1, 0}, {1, 0, 0}, {1, 1, 1}, {0, 0, 0}, {1, 0, 1}, {1, 1, 0}};
  const auto rb = friedman_test(b);
  EXPECT_NEAR(rb.chi2, 3.5, 1e-9);
  EXPECT_NEAR(rb.p, 0.1737739434504451, 1e-9);
}

TEST(Friedman, IdenticalColumnsAndBadShapes) {
  const ScoreMatrix m = {{0.1, 0.1, 0.1}, {0.9, 0.9, 0.9}, {0.4, 0.4, 0.4}};
  const auto r = friedman_test(m);
  EXPECT_DOUBLE_EQ(r.chi2, 0.0);
  EXPECT_DOUBLE_EQ(r.p, 1.0);
  EXPECT_THROW(friedman_test({{1, 1, 1}, {1, 1, 1}}), Error);
  EXPECT_THROW(friedman_test({{1, 2}, {3, 4}}), Error);
  EXPECT_THROW(friedman_test({{1, 2, 3}}), Error);
  EXPECT_THROW(friedman_test({{1, 2, 3}, {1, 2}}), Error);
}

TEST(Nemenyi, ReferenceCase) {
  const ScoreMatrix m = {{0.9, 0.8, 0.7}, {0.85, 0.8, 0.6}, {0.7, 0.75, 0.5}, {0.95, 0.9, 0.85},
                         {0.6, 0.5, 0.55}};
  const auto p = nemenyi_posthoc(m);
  ASSERT_EQ(p.size(), 3u);
  EXPECT_NEAR(p[0][1], 0.415113500352536, 1e-6);
  EXPECT_NEAR(p[0][2], 0.030662749794239996, 1e-6);
  EXPECT_NEAR(p[1][2], 0.4151135003525356, 1e-6);
  for (size_t i = 0; i < 3; ++i) {
    EXPECT_DOUBLE_EQ(p[i][i], 1.0);
    for (size_t j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(p[i][j], p[j][i]);
  }
}

TEST(Nemenyi, IdenticalColumns) {
  const ScoreMatrix m = {{0.1, 0.1, 0.1, 0.1}, {0.9, 0.9, 0.9, 0.9}};
  for (const auto& row : nemenyi_posthoc(m)) {
    for (double v : row) EXPECT_GE(v, 0.999);
  }
}
