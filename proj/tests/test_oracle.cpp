#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "lip/lip.hpp"

namespace lip {
namespace {

TEST(GridSearch, CountsAndGuards) {
  const ModelTable m = build_two_point_model(0.5);
  const GridSearchResult res = grid_search_lip(m, 0.5);
  // Compositions of 2 into 2 parts: (0,2), (1,1), (2,0).
  EXPECT_EQ(res.evaluations, 3u);

  EXPECT_THROW(grid_search_lip(m, 0.0), std::invalid_argument);
  EXPECT_THROW(grid_search_lip(m, 1.5), std::invalid_argument);

  const ModelTable big = build_binomial_model(0, 1, testing::grid11());
  EXPECT_THROW(grid_search_lip(big, 0.5), std::invalid_argument)
      << "11 parameters exceed the exhaustive-search cap";
}

TEST(GridSearch, FindsTwoPointInformationMaximum) {
  const ModelTable m = build_two_point_model(0.5);
  const GridSearchResult res = grid_search_lip(m, 0.005);
  EXPECT_EQ(res.evaluations, 201u);
  EXPECT_GT(res.best_value, 0.0);
  EXPECT_GT(res.empirical_lipschitz, 0.0);
  EXPECT_TRUE(std::isfinite(res.empirical_lipschitz));
  // Every lattice value is a lower bound for the maximum.
  EXPECT_LE(res.best_value, std::log(2.0));
  // Cross-check against an independent direct scan at the same resolution.
  double direct_best = -1.0;
  for (int i = 0; i <= 200; ++i) {
    const double a = static_cast<double>(i) / 200.0;
    direct_best = std::max(
        direct_best, conditional_mutual_information(m, Prior{{a, 1.0 - a}}));
  }
  // The lattice walk forms weights incrementally, so the evaluation points can
  // differ from the direct i/n construction in the last ulp.
  EXPECT_NEAR(res.best_value, direct_best, 1e-12);
}

TEST(GridSearch, DqMinimumAtPointMass) {
  const ModelTable m = build_two_point_model(0.5);
  const GridSearchResult res = grid_search_dq(m, testing::stated_two_point_q(), 0.005);
  EXPECT_NEAR(res.best_value, 0.0, 1e-12);
  EXPECT_NEAR(res.best_prior[0], 1.0, 1e-12);
}

TEST(FiniteDiff, MatchesInformationGradient) {
  std::mt19937_64 rng(47);
  const ModelTable m = testing::random_model(rng, 4, 3, 2);
  for (int rep = 0; rep < 5; ++rep) {
    const Prior pi = testing::random_interior_prior(rng, 4);
    const std::vector<double> analytic = lip_gradient(m, pi);
    const std::vector<double> fd = finite_diff_gradient(
        [&](const Prior& w) { return conditional_mutual_information(m, w); }, pi);
    for (std::size_t t = 1; t < 4; ++t) {
      const double pairwise = analytic[t] - analytic[0];
      EXPECT_NEAR(fd[t], pairwise, 1e-5 * std::max(1.0, std::abs(pairwise)))
          << "component " << t;
    }
    EXPECT_EQ(fd[0], 0.0);
  }
}

TEST(FiniteDiff, MatchesDivergenceGradient) {
  std::mt19937_64 rng(53);
  const ModelTable m = testing::random_model(rng, 3, 2, 3);
  const PredictiveTable q = testing::random_positive_predictive(rng, 2, 3);
  for (int rep = 0; rep < 5; ++rep) {
    const Prior pi = testing::random_interior_prior(rng, 3);
    const std::vector<double> analytic = dq_gradient(m, pi, q);
    const std::vector<double> fd = finite_diff_gradient(
        [&](const Prior& w) { return d_q(m, w, q).value(); }, pi);
    for (std::size_t t = 1; t < 3; ++t) {
      const double pairwise = analytic[t] - analytic[0];
      EXPECT_NEAR(fd[t], pairwise, 1e-5 * std::max(1.0, std::abs(pairwise)))
          << "component " << t;
    }
  }
}

TEST(FiniteDiff, EnforcesPreconditions) {
  const Prior interior = uniform_prior(3);
  const auto f = [](const Prior& w) { return w[0]; };
  EXPECT_THROW(finite_diff_gradient(f, interior, 1e-9), std::invalid_argument);
  EXPECT_THROW(finite_diff_gradient(f, interior, 1e-3), std::invalid_argument);
  const Prior boundary = point_mass(3, 0);
  EXPECT_THROW(finite_diff_gradient(f, boundary), std::invalid_argument);
}

}  // namespace
}  // namespace lip
