#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "lip/lip.hpp"

namespace lip {
namespace {

TEST(BinomialBuilder, DegenerateEndpointsGrid) {
  const ModelTable m = build_binomial_model(0, 1, {0.0, 1.0});
  ASSERT_EQ(m.num_theta(), 2u);
  ASSERT_EQ(m.num_x(), 1u);
  ASSERT_EQ(m.num_y(), 2u);
  EXPECT_EQ(m.prob(0, 0, 0), 1.0);
  EXPECT_EQ(m.prob(0, 0, 1), 0.0);
  EXPECT_EQ(m.prob(1, 0, 0), 0.0);
  EXPECT_EQ(m.prob(1, 0, 1), 1.0);
}

TEST(BinomialBuilder, HalfRowOfTwoOneModel) {
  const ModelTable m = build_binomial_model(2, 1, {0.0, 0.5, 1.0});
  const std::vector<double> expected = {1.0 / 8, 1.0 / 8, 2.0 / 8, 2.0 / 8, 1.0 / 8, 1.0 / 8};
  const auto row = m.theta_row(1);
  ASSERT_EQ(row.size(), expected.size());
  for (std::size_t c = 0; c < expected.size(); ++c) {
    EXPECT_NEAR(row[c], expected[c], 1e-15) << "cell " << c;
  }
}

TEST(BinomialBuilder, LargeFutureRowsNormalized) {
  const ModelTable m = build_binomial_model(0, 1000, testing::grid11());
  ASSERT_EQ(m.num_theta(), 11u);
  ASSERT_EQ(m.num_x(), 1u);
  ASSERT_EQ(m.num_y(), 1001u);
  for (std::size_t t = 0; t < m.num_theta(); ++t) {
    const auto row = m.theta_row(t);
    const double sum =
        detail::reversal_invariant_sum(row.size(), [&](std::size_t c) { return row[c]; });
    EXPECT_NEAR(sum, 1.0, 1e-12) << "theta " << t;
  }
  EXPECT_TRUE(validate_model(m).valid());
}

TEST(BinomialBuilder, ExactMirrorSymmetry) {
  for (const auto& [n, mm] : {std::pair{2, 1}, std::pair{5, 5}, std::pair{3, 7}}) {
    const ModelTable m = build_binomial_model(n, mm, testing::grid11());
    const std::size_t T = m.num_theta(), k = m.num_x(), l = m.num_y();
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < l; ++j) {
          EXPECT_EQ(m.prob(t, i, j), m.prob(T - 1 - t, k - 1 - i, l - 1 - j))
              << "(" << n << "," << mm << ") asymmetric at t=" << t << " i=" << i
              << " j=" << j;
        }
      }
    }
    EXPECT_TRUE(validate_model(m).valid());
  }
}

TEST(BinomialBuilder, RejectsBadInputs) {
  EXPECT_THROW(build_binomial_model(-1, 1, {0.5}), std::invalid_argument);
  EXPECT_THROW(build_binomial_model(0, 0, {0.5}), std::invalid_argument);
  EXPECT_THROW(build_binomial_model(0, 1, {}), std::invalid_argument);
  EXPECT_THROW(build_binomial_model(0, 1, {0.5, 1.5}), std::invalid_argument);
  EXPECT_THROW(build_binomial_model(0, 1, {0.5, 0.5}), std::invalid_argument);
}

TEST(EndpointBinomialBuilder, EndpointRowsAreDegenerate) {
  const ModelTable m = build_endpoint_binomial_model(testing::grid11());
  ASSERT_EQ(m.num_theta(), 11u);
  EXPECT_EQ(m.prob(0, 0, 0), 1.0);  // theta = 0: all mass at (x,y) = (0,0)
  for (std::size_t c = 1; c < m.num_cells(); ++c) EXPECT_EQ(m.theta_row(0)[c], 0.0);
  EXPECT_EQ(m.prob(10, 2, 1), 1.0);  // theta = 1: all mass at (2,1)
  for (std::size_t c = 0; c + 1 < m.num_cells(); ++c) EXPECT_EQ(m.theta_row(10)[c], 0.0);
}

TEST(EndpointBinomialBuilder, RequiresBothEndpoints) {
  EXPECT_THROW(build_endpoint_binomial_model({0.0, 0.5}), std::invalid_argument);
  EXPECT_THROW(build_endpoint_binomial_model({0.5, 1.0}), std::invalid_argument);
  EXPECT_NO_THROW(build_endpoint_binomial_model({0.0, 0.5, 1.0}));
}

TEST(TwoPointBuilder, ExactTableAtHalf) {
  const ModelTable m = build_two_point_model(0.5);
  ASSERT_EQ(m.num_theta(), 2u);
  ASSERT_EQ(m.num_x(), 3u);
  ASSERT_EQ(m.num_y(), 2u);
  // First parameter: fixed regardless of eps.
  EXPECT_EQ(m.prob(0, 0, 0), 1.0 / 3.0);
  EXPECT_EQ(m.prob(0, 0, 1), 1.0 / 6.0);
  EXPECT_EQ(m.prob(0, 1, 0), 1.0 / 6.0);
  EXPECT_EQ(m.prob(0, 1, 1), 1.0 / 3.0);
  EXPECT_EQ(m.prob(0, 2, 0), 0.0);
  EXPECT_EQ(m.prob(0, 2, 1), 0.0);
  // Second parameter at eps = 0.5: 0.125 on the shared cells, 0.25 on x=2.
  EXPECT_EQ(m.prob(1, 0, 0), 0.125);
  EXPECT_EQ(m.prob(1, 0, 1), 0.125);
  EXPECT_EQ(m.prob(1, 1, 0), 0.125);
  EXPECT_EQ(m.prob(1, 1, 1), 0.125);
  EXPECT_EQ(m.prob(1, 2, 0), 0.25);
  EXPECT_EQ(m.prob(1, 2, 1), 0.25);
}

TEST(TwoPointBuilder, RowsSumToOneForAnyEps) {
  for (double eps : {0.01, 0.1, 0.37, 0.9, 0.99}) {
    const ModelTable m = build_two_point_model(eps);
    EXPECT_TRUE(validate_model(m).valid()) << "eps " << eps;
    for (std::size_t t = 0; t < 2; ++t) {
      const auto row = m.theta_row(t);
      double sum = 0.0;
      for (double v : row) sum += v;
      EXPECT_NEAR(sum, 1.0, 1e-15);
    }
    // The first parameter's row does not depend on eps.
    EXPECT_EQ(m.prob(0, 0, 0), 1.0 / 3.0);
    EXPECT_EQ(m.prob(0, 2, 0), 0.0);
  }
  EXPECT_THROW(build_two_point_model(0.0), std::invalid_argument);
  EXPECT_THROW(build_two_point_model(1.0), std::invalid_argument);
  EXPECT_THROW(build_two_point_model(-0.2), std::invalid_argument);
}

TEST(ValidateModel, FlagsEachViolationKind) {
  // Row that does not sum to one.
  {
    ModelTable bad({{"a"}, {"b", "c"}}, {"t0"}, {0.5, 0.4});
    const auto rep = validate_model(bad);
    ASSERT_FALSE(rep.valid());
    EXPECT_EQ(rep.violations[0].kind, Violation::Kind::RowSumOff);
  }
  // Negative entry.
  {
    ModelTable bad({{"a"}, {"b", "c"}}, {"t0"}, {-0.1, 1.1});
    const auto rep = validate_model(bad);
    bool saw_range = false;
    for (const auto& v : rep.violations) {
      saw_range = saw_range || v.kind == Violation::Kind::EntryOutOfRange;
    }
    EXPECT_TRUE(saw_range);
  }
  // Duplicate parameter label.
  {
    ModelTable bad({{"a"}, {"b", "c"}}, {"t", "t"}, {0.5, 0.5, 0.5, 0.5});
    const auto rep = validate_model(bad);
    bool saw_dup = false;
    for (const auto& v : rep.violations) {
      saw_dup = saw_dup || v.kind == Violation::Kind::DuplicateLabel;
    }
    EXPECT_TRUE(saw_dup);
  }
  // Shape mismatch.
  {
    ModelTable bad({{"a"}, {"b", "c"}}, {"t0"}, {1.0});
    const auto rep = validate_model(bad);
    ASSERT_FALSE(rep.valid());
    EXPECT_EQ(rep.violations[0].kind, Violation::Kind::ShapeMismatch);
  }
  // Unreachable observation: x=1 has zero marginal under every parameter.
  {
    ModelTable bad({{"a", "b"}, {"c", "d"}}, {"t0"}, {0.5, 0.5, 0.0, 0.0});
    const auto rep = validate_model(bad);
    bool saw_unreachable = false;
    for (const auto& v : rep.violations) {
      saw_unreachable = saw_unreachable || v.kind == Violation::Kind::UnreachableOutcome;
    }
    EXPECT_TRUE(saw_unreachable);
  }
}

TEST(ZeroPattern, PlugInOnEndpointModel) {
  const ModelTable m = build_endpoint_binomial_model(testing::grid11());
  const PredictiveTable q = plug_in_predictive(m, testing::mle_estimator11()).table;
  const ZeroPattern zp = zero_pattern(m, q);
  EXPECT_EQ(zp.zero_cells, (std::set<std::pair<std::size_t, std::size_t>>{{0, 1}, {2, 0}}));
  EXPECT_EQ(zp.finite_risk_thetas, (std::set<std::size_t>{0, 10}));
  EXPECT_EQ(zp.covered_xs, (std::set<std::size_t>{0, 2}));
}

TEST(ZeroPattern, PositivePredictiveKeepsEverything) {
  const ModelTable m = build_two_point_model(0.5);
  const ZeroPattern zp = zero_pattern(m, testing::stated_two_point_q());
  EXPECT_TRUE(zp.zero_cells.empty());
  EXPECT_EQ(zp.finite_risk_thetas, (std::set<std::size_t>{0, 1}));
  EXPECT_EQ(zp.covered_xs, (std::set<std::size_t>{0, 1, 2}));
}

TEST(ZeroPattern, IdempotentAndMagnitudeBlind) {
  const ModelTable m = build_two_point_model(0.9);
  PredictiveTable q = testing::stated_two_point_q();
  PredictiveTable q2 = q;
  q2.q[0] = 0.999;  // different magnitudes, identical zero placement
  q2.q[1] = 0.001;
  const ZeroPattern a = zero_pattern(m, q);
  const ZeroPattern b = zero_pattern(m, q2);
  const ZeroPattern c = zero_pattern(m, q);  // idempotent
  EXPECT_EQ(a.zero_cells, b.zero_cells);
  EXPECT_EQ(a.finite_risk_thetas, b.finite_risk_thetas);
  EXPECT_EQ(a.covered_xs, b.covered_xs);
  EXPECT_EQ(a.zero_cells, c.zero_cells);
  EXPECT_EQ(a.finite_risk_thetas, c.finite_risk_thetas);
}

TEST(PriorHelpers, PointMassUniformAndMix) {
  const Prior d0 = point_mass(11, 0);
  const Prior d1 = point_mass(11, 10);
  const Prior m = mix(d0, d1, 0.5);
  EXPECT_EQ(m[0], 0.5);
  EXPECT_EQ(m[10], 0.5);
  for (std::size_t t = 1; t < 10; ++t) EXPECT_EQ(m[t], 0.0);

  const Prior u = uniform_prior(4);
  for (std::size_t t = 0; t < 4; ++t) EXPECT_EQ(u[t], 0.25);

  const Prior id = mix(u, point_mass(4, 0), 0.0);  // lambda = 0 returns the second argument
  EXPECT_EQ(id[0], 1.0);

  // Floor-mixture form (1/n) mu + (1 - 1/n) pi.
  const Prior floor = mix(uniform_prior(2), point_mass(2, 0), 0.25);
  EXPECT_NEAR(floor[0], 0.25 * 0.5 + 0.75 * 1.0, 1e-16);
  EXPECT_NEAR(floor[1], 0.125, 1e-16);

  EXPECT_THROW(point_mass(3, 3), std::invalid_argument);
  EXPECT_THROW(mix(uniform_prior(2), uniform_prior(3), 0.5), std::invalid_argument);
  EXPECT_THROW(mix(uniform_prior(2), uniform_prior(2), 1.5), std::invalid_argument);
}

TEST(MirrorPermutation, GridClosedUnderComplement) {
  const auto perm = mirror_permutation(testing::grid11());
  ASSERT_TRUE(perm.has_value());
  for (std::size_t t = 0; t < 11; ++t) EXPECT_EQ((*perm)[t], 10 - t);
  EXPECT_FALSE(mirror_permutation({0.0, 0.3, 1.0}).has_value());
}

}  // namespace
}  // namespace lip
