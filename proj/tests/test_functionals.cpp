#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "lip/lip.hpp"

namespace lip {
namespace {

const double kHalfLog98 = 0.5 * std::log(9.0 / 8.0);

TEST(KlRisk, StatedQOnTwoPointModel) {
  for (double eps : {0.1, 0.5, 0.9}) {
    const ModelTable m = build_two_point_model(eps);
    const PredictiveTable q = testing::stated_two_point_q();
    const ExtendedReal r1 = kl_risk(m, 0, q);
    const ExtendedReal r2 = kl_risk(m, 1, q);
    ASSERT_TRUE(r1.is_finite());
    EXPECT_EQ(r1.value(), 0.0) << "the stated q matches theta_1's conditionals exactly";
    ASSERT_TRUE(r2.is_finite());
    // Every observation contributes KL((1/2,1/2) || row) = (1/2) log(9/8).
    EXPECT_NEAR(r2.value(), kHalfLog98, 1e-12) << "eps " << eps;
  }
}

TEST(KlRisk, PlugInOnEndpointModel) {
  const ModelTable m = build_endpoint_binomial_model(testing::grid11());
  const PredictiveTable q = plug_in_predictive(m, testing::mle_estimator11()).table;
  const RiskProfile profile = risk_profile(m, q);
  ASSERT_EQ(profile.size(), 11u);
  EXPECT_EQ(profile[0], ExtendedReal(0.0));
  EXPECT_EQ(profile[10], ExtendedReal(0.0));
  for (std::size_t t = 1; t < 10; ++t) {
    EXPECT_FALSE(profile[t].is_finite()) << "theta index " << t;
  }
}

TEST(KlRisk, ZeroWhenQEqualsTrueConditional) {
  std::mt19937_64 rng(7);
  const ModelTable m = testing::random_model(rng, 4, 3, 3);
  for (std::size_t t = 0; t < 4; ++t) {
    const PredictiveTable q = plug_in_predictive(m, {t, t, t}).table;
    const ExtendedReal r = kl_risk(m, t, q);
    ASSERT_TRUE(r.is_finite());
    EXPECT_NEAR(r.value(), 0.0, 1e-14);
  }
}

TEST(BayesRisk, UniformOverTwoPoint) {
  const ModelTable m = build_two_point_model(0.5);
  const ExtendedReal br = bayes_risk(m, uniform_prior(2), testing::stated_two_point_q());
  ASSERT_TRUE(br.is_finite());
  EXPECT_NEAR(br.value(), 0.5 * kHalfLog98, 1e-12);
}

TEST(BayesRisk, ZeroTimesInfinityIsZero) {
  const ModelTable m = build_endpoint_binomial_model(testing::grid11());
  const PredictiveTable q = plug_in_predictive(m, testing::mle_estimator11()).table;
  // Interior parameters have infinite risk but zero prior weight.
  const Prior endpoints = mix(point_mass(11, 0), point_mass(11, 10), 0.5);
  const ExtendedReal br = bayes_risk(m, endpoints, q);
  ASSERT_TRUE(br.is_finite());
  EXPECT_EQ(br.value(), 0.0);
  // Any interior weight makes it infinite.
  const ExtendedReal inf = bayes_risk(m, uniform_prior(11), q);
  EXPECT_FALSE(inf.is_finite());
}

TEST(DqFunctional, EndpointMixturesAreMinimizers) {
  const ModelTable m = build_endpoint_binomial_model(testing::grid11());
  const PredictiveTable q = plug_in_predictive(m, testing::mle_estimator11()).table;
  for (double w : {0.1, 0.25, 0.5, 0.9}) {
    const Prior pi = mix(point_mass(11, 0), point_mass(11, 10), w);
    const ExtendedReal d = d_q(m, pi, q);
    ASSERT_TRUE(d.is_finite());
    EXPECT_NEAR(d.value(), 0.0, 1e-14) << "w " << w;
  }
}

TEST(DqFunctional, PointMassOnThetaOneIsMinimizer) {
  const ModelTable m = build_two_point_model(0.5);
  const ExtendedReal d = d_q(m, point_mass(2, 0), testing::stated_two_point_q());
  ASSERT_TRUE(d.is_finite());
  EXPECT_EQ(d.value(), 0.0);
}

TEST(DqFunctional, InfiniteWhenQMissesMixtureMass) {
  const ModelTable m = build_two_point_model(0.5);
  PredictiveTable q = testing::stated_two_point_q();
  q.q[4] = 0.0;  // q(0; x=2) = 0 while the mixture puts mass there
  q.q[5] = 1.0;
  const ExtendedReal d = d_q(m, uniform_prior(2), q);
  EXPECT_FALSE(d.is_finite());
}

TEST(DqFunctional, ConvexInThePrior) {
  std::mt19937_64 rng(11);
  const ModelTable m = testing::random_model(rng, 5, 3, 4);
  const PredictiveTable q = testing::random_positive_predictive(rng, 3, 4);
  std::uniform_real_distribution<double> lam(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    const Prior a = testing::random_prior(rng, 5);
    const Prior b = testing::random_prior(rng, 5);
    const double l = lam(rng);
    const double da = d_q(m, a, q).value();
    const double db = d_q(m, b, q).value();
    const double dm = d_q(m, mix(a, b, l), q).value();
    EXPECT_LE(dm, l * da + (1.0 - l) * db + 1e-10);
  }
}

TEST(Information, BoundsAndChainRule) {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t T = 2 + rep % 5;
    const ModelTable m = testing::random_model(rng, T, 2 + rep % 3, 2 + rep % 4);
    const Prior pi = testing::random_prior(rng, T);
    const double info = conditional_mutual_information(m, pi);
    EXPECT_GE(info, 0.0);
    EXPECT_LE(info, std::log(static_cast<double>(T)) + 1e-12);
    const MutualInformationParts parts = chain_rule_check(m, pi);
    EXPECT_NEAR(parts.i_cond, parts.i_xy - parts.i_x, 1e-12);
  }
}

TEST(Information, ConcaveInThePrior) {
  std::mt19937_64 rng(17);
  const ModelTable m = testing::random_model(rng, 4, 3, 3);
  std::uniform_real_distribution<double> lam(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    const Prior a = testing::random_prior(rng, 4);
    const Prior b = testing::random_prior(rng, 4);
    const double l = lam(rng);
    const double ia = conditional_mutual_information(m, a);
    const double ib = conditional_mutual_information(m, b);
    const double im = conditional_mutual_information(m, mix(a, b, l));
    EXPECT_GE(im, l * ia + (1.0 - l) * ib - 1e-10);
  }
}

TEST(Information, EqualsBayesRiskOfBayesPredictive) {
  // With positive data marginals, I(pi) is the prior-averaged risk of the
  // Bayes predictive.
  const ModelTable m = build_two_point_model(0.5);
  const Prior pi = uniform_prior(2);
  const double info = conditional_mutual_information(m, pi);
  const ExtendedReal br = bayes_risk(m, pi, bayes_predictive(m, pi));
  ASSERT_TRUE(br.is_finite());
  EXPECT_NEAR(info, br.value(), 1e-12);

  std::mt19937_64 rng(19);
  for (int rep = 0; rep < 10; ++rep) {
    const ModelTable rm = testing::random_model(rng, 3, 2, 3);
    const Prior rp = testing::random_interior_prior(rng, 3);
    EXPECT_NEAR(conditional_mutual_information(rm, rp),
                bayes_risk(rm, rp, bayes_predictive(rm, rp)).value(), 1e-12);
  }
}

TEST(Information, ExactMirrorInvariance) {
  const ModelTable m = build_binomial_model(2, 3, testing::grid11());
  const auto perm = mirror_permutation(testing::grid11());
  ASSERT_TRUE(perm.has_value());
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 10; ++rep) {
    const Prior pi = testing::random_prior(rng, 11);
    const Prior mirrored = mirrored_prior(pi, *perm);
    // Bitwise equality: the builder mirrors the tensor exactly and every
    // reduction is reversal-invariant.
    EXPECT_EQ(conditional_mutual_information(m, pi),
              conditional_mutual_information(m, mirrored));
  }
}

TEST(LipGradient, ComponentsAreBayesPredictiveRisks) {
  std::mt19937_64 rng(29);
  for (int rep = 0; rep < 10; ++rep) {
    const ModelTable m = testing::random_model(rng, 4, 3, 2);
    const Prior pi = testing::random_interior_prior(rng, 4);
    const std::vector<double> grad = lip_gradient(m, pi);
    const PredictiveTable bp = bayes_predictive(m, pi);
    for (std::size_t t = 0; t < 4; ++t) {
      const ExtendedReal r = kl_risk(m, t, bp);
      ASSERT_TRUE(r.is_finite());
      EXPECT_NEAR(grad[t], r.value(), 1e-12);
    }
  }
}

TEST(LipGradient, ThrowsOnDeadMarginalAndSignalsHoles) {
  const ModelTable m = build_two_point_model(0.5);
  // delta_{theta_1} leaves x=2 with zero marginal.
  EXPECT_THROW(lip_gradient(m, point_mass(2, 0)), std::invalid_argument);
  // delta_{theta_2} covers every x but misses no cell of theta_2; theta_1's
  // cells all sit inside theta_2's support, so all components stay finite.
  const std::vector<double> grad = lip_gradient(m, point_mass(2, 1));
  EXPECT_TRUE(std::isfinite(grad[0]));
  EXPECT_TRUE(std::isfinite(grad[1]));
}

TEST(DqGradient, NearZeroComponentAtNearMinimizer) {
  const ModelTable m = build_two_point_model(0.5);
  const Prior pi = mix(uniform_prior(2), point_mass(2, 0), 1e-3);
  const std::vector<double> grad = dq_gradient(m, pi, testing::stated_two_point_q());
  EXPECT_LT(std::abs(grad[0]), 1e-2);
}

TEST(DqGradient, InputValidation) {
  const ModelTable m = build_two_point_model(0.5);
  EXPECT_THROW(dq_gradient(m, point_mass(2, 0), testing::stated_two_point_q()),
               std::invalid_argument);
  PredictiveTable q = testing::stated_two_point_q();
  q.q[0] = 0.0;
  q.q[1] = 1.0;
  EXPECT_THROW(dq_gradient(m, uniform_prior(2), q), std::invalid_argument);
}

}  // namespace
}  // namespace lip
