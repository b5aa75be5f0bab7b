#pragma once

// Shared fixtures for the test suite: the canonical small models, the stated
// predictive on the partial-overlap model, and seeded random generators for
// models, priors, and predictive tables.

#include <cstddef>
#include <numeric>
#include <random>
#include <vector>

#include "lip/lip.hpp"

namespace lip::testing {

// The hand-specified predictive on the two-parameter partial-overlap model:
// matches theta_1's conditionals on x in {0,1} and picks (1/3, 2/3) at x=2.
inline PredictiveTable stated_two_point_q() {
  PredictiveTable q;
  q.num_x = 3;
  q.num_y = 2;
  q.q = {2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0};
  return q;
}

// The default 11-point parameter grid {0, 0.1, ..., 1}.
inline std::vector<double> grid11() { return default_theta_grid(); }

// Maximum-likelihood estimator map for the endpoint-constrained model on
// grid11: x=0 -> theta=0, x=1 -> theta=0.5, x=2 -> theta=1.
inline std::vector<std::size_t> mle_estimator11() { return {0, 5, 10}; }

// Strictly positive random model: every cell positive, rows normalized.
inline ModelTable random_model(std::mt19937_64& rng, std::size_t T, std::size_t k,
                               std::size_t l) {
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  std::vector<double> probs(T * k * l);
  for (std::size_t t = 0; t < T; ++t) {
    double sum = 0.0;
    for (std::size_t c = 0; c < k * l; ++c) {
      probs[t * k * l + c] = unif(rng);
      sum += probs[t * k * l + c];
    }
    for (std::size_t c = 0; c < k * l; ++c) probs[t * k * l + c] /= sum;
  }
  std::vector<std::string> tl, xl, yl;
  for (std::size_t t = 0; t < T; ++t) tl.push_back("t" + std::to_string(t));
  for (std::size_t i = 0; i < k; ++i) xl.push_back("x" + std::to_string(i));
  for (std::size_t j = 0; j < l; ++j) yl.push_back("y" + std::to_string(j));
  return ModelTable({std::move(xl), std::move(yl)}, std::move(tl), std::move(probs));
}

// Random full-support prior bounded away from the simplex boundary (every
// weight at least lambda/T), so finite-difference probes stay feasible.
inline Prior random_interior_prior(std::mt19937_64& rng, std::size_t T,
                                   double lambda = 0.2) {
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  std::vector<double> w(T);
  double sum = 0.0;
  for (double& v : w) {
    v = unif(rng);
    sum += v;
  }
  for (double& v : w) v = lambda / static_cast<double>(T) + (1.0 - lambda) * (v / sum);
  return Prior{std::move(w)};
}

// Random prior that may sit on the boundary (some weights exactly zero).
inline Prior random_prior(std::mt19937_64& rng, std::size_t T) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::bernoulli_distribution kill(0.3);
  std::vector<double> w(T, 0.0);
  double sum = 0.0;
  for (double& v : w) {
    if (!kill(rng)) v = unif(rng);
    sum += v;
  }
  if (sum == 0.0) {
    w[0] = 1.0;
    sum = 1.0;
  }
  for (double& v : w) v /= sum;
  return Prior{std::move(w)};
}

// Strictly positive predictive table with normalized rows.
inline PredictiveTable random_positive_predictive(std::mt19937_64& rng, std::size_t k,
                                                  std::size_t l) {
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  PredictiveTable q;
  q.num_x = k;
  q.num_y = l;
  q.q.resize(k * l);
  for (std::size_t i = 0; i < k; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < l; ++j) {
      q.q[i * l + j] = unif(rng);
      sum += q.q[i * l + j];
    }
    for (std::size_t j = 0; j < l; ++j) q.q[i * l + j] /= sum;
  }
  return q;
}

}  // namespace lip::testing
