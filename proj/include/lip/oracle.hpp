#pragma once

// Brute-force verifiers, deliberately independent of the solver: exhaustive
// simplex-lattice search for small parameter counts and finite-difference
// gradients.  Built to validate the optimization code, not to be fast.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "lip/functionals.hpp"
#include "lip/model.hpp"

namespace lip {

struct GridSearchResult {
  Prior best_prior;
  double best_value = 0.0;
  double empirical_lipschitz = 0.0;  // max observed |dvalue| / |dweights|_1 along the walk
  std::size_t evaluations = 0;
};

namespace detail {

template <typename Eval>
GridSearchResult lattice_extremum(std::size_t T, double step, bool maximize, Eval&& eval) {
  if (T == 0) throw std::invalid_argument("empty parameter set");
  if (T > 4) {
    throw std::invalid_argument(
        "lattice search supports at most 4 parameters; use the simplex solver instead");
  }
  if (!(step > 0.0) || !(step <= 1.0)) throw std::invalid_argument("step must lie in (0, 1]");
  const std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(1.0 / step)));

  GridSearchResult res;
  std::vector<std::size_t> counts(T, 0);
  std::vector<double> w(T, 0.0);
  std::vector<double> prev_w;
  double prev_v = 0.0;
  bool have_prev = false;
  res.best_value = maximize ? -std::numeric_limits<double>::infinity()
                            : std::numeric_limits<double>::infinity();

  // Walk every composition of n into T nonnegative parts.
  std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t pos, std::size_t left) {
    if (pos + 1 == T) {
      counts[pos] = left;
      for (std::size_t t = 0; t < T; ++t) {
        w[t] = static_cast<double>(counts[t]) / static_cast<double>(n);
      }
      const double v = eval(w);
      ++res.evaluations;
      if (std::isfinite(v) && have_prev) {
        double l1 = 0.0;
        for (std::size_t t = 0; t < T; ++t) l1 += std::abs(w[t] - prev_w[t]);
        if (l1 > 0.0 && std::isfinite(prev_v)) {
          res.empirical_lipschitz = std::max(res.empirical_lipschitz, std::abs(v - prev_v) / l1);
        }
      }
      if ((maximize && v > res.best_value) || (!maximize && v < res.best_value)) {
        res.best_value = v;
        res.best_prior = Prior{w};
      }
      prev_w = w;
      prev_v = v;
      have_prev = true;
      return;
    }
    for (std::size_t c = 0; c <= left; ++c) {
      counts[pos] = c;
      walk(pos + 1, left - c);
    }
  };
  walk(0, n);
  return res;
}

}  // namespace detail

inline GridSearchResult grid_search_lip(const ModelTable& m, double step = 0.005) {
  return detail::lattice_extremum(m.num_theta(), step, /*maximize=*/true,
                                  [&](const std::vector<double>& w) {
                                    return conditional_mutual_information(m, Prior{w});
                                  });
}

inline GridSearchResult grid_search_dq(const ModelTable& m, const PredictiveTable& q,
                                       double step = 0.005) {
  return detail::lattice_extremum(
      m.num_theta(), step, /*maximize=*/false, [&](const std::vector<double>& w) {
        const ExtendedReal d = d_q(m, Prior{w}, q);
        return d.is_finite() ? d.value() : std::numeric_limits<double>::infinity();
      });
}

// Central differences along the simplex-preserving directions e_t - e_0.
// Matches an analytic gradient only through pairwise differences
// grad_t - grad_0 (simplex gradients are defined up to an additive constant),
// so entry 0 is identically zero.
inline std::vector<double> finite_diff_gradient(
    const std::function<double(const Prior&)>& functional, const Prior& pi, double h = 1e-6) {
  if (!(h >= 1e-8) || !(h <= 1e-4)) {
    throw std::invalid_argument("finite-difference step must lie in [1e-8, 1e-4]");
  }
  const std::size_t T = pi.size();
  for (std::size_t t = 0; t < T; ++t) {
    if (!(pi[t] >= 2.0 * h)) {
      throw std::invalid_argument("prior must be interior: weight at t=" + std::to_string(t) +
                                  " is below 2h");
    }
  }
  std::vector<double> grad(T, 0.0);
  for (std::size_t t = 1; t < T; ++t) {
    Prior up = pi, down = pi;
    up.weights[t] += h;
    up.weights[0] -= h;
    down.weights[t] -= h;
    down.weights[0] += h;
    grad[t] = (functional(up) - functional(down)) / (2.0 * h);
  }
  return grad;
}

}  // namespace lip
