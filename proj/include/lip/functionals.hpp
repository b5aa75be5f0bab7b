#pragma once

// The risk and information functionals everything else optimizes.
//
// Conventions throughout (applied to exact floating-point zeros only):
//   c * log 0 = -inf for c > 0,   0 * log 0 = 0,   0 * log(c/0) = 0.
// A term with p(x,y|theta) = 0 therefore never contributes, and a positive
// cell facing q = 0 makes the whole risk +inf.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "lip/detail/sums.hpp"
#include "lip/extended_real.hpp"
#include "lip/model.hpp"

namespace lip {

using RiskProfile = std::vector<ExtendedReal>;

namespace detail {

inline void require_prior(const ModelTable& m, const Prior& w) {
  if (w.size() != m.num_theta()) {
    throw std::invalid_argument("prior has " + std::to_string(w.size()) +
                                " weights for " + std::to_string(m.num_theta()) +
                                " parameters");
  }
  for (std::size_t t = 0; t < w.size(); ++t) {
    if (!(w[t] >= 0.0)) {
      throw std::invalid_argument("prior weight at t=" + std::to_string(t) +
                                  " is negative");
    }
  }
}

inline void require_predictive(const ModelTable& m, const PredictiveTable& q) {
  if (q.num_x != m.num_x() || q.num_y != m.num_y()) {
    throw std::invalid_argument("predictive table shape does not match the model");
  }
}

// Mixture joint p_pi(x,y) = sum_t w_t p(x,y|t); reversal-invariant over t so
// mirrored priors on mirrored tensors give bitwise-mirrored mixtures.
inline std::vector<double> mixture_joint(const ModelTable& m, const Prior& w) {
  const std::size_t T = m.num_theta(), cells = m.num_cells();
  std::vector<double> out(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    out[c] = reversal_invariant_sum(
        T, [&](std::size_t t) { return w[t] * m.theta_row(t)[c]; });
  }
  return out;
}

inline std::vector<double> joint_to_x_marginals(const std::vector<double>& joint,
                                                std::size_t k, std::size_t l) {
  std::vector<double> out(k);
  for (std::size_t i = 0; i < k; ++i) {
    out[i] = reversal_invariant_sum(
        l, [&](std::size_t j) { return joint[i * l + j]; });
  }
  return out;
}

// Negative conditional entropy -H(y|x) of a joint table: the building block
// of the information functional.
inline double neg_conditional_entropy(const std::vector<double>& joint,
                                      std::size_t k, std::size_t l) {
  const double joint_part = reversal_invariant_sum(
      k * l, [&](std::size_t c) { return xlogx(joint[c]); });
  const std::vector<double> marg = joint_to_x_marginals(joint, k, l);
  const double marg_part =
      reversal_invariant_sum(k, [&](std::size_t i) { return xlogx(marg[i]); });
  return joint_part - marg_part;
}

inline double neg_conditional_entropy_row(const ModelTable& m, std::size_t t) {
  const auto row = m.theta_row(t);
  const auto marg = m.x_marginals(t);
  const double joint_part = reversal_invariant_sum(
      row.size(), [&](std::size_t c) { return xlogx(row[c]); });
  const double marg_part = reversal_invariant_sum(
      marg.size(), [&](std::size_t i) { return xlogx(marg[i]); });
  return joint_part - marg_part;
}

}  // namespace detail

// Prediction risk R(theta, q): expected log-loss excess of q over the true
// conditional, in nats.
inline ExtendedReal kl_risk(const ModelTable& m, std::size_t t,
                            const PredictiveTable& q) {
  detail::require_predictive(m, q);
  if (t >= m.num_theta()) throw std::invalid_argument("theta index out of range");
  detail::NeumaierAccumulator acc;
  for (std::size_t i = 0; i < m.num_x(); ++i) {
    const double px = m.x_marginal(t, i);
    if (px == 0.0) continue;  // whole block carries no mass
    for (std::size_t j = 0; j < m.num_y(); ++j) {
      const double p = m.prob(t, i, j);
      if (p == 0.0) continue;
      const double qv = q(i, j);
      if (qv == 0.0) return ExtendedReal::infinity();
      acc.add(p * std::log((p / px) / qv));
    }
  }
  return ExtendedReal(std::max(acc.total(), 0.0));
}

inline RiskProfile risk_profile(const ModelTable& m, const PredictiveTable& q) {
  RiskProfile out;
  out.reserve(m.num_theta());
  for (std::size_t t = 0; t < m.num_theta(); ++t) out.push_back(kl_risk(m, t, q));
  return out;
}

// Prior-averaged risk with the 0 * inf = 0 convention.
inline ExtendedReal bayes_risk(const ModelTable& m, const Prior& w,
                               const PredictiveTable& q) {
  detail::require_prior(m, w);
  detail::require_predictive(m, q);
  ExtendedReal acc(0.0);
  for (std::size_t t = 0; t < m.num_theta(); ++t) {
    if (w[t] == 0.0) continue;
    acc += ExtendedReal::weighted(w[t], kl_risk(m, t, q));
  }
  return acc;
}

// D_q(pi): KL divergence from the mixture conditional to q, averaged over the
// mixture data marginal.  Convex and lower semicontinuous in pi.
inline ExtendedReal d_q(const ModelTable& m, const Prior& w,
                        const PredictiveTable& q) {
  detail::require_prior(m, w);
  detail::require_predictive(m, q);
  const std::vector<double> joint = detail::mixture_joint(m, w);
  const std::size_t k = m.num_x(), l = m.num_y();
  const std::vector<double> marg = detail::joint_to_x_marginals(joint, k, l);
  detail::NeumaierAccumulator acc;
  for (std::size_t i = 0; i < k; ++i) {
    if (marg[i] == 0.0) continue;
    for (std::size_t j = 0; j < l; ++j) {
      const double p = joint[i * l + j];
      if (p == 0.0) continue;
      const double qv = q(i, j);
      if (qv == 0.0) return ExtendedReal::infinity();
      acc.add(p * std::log((p / marg[i]) / qv));
    }
  }
  return ExtendedReal(std::max(acc.total(), 0.0));
}

// Conditional mutual information I(theta; y | x) under the joint law
// w_t p(x,y|t).  Bounded, continuous and concave in the prior; equals the
// Bayes risk of the Bayes predictive whenever every p_pi(x) > 0.
inline double conditional_mutual_information(const ModelTable& m, const Prior& w) {
  detail::require_prior(m, w);
  const std::size_t T = m.num_theta(), k = m.num_x(), l = m.num_y();
  const double model_part = detail::reversal_invariant_sum(T, [&](std::size_t t) {
    return w[t] == 0.0 ? 0.0 : w[t] * detail::neg_conditional_entropy_row(m, t);
  });
  const std::vector<double> joint = detail::mixture_joint(m, w);
  const double mixture_part = detail::neg_conditional_entropy(joint, k, l);
  const double value = model_part - mixture_part;
  return value > 0.0 ? value : 0.0;
}

struct MutualInformationParts {
  double i_cond;  // I(theta; y | x)
  double i_xy;    // I(theta; (x, y))
  double i_x;     // I(theta; x)
};

// The chain rule I(theta; y | x) = I(theta; (x,y)) - I(theta; x), with each
// side computed independently so tests can compare groupings.
inline MutualInformationParts chain_rule_check(const ModelTable& m, const Prior& w) {
  detail::require_prior(m, w);
  const std::size_t T = m.num_theta(), k = m.num_x(), l = m.num_y();
  const std::vector<double> joint = detail::mixture_joint(m, w);
  const std::vector<double> marg = detail::joint_to_x_marginals(joint, k, l);

  const double h_joint_model = detail::reversal_invariant_sum(T, [&](std::size_t t) {
    if (w[t] == 0.0) return 0.0;
    const auto row = m.theta_row(t);
    return w[t] * detail::reversal_invariant_sum(
                      row.size(), [&](std::size_t c) { return detail::xlogx(row[c]); });
  });
  const double h_joint_mix = detail::reversal_invariant_sum(
      k * l, [&](std::size_t c) { return detail::xlogx(joint[c]); });
  const double h_x_model = detail::reversal_invariant_sum(T, [&](std::size_t t) {
    if (w[t] == 0.0) return 0.0;
    const auto mx = m.x_marginals(t);
    return w[t] * detail::reversal_invariant_sum(
                      k, [&](std::size_t i) { return detail::xlogx(mx[i]); });
  });
  const double h_x_mix = detail::reversal_invariant_sum(
      k, [&](std::size_t i) { return detail::xlogx(marg[i]); });

  MutualInformationParts parts{};
  parts.i_xy = h_joint_model - h_joint_mix;
  parts.i_x = h_x_model - h_x_mix;
  parts.i_cond = conditional_mutual_information(m, w);
  return parts;
}

// Gradient of the information functional: component t equals the prediction
// risk of the Bayes predictive at theta_t.  Requires every p_pi(x) > 0; a
// component is +inf when theta_t puts mass on a cell the mixture misses.
inline std::vector<double> lip_gradient(const ModelTable& m, const Prior& w) {
  detail::require_prior(m, w);
  const std::size_t T = m.num_theta(), k = m.num_x(), l = m.num_y();
  const std::vector<double> joint = detail::mixture_joint(m, w);
  const std::vector<double> marg = detail::joint_to_x_marginals(joint, k, l);
  for (std::size_t i = 0; i < k; ++i) {
    if (marg[i] == 0.0) {
      throw std::invalid_argument("mixture marginal vanishes at x=" + std::to_string(i));
    }
  }
  std::vector<double> grad(T);
  for (std::size_t t = 0; t < T; ++t) {
    detail::NeumaierAccumulator acc;
    bool infinite = false;
    for (std::size_t i = 0; i < k && !infinite; ++i) {
      const double px = m.x_marginal(t, i);
      if (px == 0.0) continue;
      for (std::size_t j = 0; j < l; ++j) {
        const double p = m.prob(t, i, j);
        if (p == 0.0) continue;
        const double pm = joint[i * l + j];
        if (pm == 0.0) {
          infinite = true;
          break;
        }
        acc.add(p * std::log((p / px) / (pm / marg[i])));
      }
    }
    grad[t] = infinite ? std::numeric_limits<double>::infinity()
                       : std::max(acc.total(), 0.0);
  }
  return grad;
}

// Gradient of D_q: component t = sum_{x,y} p(x,y|t) log(p_pi(y|x) / q(y;x)).
// Requires every p_pi(x) > 0 and q > 0 wherever the mixture has mass; a
// component is -inf when theta_t covers a cell the mixture misses.
inline std::vector<double> dq_gradient(const ModelTable& m, const Prior& w,
                                       const PredictiveTable& q) {
  detail::require_prior(m, w);
  detail::require_predictive(m, q);
  const std::size_t T = m.num_theta(), k = m.num_x(), l = m.num_y();
  const std::vector<double> joint = detail::mixture_joint(m, w);
  const std::vector<double> marg = detail::joint_to_x_marginals(joint, k, l);
  for (std::size_t i = 0; i < k; ++i) {
    if (marg[i] == 0.0) {
      throw std::invalid_argument("mixture marginal vanishes at x=" + std::to_string(i));
    }
  }
  for (std::size_t c = 0; c < k * l; ++c) {
    if (joint[c] > 0.0 && q.q[c] == 0.0) {
      throw std::invalid_argument(
          "q vanishes inside the mixture support at cell " + std::to_string(c));
    }
  }
  std::vector<double> grad(T);
  for (std::size_t t = 0; t < T; ++t) {
    detail::NeumaierAccumulator acc;
    bool neg_infinite = false;
    for (std::size_t i = 0; i < k && !neg_infinite; ++i) {
      if (m.x_marginal(t, i) == 0.0) continue;
      for (std::size_t j = 0; j < l; ++j) {
        const double p = m.prob(t, i, j);
        if (p == 0.0) continue;
        const double pm = joint[i * l + j];
        if (pm == 0.0) {
          neg_infinite = true;  // q(i,j) > 0 here yet the mixture has a hole
          break;
        }
        acc.add(p * std::log((pm / marg[i]) / q(i, j)));
      }
    }
    grad[t] = neg_infinite ? -std::numeric_limits<double>::infinity() : acc.total();
  }
  return grad;
}

}  // namespace lip
