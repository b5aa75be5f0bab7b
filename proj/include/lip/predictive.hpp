#pragma once

// Predictive densities: Bayes, plug-in, and limits of Bayes predictives along
// prior sequences.  A predictive here is a stochastic matrix q(y; x) used to
// forecast y after observing x.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lip/detail/sums.hpp"
#include "lip/functionals.hpp"
#include "lip/model.hpp"

namespace lip {

// q(y; x) = p_pi(x, y) / p_pi(x).  Defined only when every p_pi(x) > 0;
// throws naming the first uncovered x otherwise.
inline PredictiveTable bayes_predictive(const ModelTable& m, const Prior& w) {
  detail::require_prior(m, w);
  const std::size_t k = m.num_x(), l = m.num_y();
  const std::vector<double> joint = detail::mixture_joint(m, w);
  const std::vector<double> marg = detail::joint_to_x_marginals(joint, k, l);
  PredictiveTable out;
  out.num_x = k;
  out.num_y = l;
  out.q.resize(k * l);
  for (std::size_t i = 0; i < k; ++i) {
    if (marg[i] == 0.0) {
      throw std::invalid_argument("Bayes predictive undefined: mixture marginal is 0 at x=" +
                                  std::to_string(i));
    }
    for (std::size_t j = 0; j < l; ++j) out.q[i * l + j] = joint[i * l + j] / marg[i];
  }
  return out;
}

struct PlugInResult {
  PredictiveTable table;
  // Rows where the estimated parameter assigns the observation probability 0,
  // so no conditional exists and the uniform fallback was substituted.
  std::vector<std::uint8_t> fallback_rows;
};

// q(y; x) = p(y | x, theta_hat(x)) for a per-observation estimator
// theta_hat: x -> parameter index.
inline PlugInResult plug_in_predictive(const ModelTable& m,
                                       const std::vector<std::size_t>& estimator,
                                       bool uniform_fallback = false) {
  const std::size_t k = m.num_x(), l = m.num_y();
  if (estimator.size() != k) {
    throw std::invalid_argument("estimator must pick a parameter for each of the " +
                                std::to_string(k) + " observations");
  }
  PlugInResult res;
  res.table.num_x = k;
  res.table.num_y = l;
  res.table.q.resize(k * l);
  res.fallback_rows.assign(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t t = estimator[i];
    if (t >= m.num_theta()) {
      throw std::invalid_argument("estimator at x=" + std::to_string(i) +
                                  " names parameter " + std::to_string(t) +
                                  " outside the model");
    }
    const double px = m.x_marginal(t, i);
    if (px == 0.0) {
      if (!uniform_fallback) {
        throw std::invalid_argument("plug-in conditional undefined at x=" + std::to_string(i) +
                                    ": estimated parameter gives it probability 0");
      }
      res.fallback_rows[i] = 1;
      for (std::size_t j = 0; j < l; ++j) res.table.q[i * l + j] = 1.0 / static_cast<double>(l);
      continue;
    }
    for (std::size_t j = 0; j < l; ++j) res.table.q[i * l + j] = m.prob(t, i, j) / px;
  }
  return res;
}

struct LimitReport {
  PredictiveTable final;
  // Per x: 1 when the row came from the fill measure because the main prior
  // gives that observation probability 0.
  std::vector<std::uint8_t> limit_filled;
  // Filled by verify_limit_by_annealing; empty after the closed-form builder.
  std::vector<double> floors;
  std::vector<double> deviation_trace;     // sup-norm gap to the closed form, per floor
  double final_deviation = 0.0;            // deviation at the smallest floor
  double max_successive_change = 0.0;      // largest entrywise move between floors
  bool converged = true;
};

// Limit of the Bayes predictives of (1-eps) pi + eps mu as eps -> 0.  On
// observations pi covers, the limit is pi's own Bayes row; on observations pi
// misses, the mixture conditional equals mu's conditional for every eps > 0,
// so the limit row is mu's Bayes row.  mu must cover every observation.
inline LimitReport limit_predictive(const ModelTable& m, const Prior& pi, const Prior& mu) {
  detail::require_prior(m, pi);
  detail::require_prior(m, mu);
  const std::size_t k = m.num_x(), l = m.num_y();
  const std::vector<double> joint_pi = detail::mixture_joint(m, pi);
  const std::vector<double> marg_pi = detail::joint_to_x_marginals(joint_pi, k, l);
  const std::vector<double> joint_mu = detail::mixture_joint(m, mu);
  const std::vector<double> marg_mu = detail::joint_to_x_marginals(joint_mu, k, l);

  LimitReport rep;
  rep.final.num_x = k;
  rep.final.num_y = l;
  rep.final.q.resize(k * l);
  rep.limit_filled.assign(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    if (marg_pi[i] > 0.0) {
      for (std::size_t j = 0; j < l; ++j) rep.final.q[i * l + j] = joint_pi[i * l + j] / marg_pi[i];
    } else {
      if (marg_mu[i] == 0.0) {
        throw std::invalid_argument("fill measure leaves x=" + std::to_string(i) +
                                    " uncovered; limit row undefined");
      }
      rep.limit_filled[i] = 1;
      for (std::size_t j = 0; j < l; ++j) rep.final.q[i * l + j] = joint_mu[i * l + j] / marg_mu[i];
    }
  }
  return rep;
}

// Shrinking mixture weights toward the fill measure, for limit verification
// and barrier annealing.
struct AnnealingSchedule {
  std::vector<double> floors;  // strictly decreasing, each in (0, 1]
  double tolerance = 1e-5;

  static AnnealingSchedule standard(int levels = 20) {
    AnnealingSchedule s;
    double f = 1.0;
    for (int i = 0; i < levels; ++i) {
      f *= 0.5;
      s.floors.push_back(f);
    }
    return s;
  }

  void validate() const {
    if (floors.empty()) throw std::invalid_argument("annealing schedule is empty");
    double prev = std::nextafter(1.0, 2.0);
    for (double f : floors) {
      if (!(f > 0.0) || !(f < prev) || f > 1.0) {
        throw std::invalid_argument(
            "annealing floors must be strictly decreasing within (0, 1]");
      }
      prev = f;
    }
    if (!(tolerance > 0.0)) throw std::invalid_argument("annealing tolerance must be positive");
  }
};

// Recomputes the Bayes predictive of floor*mu + (1-floor)*pi along the
// schedule and measures how far it sits from the closed-form limit table.
inline LimitReport verify_limit_by_annealing(const ModelTable& m, const Prior& pi,
                                             const Prior& mu,
                                             const AnnealingSchedule& schedule =
                                                 AnnealingSchedule::standard()) {
  schedule.validate();
  LimitReport rep = limit_predictive(m, pi, mu);
  rep.floors = schedule.floors;
  std::vector<double> prev;
  for (double f : schedule.floors) {
    const Prior blend = mix(mu, pi, f);
    const PredictiveTable q = bayes_predictive(m, blend);
    double dev = 0.0;
    for (std::size_t c = 0; c < q.q.size(); ++c) {
      dev = std::max(dev, std::abs(q.q[c] - rep.final.q[c]));
    }
    rep.deviation_trace.push_back(dev);
    if (!prev.empty()) {
      double change = 0.0;
      for (std::size_t c = 0; c < q.q.size(); ++c) {
        change = std::max(change, std::abs(q.q[c] - prev[c]));
      }
      rep.max_successive_change = std::max(rep.max_successive_change, change);
    }
    prev = q.q;
  }
  rep.final_deviation = rep.deviation_trace.back();
  rep.converged = rep.final_deviation <= schedule.tolerance;
  return rep;
}

}  // namespace lip
