#pragma once

// Risk domination: given any predictive density q, construct a limit-of-Bayes
// predictive density whose KL risk is nowhere worse.  The construction
// minimizes the convex divergence functional D_q over priors supported on the
// finite-risk parameters, then composes the limit predictive from the
// minimizer with a uniform fill measure over the full grid.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "lip/detail/sums.hpp"
#include "lip/functionals.hpp"
#include "lip/model.hpp"
#include "lip/predictive.hpp"
#include "lip/solver.hpp"

namespace lip {

struct RiskComparisonRow {
  std::string theta_label;
  ExtendedReal risk_q;            // risk of the input predictive
  ExtendedReal risk_dominating;   // risk of the composed predictive
  bool not_worse = false;         // risk_dominating <= risk_q + slack (inf <= inf counts)
};

// Comparison with an additive slack absorbing solver tolerance; slack 0 gives
// the exact ordering.
inline std::vector<RiskComparisonRow> dominance_check(const ModelTable& m,
                                                      const PredictiveTable& q_input,
                                                      const PredictiveTable& q_candidate,
                                                      double slack = 0.0) {
  const RiskProfile base = risk_profile(m, q_input);
  const RiskProfile cand = risk_profile(m, q_candidate);
  std::vector<RiskComparisonRow> rows;
  rows.reserve(m.num_theta());
  for (std::size_t t = 0; t < m.num_theta(); ++t) {
    RiskComparisonRow row;
    row.theta_label = m.theta_labels()[t];
    row.risk_q = base[t];
    row.risk_dominating = cand[t];
    if (!base[t].is_finite()) {
      row.not_worse = true;  // nothing is worse than infinite risk
    } else if (!cand[t].is_finite()) {
      row.not_worse = false;
    } else {
      row.not_worse = cand[t].value() <= base[t].value() + slack;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline bool dominates(const std::vector<RiskComparisonRow>& rows) {
  return std::all_of(rows.begin(), rows.end(),
                     [](const RiskComparisonRow& r) { return r.not_worse; });
}

struct DominationResult {
  PredictiveTable predictive;  // the composed limit predictive
  ZeroPattern pattern;
  SolverResult solve;          // D_q minimization; objective is the achieved D_q
  Prior prior;                 // minimizer embedded over the full grid
  LimitReport limit;
  std::vector<RiskComparisonRow> comparison;
  bool dominance = false;
  bool trivial_case = false;   // no parameter has finite risk under q
  double comparison_slack = 1e-6;
};

namespace detail {

inline ModelTable restrict_model(const ModelTable& m, const std::vector<std::size_t>& keep) {
  std::vector<std::string> labels;
  std::vector<double> probs;
  labels.reserve(keep.size());
  probs.reserve(keep.size() * m.num_cells());
  for (std::size_t t : keep) {
    labels.push_back(m.theta_labels()[t]);
    const auto row = m.theta_row(t);
    probs.insert(probs.end(), row.begin(), row.end());
  }
  return ModelTable(m.space(), std::move(labels), std::move(probs));
}

// linear_t = sum_{x,y} p(x,y|t) log q(x,y); finite by construction when every
// kept parameter has finite risk under q.
inline std::vector<double> dq_linear_terms(const ModelTable& m, const PredictiveTable& q) {
  std::vector<double> c(m.num_theta());
  for (std::size_t t = 0; t < m.num_theta(); ++t) {
    const auto row = m.theta_row(t);
    NeumaierAccumulator acc;
    for (std::size_t cell = 0; cell < row.size(); ++cell) {
      if (row[cell] == 0.0) continue;
      acc.add(row[cell] * std::log(q.q[cell]));
    }
    c[t] = acc.total();
  }
  return c;
}

}  // namespace detail

// Theorem-style construction: restrict to finite-risk parameters, minimize
// D_q there (annealed floors, then an unfloored polish so the minimizer can
// reach the boundary exactly), and compose the limit predictive.
inline DominationResult dominating_predictive(const ModelTable& m, const PredictiveTable& q,
                                              const SolverConfig& cfg = {}) {
  detail::require_predictive(m, q);
  cfg.validate();
  DominationResult res;
  res.pattern = zero_pattern(m, q);
  const Prior mu = uniform_prior(m.num_theta());

  if (res.pattern.finite_risk_thetas.empty()) {
    // Every parameter already has infinite risk under q; any predictive
    // dominates, so return the canonical uniform-prior one.
    res.trivial_case = true;
    res.prior = mu;
    res.limit = limit_predictive(m, res.prior, mu);
    res.predictive = res.limit.final;
    res.solve.prior = res.prior;
    res.solve.objective = std::numeric_limits<double>::infinity();  // D_q of any prior
    res.solve.converged = true;
  } else {
    const std::vector<std::size_t> keep(res.pattern.finite_risk_thetas.begin(),
                                        res.pattern.finite_risk_thetas.end());
    const ModelTable sub = detail::restrict_model(m, keep);
    detail::SimplexEngine engine(sub, detail::dq_linear_terms(sub, q));

    SolverConfig stage = cfg;
    std::vector<double> w = uniform_prior(keep.size()).weights;
    detail::EngineOutcome out;
    std::size_t total_iterations = 0;
    double prev_floor = 0.0;
    std::vector<double> floors = default_anneal_floors();
    floors.push_back(0.0);  // final unfloored polish
    for (double f : floors) {
      if (!out.weights.empty()) {
        const double T = static_cast<double>(keep.size());
        for (std::size_t t = 0; t < keep.size(); ++t) {
          const double sigma = (w[t] - prev_floor / T) / (1.0 - prev_floor);
          w[t] = f / T + (1.0 - f) * sigma;
        }
      }
      stage.floor = f;
      out = engine.run(std::move(w), stage);
      w = out.weights;
      total_iterations += out.iterations;
      prev_floor = f;
    }

    Prior full(std::vector<double>(m.num_theta(), 0.0));
    for (std::size_t idx = 0; idx < keep.size(); ++idx) full.weights[keep[idx]] = w[idx];
    res.prior = full;
    res.solve.prior = Prior{std::move(w)};
    res.solve.objective = [&] {
      const ExtendedReal d = d_q(sub, res.solve.prior, q);
      return d.is_finite() ? d.value() : std::numeric_limits<double>::infinity();
    }();
    res.solve.certificate_gap = out.gap;
    res.solve.iterations = total_iterations;
    res.solve.converged = out.converged;
    res.solve.trace = std::move(out.trace);
    res.limit = limit_predictive(m, res.prior, mu);
    res.predictive = res.limit.final;
  }

  res.comparison = dominance_check(m, q, res.predictive, res.comparison_slack);
  res.dominance = dominates(res.comparison);
  return res;
}

}  // namespace lip
