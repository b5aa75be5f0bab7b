#pragma once

// Simplex solver for both optimization problems in the library:
//   * maximize I(theta; y | x) over priors   (latent information priors)
//   * minimize D_q over priors               (risk-dominating predictives)
// Both are instances of maximizing the concave functional
//   F(w) = <w, linear> - B(p_w),   B(p) = sum_xy p log p - sum_x p_x log p_x,
// where p_w is the prior mixture of the model rows: linear_t = -H(y|x; theta_t)
// gives F = I, and linear_t = sum_xy p(x,y|t) log q(x,y) gives F = -D_q.
//
// The default method is Frank-Wolfe with pairwise steps and exact 1-D line
// search; the per-iteration vertex gap doubles as a duality-gap certificate.
// An exponentiated-gradient update with objective backtracking is available
// as an alternative.  All state is rebuilt from scratch every iteration with
// compensated sums, so exact zeros (drained weights, dead cells) stay exact.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lip/detail/sums.hpp"
#include "lip/functionals.hpp"
#include "lip/model.hpp"
#include "lip/predictive.hpp"

namespace lip {

enum class Algorithm { FrankWolfe, ExpGradient };

inline Algorithm parse_algorithm(const std::string& name) {
  if (name == "fw" || name == "frank-wolfe") return Algorithm::FrankWolfe;
  if (name == "eg" || name == "exp-gradient") return Algorithm::ExpGradient;
  throw std::invalid_argument("unknown algorithm '" + name + "' (expected fw or eg)");
}

inline std::string algorithm_name(Algorithm a) {
  return a == Algorithm::FrankWolfe ? "frank-wolfe" : "exp-gradient";
}

struct SolverConfig {
  Algorithm algorithm = Algorithm::FrankWolfe;
  double floor = 0.0;  // mass reserved for the uniform measure, in [0, 0.5)
  std::size_t max_iterations = 100000;
  double certificate_tolerance = 1e-8;  // nats
  double line_search_tolerance = 1e-12;
  double step_size = 1.0;  // exp-gradient initial step
  bool record_trace = false;

  void validate() const {
    if (!(floor >= 0.0) || !(floor < 0.5)) {
      throw std::invalid_argument("floor must lie in [0, 0.5)");
    }
    if (max_iterations == 0) throw std::invalid_argument("max_iterations must be positive");
    if (!(certificate_tolerance > 0.0)) {
      throw std::invalid_argument("certificate_tolerance must be positive");
    }
    if (!(line_search_tolerance > 0.0)) {
      throw std::invalid_argument("line_search_tolerance must be positive");
    }
    if (!(step_size > 0.0)) throw std::invalid_argument("step_size must be positive");
  }
};

struct TracePoint {
  std::size_t iteration;
  double objective;
  double gap;
};

struct SolverResult {
  Prior prior;
  double objective = 0.0;        // nats
  double certificate_gap = 0.0;  // max_t grad_t - <w, grad>, clamped at 0
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<TracePoint> trace;
};

namespace detail {

struct EngineOutcome {
  std::vector<double> weights;
  double objective = 0.0;  // engine objective <w,c> - B(p_w) at exit
  double gap = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<TracePoint> trace;
};

class SimplexEngine {
 public:
  SimplexEngine(const ModelTable& m, std::vector<double> linear)
      : m_(m),
        c_(std::move(linear)),
        T_(m.num_theta()),
        k_(m.num_x()),
        l_(m.num_y()),
        cells_(m.num_cells()) {
    if (c_.size() != T_) throw std::invalid_argument("one linear coefficient per parameter required");
    for (double v : c_) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument(
            "non-finite objective coefficient; restrict the model to finite-risk parameters first");
      }
    }
    // Per-(t, x) negative conditional entropy contributions; these are the
    // exact one-sided gradient terms on observation blocks the mixture has
    // abandoned (the log p_w singularities cancel against the marginal term).
    block_nce_.resize(T_ * k_);
    for (std::size_t t = 0; t < T_; ++t) {
      const double* row = m_.theta_row(t).data();
      for (std::size_t i = 0; i < k_; ++i) {
        const double joint = reversal_invariant_sum(
            l_, [&](std::size_t j) { return xlogx(row[i * l_ + j]); });
        block_nce_[t * k_ + i] = joint - xlogx(m_.x_marginal(t, i));
      }
    }
  }

  EngineOutcome run(std::vector<double> w, const SolverConfig& cfg) const {
    cfg.validate();
    if (w.size() != T_) throw std::invalid_argument("start prior has the wrong length");
    const double lb = T_ > 0 ? cfg.floor / static_cast<double>(T_) : 0.0;
    for (std::size_t t = 0; t < T_; ++t) {
      if (w[t] < lb - 1e-12) throw std::invalid_argument("start prior violates the floor");
      if (w[t] < lb) w[t] = lb;
    }

    Workspace ws;
    ws.p.resize(cells_);
    ws.px.resize(k_);
    ws.logp.resize(cells_);
    ws.logpx.resize(k_);
    ws.g.resize(T_);
    ws.pd.resize(cells_);
    ws.pxd.resize(k_);
    ws.wB.resize(T_);
    ws.pB.resize(cells_);
    ws.pxB.resize(k_);
    if (cfg.floor > 0.0) {
      const std::vector<double> u(T_, 1.0 / static_cast<double>(T_));
      ws.pmu = mixture_joint(m_, Prior{u});
      ws.pxmu = joint_to_x_marginals(ws.pmu, k_, l_);
      ws.cmu = reversal_invariant_sum(T_, [&](std::size_t t) { return u[t] * c_[t]; });
    }

    EngineOutcome out;
    rebuild(w, ws);
    std::size_t iter = 0;
    for (;;) {
      const bool grad_ok = gradient(w, ws);
      const Gaps gp = gaps(w, ws, cfg, grad_ok);
      if (cfg.record_trace) {
        out.trace.push_back({iter, objective_of(w, ws.p, ws.px), std::max(gp.plain, 0.0)});
      }
      out.gap = gp.plain;
      if (gp.floored <= cfg.certificate_tolerance || iter >= cfg.max_iterations) break;
      const bool moved = cfg.algorithm == Algorithm::ExpGradient
                             ? eg_step(w, ws, cfg, gp)
                             : fw_step(w, ws, cfg, gp, lb);
      if (!moved) break;
      ++iter;
      rebuild(w, ws);
    }
    out.weights = std::move(w);
    out.objective = objective_of(out.weights, ws.p, ws.px);
    out.iterations = iter;
    out.converged = out.gap <= cfg.certificate_tolerance;
    out.gap = std::max(out.gap, 0.0);
    return out;
  }

 private:
  struct Workspace {
    std::vector<double> p, px, logp, logpx, g;
    std::vector<double> pd, pxd;                   // current search direction mixture
    std::vector<std::size_t> nzc, nzx;             // its nonzero cells / marginals
    std::vector<double> wB, pB, pxB;               // candidate full-step state
    std::vector<double> pmu, pxmu;                 // uniform mixture (floored vertices)
    double cmu = 0.0;
  };

  struct Gaps {
    double plain = 0.0;
    double floored = 0.0;
    std::size_t s = 0;  // Frank-Wolfe vertex: argmax gradient
  };

  void mixture_into(const std::vector<double>& w, std::vector<double>& p,
                    std::vector<double>& px) const {
    const double* raw = m_.raw().data();
    for (std::size_t c = 0; c < cells_; ++c) {
      p[c] = reversal_invariant_sum(
          T_, [&](std::size_t t) { return w[t] * raw[t * cells_ + c]; });
    }
    for (std::size_t i = 0; i < k_; ++i) {
      px[i] = reversal_invariant_sum(l_, [&](std::size_t j) { return p[i * l_ + j]; });
    }
  }

  void rebuild(std::vector<double>& w, Workspace& ws) const {
    const double sum =
        reversal_invariant_sum(T_, [&](std::size_t t) { return w[t]; });
    if (std::abs(sum - 1.0) > 1e-13 && sum > 0.0) {
      for (double& v : w) v /= sum;
    }
    mixture_into(w, ws.p, ws.px);
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t c = 0; c < cells_; ++c) ws.logp[c] = ws.p[c] > 0.0 ? std::log(ws.p[c]) : nan;
    for (std::size_t i = 0; i < k_; ++i) ws.logpx[i] = ws.px[i] > 0.0 ? std::log(ws.px[i]) : nan;
  }

  double objective_of(const std::vector<double>& w, const std::vector<double>& p,
                      const std::vector<double>& px) const {
    const double lin = reversal_invariant_sum(T_, [&](std::size_t t) { return w[t] * c_[t]; });
    const double bj = reversal_invariant_sum(cells_, [&](std::size_t c) { return xlogx(p[c]); });
    const double bx = reversal_invariant_sum(k_, [&](std::size_t i) { return xlogx(px[i]); });
    return lin - (bj - bx);
  }

  // g_t = c_t - sum_c p(c|t) log p_w(c) + sum_i p(i|t) log px_w(i), with the
  // one-sided rules on abandoned blocks; returns false when some g_t with
  // w_t > 0 came out non-finite (stale state; caller treats gap as +inf).
  bool gradient(const std::vector<double>& w, Workspace& ws) const {
    bool ok = true;
    const double* raw = m_.raw().data();
    for (std::size_t t = 0; t < T_; ++t) {
      const double* row = raw + t * cells_;
      NeumaierAccumulator acc;
      bool infinite = false;
      for (std::size_t i = 0; i < k_ && !infinite; ++i) {
        if (ws.px[i] == 0.0) {
          acc.add(block_nce_[t * k_ + i]);
          continue;
        }
        for (std::size_t j = 0; j < l_; ++j) {
          const double pv = row[i * l_ + j];
          if (pv == 0.0) continue;
          if (ws.p[i * l_ + j] == 0.0) {
            infinite = true;
            break;
          }
          acc.add(pv * ws.logp[i * l_ + j]);
        }
        if (infinite) break;
        const double mx = m_.x_marginal(t, i);
        if (mx > 0.0) acc.add(-mx * ws.logpx[i]);
      }
      ws.g[t] = infinite ? std::numeric_limits<double>::infinity() : c_[t] - acc.total();
      if (infinite && w[t] > 0.0) ok = false;
    }
    return ok;
  }

  Gaps gaps(const std::vector<double>& w, const Workspace& ws, const SolverConfig& cfg,
            bool grad_ok) const {
    Gaps gp;
    double gmax = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < T_; ++t) {
      if (ws.g[t] > gmax) {
        gmax = ws.g[t];
        gp.s = t;
      }
    }
    if (!grad_ok) {
      gp.plain = gp.floored = std::numeric_limits<double>::infinity();
      return gp;
    }
    NeumaierAccumulator wg;
    for (std::size_t t = 0; t < T_; ++t) {
      if (w[t] > 0.0) wg.add(w[t] * ws.g[t]);
    }
    gp.plain = gmax - wg.total();
    if (cfg.floor == 0.0) {
      gp.floored = gp.plain;
    } else {
      NeumaierAccumulator mean;
      for (std::size_t t = 0; t < T_; ++t) mean.add(ws.g[t] / static_cast<double>(T_));
      gp.floored = cfg.floor * mean.total() + (1.0 - cfg.floor) * gmax - wg.total();
    }
    return gp;
  }

  // d/dgamma F(w + gamma d) for the staged direction, evaluated strictly
  // inside (0, gamma_max); probability arguments are clamped away from 0 so a
  // cell dying exactly at the right end shows up as a huge negative slope.
  double phi_prime(double gamma, double dc, const Workspace& ws) const {
    constexpr double tiny = std::numeric_limits<double>::denorm_min();
    NeumaierAccumulator acc;
    acc.add(dc);
    for (std::size_t c : ws.nzc) {
      const double v = std::max(ws.p[c] + gamma * ws.pd[c], tiny);
      acc.add(-ws.pd[c] * std::log(v));
    }
    for (std::size_t i : ws.nzx) {
      const double u = std::max(ws.px[i] + gamma * ws.pxd[i], tiny);
      acc.add(ws.pxd[i] * std::log(u));
    }
    return acc.total();
  }

  double phi_second(double gamma, const Workspace& ws) const {
    constexpr double tiny = std::numeric_limits<double>::denorm_min();
    double s2 = 0.0;
    for (std::size_t c : ws.nzc) {
      const double v = std::max(ws.p[c] + gamma * ws.pd[c], tiny);
      s2 -= ws.pd[c] * ws.pd[c] / v;
    }
    for (std::size_t i : ws.nzx) {
      const double u = std::max(ws.px[i] + gamma * ws.pxd[i], tiny);
      s2 += ws.pxd[i] * ws.pxd[i] / u;
    }
    return s2;
  }

  // Exact one-sided slope at the full step, evaluated on the freshly rebuilt
  // candidate state so exact zeros are honored.  For an observation block
  // whose marginal dies at the endpoint, the log singularities of its cells
  // and its marginal cancel, leaving -sum p_d log|p_d| + px_d log|px_d|; a
  // cell dying inside a surviving block leaves an uncancelled -inf.
  double phi_prime_at_max(double dc, Workspace& ws) const {
    mixture_into(ws.wB, ws.pB, ws.pxB);
    NeumaierAccumulator acc;
    acc.add(dc);
    for (std::size_t c : ws.nzc) {
      if (ws.pB[c] > 0.0) {
        acc.add(-ws.pd[c] * std::log(ws.pB[c]));
      } else {
        if (ws.pxB[c / l_] > 0.0) return -std::numeric_limits<double>::infinity();
        acc.add(-ws.pd[c] * std::log(std::abs(ws.pd[c])));
      }
    }
    for (std::size_t i : ws.nzx) {
      if (ws.pxB[i] > 0.0) {
        acc.add(ws.pxd[i] * std::log(ws.pxB[i]));
      } else {
        acc.add(ws.pxd[i] * std::log(std::abs(ws.pxd[i])));
      }
    }
    return acc.total();
  }

  double interior_search(double gamma_max, double dc, const SolverConfig& cfg,
                         const Workspace& ws) const {
    double lo = 0.0, hi = gamma_max;
    double gamma = 0.5 * gamma_max;
    for (int it = 0; it < 200; ++it) {
      const double d1 = phi_prime(gamma, dc, ws);
      if (d1 > 0.0) {
        lo = gamma;
      } else {
        hi = gamma;
      }
      if (hi - lo <= cfg.line_search_tolerance) break;
      const double d2 = phi_second(gamma, ws);
      double next = d2 < 0.0 && std::isfinite(d1) ? gamma - d1 / d2 : 0.5 * (lo + hi);
      if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
      gamma = next;
    }
    return lo;  // the slope is positive on [0, lo], so the move cannot descend
  }

  void load_pair_direction(std::size_t s, std::size_t a, Workspace& ws) const {
    const double* raw = m_.raw().data();
    const double* rs = raw + s * cells_;
    const double* ra = raw + a * cells_;
    ws.nzc.clear();
    ws.nzx.clear();
    for (std::size_t c = 0; c < cells_; ++c) {
      ws.pd[c] = rs[c] - ra[c];
      if (ws.pd[c] != 0.0) ws.nzc.push_back(c);
    }
    for (std::size_t i = 0; i < k_; ++i) {
      ws.pxd[i] = m_.x_marginal(s, i) - m_.x_marginal(a, i);
      if (ws.pxd[i] != 0.0) ws.nzx.push_back(i);
    }
  }

  void load_vertex_direction(std::size_t s, double floor, Workspace& ws) const {
    const double* raw = m_.raw().data();
    const double* rs = raw + s * cells_;
    ws.nzc.clear();
    ws.nzx.clear();
    for (std::size_t c = 0; c < cells_; ++c) {
      const double vtx = floor > 0.0 ? floor * ws.pmu[c] + (1.0 - floor) * rs[c] : rs[c];
      ws.pd[c] = vtx - ws.p[c];
      if (ws.pd[c] != 0.0) ws.nzc.push_back(c);
    }
    for (std::size_t i = 0; i < k_; ++i) {
      double vtx = 0.0;
      if (floor > 0.0) vtx = floor * ws.pxmu[i] + (1.0 - floor) * m_.x_marginal(s, i);
      else vtx = m_.x_marginal(s, i);
      ws.pxd[i] = vtx - ws.px[i];
      if (ws.pxd[i] != 0.0) ws.nzx.push_back(i);
    }
  }

  bool apply_direction(std::vector<double>& w, Workspace& ws, const SolverConfig& cfg,
                       double gamma_max, double dc, bool pair, std::size_t s, std::size_t a,
                       double lb) const {
    const double dmax = phi_prime_at_max(dc, ws);  // also fills ws.pB/pxB from ws.wB
    if (dmax >= 0.0) {
      w = ws.wB;  // optimum sits on the boundary of this segment: take it exactly
      return true;
    }
    const double gamma = interior_search(gamma_max, dc, cfg, ws);
    if (!(gamma > 0.0)) return false;
    if (pair) {
      w[s] += gamma;
      w[a] -= gamma;
      if (w[a] < lb) w[a] = lb;
    } else {
      for (std::size_t t = 0; t < T_; ++t) {
        const double vtx = (t == s) ? lb + (1.0 - cfg.floor) : lb;
        w[t] += gamma * (vtx - w[t]);
      }
    }
    return true;
  }

  bool fw_step(std::vector<double>& w, Workspace& ws, const SolverConfig& cfg, const Gaps& gp,
               double lb) const {
    const std::size_t s = gp.s;
    // Pairwise move: push mass from the worst still-drainable parameter to s.
    std::size_t a = T_;
    double ga = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < T_; ++t) {
      if (t != s && w[t] > lb && ws.g[t] < ga) {
        ga = ws.g[t];
        a = t;
      }
    }
    if (a < T_ && ws.g[s] > ga) {
      const double gamma_max = w[a] - lb;
      if (gamma_max > 0.0) {
        load_pair_direction(s, a, ws);
        ws.wB = w;
        ws.wB[s] = w[s] + gamma_max;
        ws.wB[a] = lb;
        if (apply_direction(w, ws, cfg, gamma_max, c_[s] - c_[a], true, s, a, lb)) return true;
      }
    }
    // Fallback: classical step toward the (floored) vertex at s.
    load_vertex_direction(s, cfg.floor, ws);
    const double wc = reversal_invariant_sum(T_, [&](std::size_t t) { return w[t] * c_[t]; });
    const double dc =
        (cfg.floor > 0.0 ? cfg.floor * ws.cmu + (1.0 - cfg.floor) * c_[s] : c_[s]) - wc;
    for (std::size_t t = 0; t < T_; ++t) ws.wB[t] = lb;
    ws.wB[s] = lb + (1.0 - cfg.floor);
    return apply_direction(w, ws, cfg, 1.0, dc, false, s, 0, lb);
  }

  bool eg_step(std::vector<double>& w, Workspace& ws, const SolverConfig& cfg,
               const Gaps& gp) const {
    const double lb = cfg.floor / static_cast<double>(T_);
    for (std::size_t t = 0; t < T_; ++t) {
      if (!std::isfinite(ws.g[t])) return fw_step(w, ws, cfg, gp, lb);  // boundary rescue
    }
    const double f0 = objective_of(w, ws.p, ws.px);
    const double gmax = ws.g[gp.s];
    double eta = cfg.step_size;
    std::vector<double>& trial = ws.wB;
    for (int tries = 0; tries < 60; ++tries) {
      double mass = 0.0;
      for (std::size_t t = 0; t < T_; ++t) {
        trial[t] = (w[t] - lb) * std::exp(eta * (ws.g[t] - gmax));
        mass += trial[t];
      }
      if (mass > 0.0) {
        const double scale = (1.0 - cfg.floor) / mass;
        for (std::size_t t = 0; t < T_; ++t) trial[t] = lb + trial[t] * scale;
        mixture_into(trial, ws.pB, ws.pxB);
        if (objective_of(trial, ws.pB, ws.pxB) >= f0 - 1e-15) {
          w = trial;
          return true;
        }
      }
      eta *= 0.5;
    }
    return false;
  }

  const ModelTable& m_;
  std::vector<double> c_;
  std::size_t T_, k_, l_, cells_;
  std::vector<double> block_nce_;
};

inline std::vector<double> information_linear_terms(const ModelTable& m) {
  std::vector<double> c(m.num_theta());
  for (std::size_t t = 0; t < m.num_theta(); ++t) c[t] = neg_conditional_entropy_row(m, t);
  return c;
}

}  // namespace detail

// Maximize I(theta; y | x) over the floored simplex.  Starts from the uniform
// prior unless a warm start is supplied.
inline SolverResult solve_lip(const ModelTable& m, const SolverConfig& cfg = {},
                              const Prior* warm_start = nullptr) {
  cfg.validate();
  detail::SimplexEngine engine(m, detail::information_linear_terms(m));
  std::vector<double> start =
      warm_start ? warm_start->weights : uniform_prior(m.num_theta()).weights;
  detail::EngineOutcome out = engine.run(std::move(start), cfg);
  SolverResult res;
  res.prior = Prior{std::move(out.weights)};
  res.objective = conditional_mutual_information(m, res.prior);
  res.certificate_gap = out.gap;
  res.iterations = out.iterations;
  res.converged = out.converged;
  res.trace = std::move(out.trace);
  return res;
}

inline std::vector<double> default_anneal_floors() {
  std::vector<double> floors;
  double f = 0.5;
  for (int k = 2; k <= 20; ++k) {
    f *= 0.5;
    floors.push_back(f);  // 2^-2 .. 2^-20; the config caps floors below 0.5
  }
  return floors;
}

// Solve a shrinking-floor sequence, warm-starting each stage from the
// previous optimum re-projected into the tighter class.
inline std::vector<SolverResult> anneal_lip(const ModelTable& m,
                                            const std::vector<double>& floors,
                                            SolverConfig cfg = {}) {
  if (floors.empty()) throw std::invalid_argument("anneal_lip needs at least one floor");
  double prev = 0.5;
  for (double f : floors) {
    if (!(f > 0.0) || !(f < prev)) {
      throw std::invalid_argument("floors must be strictly decreasing within (0, 0.5)");
    }
    prev = f;
  }
  const std::size_t T = m.num_theta();
  std::vector<SolverResult> results;
  results.reserve(floors.size());
  Prior start = uniform_prior(T);
  double prev_floor = 0.0;
  for (double f : floors) {
    // Map the previous iterate's free part into the new floor class.
    Prior projected = start;
    if (!results.empty()) {
      const double lb_old = prev_floor / static_cast<double>(T);
      const double lb_new = f / static_cast<double>(T);
      for (std::size_t t = 0; t < T; ++t) {
        const double sigma = (start[t] - lb_old) / (1.0 - prev_floor);
        projected.weights[t] = lb_new + (1.0 - f) * sigma;
      }
    }
    cfg.floor = f;
    results.push_back(solve_lip(m, cfg, &projected));
    start = results.back().prior;
    prev_floor = f;
  }
  return results;
}

struct Certificate {
  double gap = 0.0;
  double sup_risk = 0.0;  // +inf encoded as infinity()
  double bayes_risk_value = 0.0;
};

// Minimax sandwich at a full-support prior: I(pi) <= minimax value <=
// sup_t R(theta_t, bayes_predictive(pi)); gap 0 certifies minimaxity.
inline Certificate certificate(const ModelTable& m, const Prior& pi) {
  const PredictiveTable q = bayes_predictive(m, pi);  // throws on a dead marginal
  const RiskProfile risks = risk_profile(m, q);
  double sup = 0.0;
  for (const ExtendedReal& r : risks) {
    sup = std::max(sup, r.is_finite() ? r.value() : std::numeric_limits<double>::infinity());
  }
  Certificate cert;
  cert.bayes_risk_value = conditional_mutual_information(m, pi);
  cert.sup_risk = sup;
  cert.gap = sup - cert.bayes_risk_value;
  return cert;
}

struct MinimaxReport {
  PredictiveTable predictive;
  SolverResult solve;
  LimitReport limit;
  Certificate cert;
  bool annealed = false;
};

inline bool has_full_data_marginals(const ModelTable& m, const Prior& pi) {
  const std::vector<double> joint = detail::mixture_joint(m, pi);
  const std::vector<double> marg = detail::joint_to_x_marginals(joint, m.num_x(), m.num_y());
  for (double v : marg) {
    if (v == 0.0) return false;
  }
  return true;
}

// End-to-end minimax construction: optimize the prior, fall back to the
// annealed path when the unfloored optimum abandons observations, and emit
// the (possibly limit-filled) predictive with its certificate.
inline MinimaxReport minimax_predictive(const ModelTable& m, const SolverConfig& cfg = {}) {
  MinimaxReport rep;
  rep.solve = solve_lip(m, cfg);
  if (!has_full_data_marginals(m, rep.solve.prior)) {
    SolverConfig annealed_cfg = cfg;
    std::vector<SolverResult> stages = anneal_lip(m, default_anneal_floors(), annealed_cfg);
    rep.solve = std::move(stages.back());
    rep.annealed = true;
  }
  const Prior mu = uniform_prior(m.num_theta());
  rep.limit = limit_predictive(m, rep.solve.prior, mu);
  rep.predictive = rep.limit.final;
  rep.cert = certificate(m, rep.solve.prior);
  return rep;
}

}  // namespace lip
