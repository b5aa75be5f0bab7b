#pragma once

// Finite joint models p(x, y | theta) on labelled outcome grids, plus the
// small value types the rest of the library passes around: priors over the
// parameter grid, predictive tables q(y; x), and the zero-pattern sets that
// drive the risk-domination construction.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lip/detail/sums.hpp"

namespace lip {

struct OutcomeSpace {
  std::vector<std::string> x_labels;
  std::vector<std::string> y_labels;

  std::size_t num_x() const { return x_labels.size(); }
  std::size_t num_y() const { return y_labels.size(); }
};

// Immutable probability tensor probs[t][i][j] with cached x-marginals.
// Construction never validates; run validate_model() to get diagnostics.
class ModelTable {
 public:
  ModelTable(OutcomeSpace space, std::vector<std::string> theta_labels,
             std::vector<double> probs)
      : space_(std::move(space)),
        theta_labels_(std::move(theta_labels)),
        probs_(std::move(probs)) {
    const std::size_t k = space_.num_x(), l = space_.num_y();
    if (k > 0 && l > 0 && probs_.size() == theta_labels_.size() * k * l) {
      x_marg_.resize(theta_labels_.size() * k);
      for (std::size_t t = 0; t < theta_labels_.size(); ++t) {
        const double* row = probs_.data() + t * k * l;
        for (std::size_t i = 0; i < k; ++i) {
          x_marg_[t * k + i] = detail::reversal_invariant_sum(
              l, [&](std::size_t j) { return row[i * l + j]; });
        }
      }
    }
  }

  const OutcomeSpace& space() const { return space_; }
  const std::vector<std::string>& theta_labels() const { return theta_labels_; }
  std::size_t num_theta() const { return theta_labels_.size(); }
  std::size_t num_x() const { return space_.num_x(); }
  std::size_t num_y() const { return space_.num_y(); }
  std::size_t num_cells() const { return num_x() * num_y(); }

  double prob(std::size_t t, std::size_t i, std::size_t j) const {
    return probs_[(t * num_x() + i) * num_y() + j];
  }
  // Flattened k*l row for parameter t, x-major.
  std::span<const double> theta_row(std::size_t t) const {
    return {probs_.data() + t * num_cells(), num_cells()};
  }
  double x_marginal(std::size_t t, std::size_t i) const {
    return x_marg_[t * num_x() + i];
  }
  std::span<const double> x_marginals(std::size_t t) const {
    return {x_marg_.data() + t * num_x(), num_x()};
  }
  const std::vector<double>& raw() const { return probs_; }

 private:
  OutcomeSpace space_;
  std::vector<std::string> theta_labels_;
  std::vector<double> probs_;
  std::vector<double> x_marg_;
};

struct Prior {
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  double operator[](std::size_t t) const { return weights[t]; }
};

// Conditional table q[i][j] = q(y_j; x_i); rows sum to one.
struct PredictiveTable {
  std::size_t num_x = 0;
  std::size_t num_y = 0;
  std::vector<double> q;

  double operator()(std::size_t i, std::size_t j) const { return q[i * num_y + j]; }
  std::span<const double> row(std::size_t i) const { return {q.data() + i * num_y, num_y}; }
};

// Zero-pattern classification of a predictive against a model (exact zeros,
// never tolerance-based): the cells where q vanishes, the parameters that put
// no mass on those cells (the only ones with finite risk under q), and the
// data outcomes reachable under such parameters.
struct ZeroPattern {
  std::set<std::pair<std::size_t, std::size_t>> zero_cells;
  std::set<std::size_t> finite_risk_thetas;
  std::set<std::size_t> covered_xs;
};

struct Violation {
  enum class Kind {
    EmptyLabel,
    DuplicateLabel,
    ShapeMismatch,
    EntryOutOfRange,
    RowSumOff,
    UnreachableOutcome,
  };
  Kind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
};

namespace detail {

inline void check_labels(const std::vector<std::string>& labels, const char* what,
                         std::vector<Violation>& out) {
  if (labels.empty()) {
    out.push_back({Violation::Kind::ShapeMismatch,
                   std::string(what) + " labels: need at least one"});
    return;
  }
  std::set<std::string> seen;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].empty()) {
      out.push_back({Violation::Kind::EmptyLabel,
                     std::string(what) + " label at index " + std::to_string(i) +
                         " is empty"});
    }
    if (!seen.insert(labels[i]).second) {
      out.push_back({Violation::Kind::DuplicateLabel,
                     std::string(what) + " label \"" + labels[i] + "\" repeats"});
    }
  }
}

}  // namespace detail

// Diagnostics, not exceptions: every violated invariant with its coordinates.
inline ValidationReport validate_model(const ModelTable& m) {
  ValidationReport rep;
  detail::check_labels(m.space().x_labels, "x", rep.violations);
  detail::check_labels(m.space().y_labels, "y", rep.violations);
  detail::check_labels(m.theta_labels(), "theta", rep.violations);

  const std::size_t T = m.num_theta(), k = m.num_x(), l = m.num_y();
  if (m.raw().size() != T * k * l) {
    rep.violations.push_back(
        {Violation::Kind::ShapeMismatch,
         "probs has " + std::to_string(m.raw().size()) + " entries, expected " +
             std::to_string(T * k * l)});
    return rep;  // cell-level checks would index out of bounds
  }

  for (std::size_t t = 0; t < T; ++t) {
    detail::NeumaierAccumulator row_sum;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < l; ++j) {
        const double v = m.prob(t, i, j);
        if (!(v >= 0.0) || v > 1.0) {
          rep.violations.push_back(
              {Violation::Kind::EntryOutOfRange,
               "probs[t=" + std::to_string(t) + "][x=" + std::to_string(i) +
                   "][y=" + std::to_string(j) + "] = " + std::to_string(v) +
                   " is outside [0,1]"});
        }
        row_sum.add(v);
      }
    }
    if (std::abs(row_sum.total() - 1.0) > 1e-12) {
      rep.violations.push_back({Violation::Kind::RowSumOff,
                                "probs[t=" + std::to_string(t) + "] sums to " +
                                    std::to_string(row_sum.total()) +
                                    ", expected 1 within 1e-12"});
    }
  }

  for (std::size_t i = 0; i < k; ++i) {
    bool reachable = false;
    for (std::size_t t = 0; t < T && !reachable; ++t) {
      reachable = m.x_marginal(t, i) > 0.0;
    }
    if (!reachable) {
      rep.violations.push_back({Violation::Kind::UnreachableOutcome,
                                "x=" + std::to_string(i) +
                                    " has zero marginal under every theta"});
    }
  }
  return rep;
}

namespace detail {

inline std::string format_grid_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// log C(n, m) without std::lgamma (whose glibc implementation touches a
// global and so is awkward in worker threads).
inline double log_choose(int n, int m) {
  m = std::min(m, n - m);
  NeumaierAccumulator acc;
  for (int i = 1; i <= m; ++i) {
    acc.add(std::log(static_cast<double>(n - m + i)) - std::log(static_cast<double>(i)));
  }
  return acc.total();
}

// Binomial(n, theta) pmf, exact at the endpoints, mode-anchored recurrence in
// the interior, explicitly normalized so every row passes the 1e-12 sum check
// even for n in the hundreds.
inline std::vector<double> binomial_pmf(int n, double theta) {
  std::vector<double> p(static_cast<std::size_t>(n) + 1, 0.0);
  if (theta == 0.0) {
    p[0] = 1.0;
    return p;
  }
  if (theta == 1.0) {
    p[static_cast<std::size_t>(n)] = 1.0;
    return p;
  }
  if (n == 0) {
    p[0] = 1.0;
    return p;
  }
  int mode = static_cast<int>((n + 1) * theta);
  mode = std::clamp(mode, 0, n);
  const double log_mode = log_choose(n, mode) + mode * std::log(theta) +
                          (n - mode) * std::log1p(-theta);
  p[static_cast<std::size_t>(mode)] = std::exp(log_mode);
  const double odds = theta / (1.0 - theta);
  for (int j = mode; j < n; ++j) {
    p[j + 1] = p[j] * (static_cast<double>(n - j) / (j + 1.0)) * odds;
  }
  for (int j = mode; j > 0; --j) {
    p[j - 1] = p[j] * (static_cast<double>(j) / (n - j + 1.0)) / odds;
  }
  const double total = compensated_sum(p.size(), [&](std::size_t j) { return p[j]; });
  for (double& v : p) v /= total;
  return p;
}

inline std::vector<std::string> count_labels(int n) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) labels.push_back(std::to_string(i));
  return labels;
}

}  // namespace detail

// Partner map for a grid closed under theta -> 1 - theta (complements matched
// by rounded sum == 1, the relation the {k/10} grid satisfies exactly).
// Returns nullopt unless every grid point has exactly one partner.
inline std::optional<std::vector<std::size_t>> mirror_permutation(
    const std::vector<double>& grid) {
  const std::size_t n = grid.size();
  std::vector<std::size_t> perm(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    std::size_t best = n;
    double best_err = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < n; ++b) {
      if (grid[a] + grid[b] == 1.0) {
        const double err = std::abs((1.0 - grid[a]) - grid[b]);
        if (err < best_err) {
          best_err = err;
          best = b;
        }
      }
    }
    if (best == n) return std::nullopt;
    perm[a] = best;
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (perm[perm[a]] != a) return std::nullopt;
  }
  return perm;
}

// x ~ Binomial(n_past, theta) and y ~ Binomial(m_future, theta), independent
// given theta.  When the grid is closed under complementation the tensor is
// made *exactly* mirror-symmetric by reflecting each row onto its partner.
inline ModelTable build_binomial_model(int n_past, int m_future,
                                       const std::vector<double>& theta_grid) {
  if (n_past < 0) throw std::invalid_argument("n_past must be >= 0");
  if (m_future < 1) throw std::invalid_argument("m_future must be >= 1");
  if (theta_grid.empty()) throw std::invalid_argument("theta grid is empty");
  for (double v : theta_grid) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("theta grid value " +
                                  detail::format_grid_label(v) +
                                  " is outside [0,1]");
    }
  }
  {
    std::set<double> uniq(theta_grid.begin(), theta_grid.end());
    if (uniq.size() != theta_grid.size()) {
      throw std::invalid_argument("theta grid values must be distinct");
    }
  }

  const std::size_t T = theta_grid.size();
  const std::size_t k = static_cast<std::size_t>(n_past) + 1;
  const std::size_t l = static_cast<std::size_t>(m_future) + 1;
  std::vector<double> probs(T * k * l, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    const std::vector<double> px = detail::binomial_pmf(n_past, theta_grid[t]);
    const std::vector<double> py = detail::binomial_pmf(m_future, theta_grid[t]);
    double* row = probs.data() + t * k * l;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < l; ++j) row[i * l + j] = px[i] * py[j];
    }
  }

  if (auto perm = mirror_permutation(theta_grid)) {
    const std::size_t cells = k * l;
    for (std::size_t t = 0; t < T; ++t) {
      const std::size_t tm = (*perm)[t];
      if (tm < t) continue;
      const double* src = probs.data() + t * cells;
      double* dst = probs.data() + tm * cells;
      if (tm == t) {
        for (std::size_t c = 0; c * 2 + 1 < cells; ++c) dst[cells - 1 - c] = src[c];
      } else {
        std::vector<double> mirrored(cells);
        for (std::size_t c = 0; c < cells; ++c) mirrored[cells - 1 - c] = src[c];
        std::copy(mirrored.begin(), mirrored.end(), dst);
      }
    }
  }

  std::vector<std::string> theta_labels;
  theta_labels.reserve(T);
  for (double v : theta_grid) theta_labels.push_back(detail::format_grid_label(v));
  return ModelTable({detail::count_labels(n_past), detail::count_labels(m_future)},
                    std::move(theta_labels), std::move(probs));
}

// The two-trial / one-trial binomial pair anchored at the deterministic
// endpoints: x counts two Bernoulli trials, y one more at the same rate.
// This is the canonical fixture where maximum-likelihood plug-in rows contain
// exact zeros, so the grid must contain both 0 and 1.
inline ModelTable build_endpoint_binomial_model(const std::vector<double>& theta_grid) {
  const bool has0 = std::find(theta_grid.begin(), theta_grid.end(), 0.0) != theta_grid.end();
  const bool has1 = std::find(theta_grid.begin(), theta_grid.end(), 1.0) != theta_grid.end();
  if (!has0 || !has1) {
    throw std::invalid_argument(
        "endpoint binomial model needs both 0 and 1 in the theta grid");
  }
  return build_binomial_model(2, 1, theta_grid);
}

// Two-parameter partial-overlap model on x in {0,1,2}, y in {0,1}.  The first
// parameter never produces x=2; the second spends eps of its mass uniformly on
// the cells the first one covers and splits the rest evenly on x=2.
inline ModelTable build_two_point_model(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("eps must lie strictly between 0 and 1");
  }
  // Layout: [x][y] flattened, x-major.
  std::vector<double> probs = {
      // theta_1
      1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0, 0.0, 0.0,
      // theta_2
      eps / 4.0, eps / 4.0, eps / 4.0, eps / 4.0, (1.0 - eps) / 2.0, (1.0 - eps) / 2.0,
  };
  return ModelTable({{"0", "1", "2"}, {"0", "1"}}, {"theta_1", "theta_2"},
                    std::move(probs));
}

// Exact-zero classification; no tolerances anywhere.
inline ZeroPattern zero_pattern(const ModelTable& m, const PredictiveTable& q) {
  if (q.num_x != m.num_x() || q.num_y != m.num_y()) {
    throw std::invalid_argument("predictive table shape does not match the model");
  }
  ZeroPattern zp;
  for (std::size_t i = 0; i < q.num_x; ++i) {
    for (std::size_t j = 0; j < q.num_y; ++j) {
      if (q(i, j) == 0.0) zp.zero_cells.insert({i, j});
    }
  }
  for (std::size_t t = 0; t < m.num_theta(); ++t) {
    bool clean = true;
    for (const auto& [i, j] : zp.zero_cells) {
      if (m.prob(t, i, j) != 0.0) {
        clean = false;
        break;
      }
    }
    if (clean) zp.finite_risk_thetas.insert(t);
  }
  for (std::size_t i = 0; i < m.num_x(); ++i) {
    for (std::size_t t : zp.finite_risk_thetas) {
      if (m.x_marginal(t, i) > 0.0) {
        zp.covered_xs.insert(i);
        break;
      }
    }
  }
  return zp;
}

inline Prior point_mass(std::size_t num_theta, std::size_t t) {
  if (t >= num_theta) throw std::invalid_argument("point mass index out of range");
  Prior p{std::vector<double>(num_theta, 0.0)};
  p.weights[t] = 1.0;
  return p;
}

inline Prior uniform_prior(std::size_t num_theta) {
  if (num_theta == 0) throw std::invalid_argument("empty parameter grid");
  return Prior{std::vector<double>(num_theta, 1.0 / static_cast<double>(num_theta))};
}

// lambda * a + (1 - lambda) * b, the floor-mixture building block.
inline Prior mix(const Prior& a, const Prior& b, double lambda) {
  if (a.size() != b.size()) throw std::invalid_argument("prior sizes differ");
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("mixture weight must lie in [0,1]");
  }
  Prior out{std::vector<double>(a.size())};
  for (std::size_t t = 0; t < a.size(); ++t) {
    out.weights[t] = lambda * a.weights[t] + (1.0 - lambda) * b.weights[t];
  }
  return out;
}

inline Prior mirrored_prior(const Prior& p, const std::vector<std::size_t>& perm) {
  Prior out{std::vector<double>(p.size())};
  for (std::size_t t = 0; t < p.size(); ++t) out.weights[perm[t]] = p.weights[t];
  return out;
}

}  // namespace lip
