#pragma once

// File formats.  Inputs are parsed with nlohmann::json and validated with
// index-level diagnostics; outputs go through a small hand-rolled writer so
// that key order and number formatting (17 significant digits, round-trip
// exact, "inf" sentinel for infinities) are deterministic byte-for-byte.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "lip/dominator.hpp"
#include "lip/extended_real.hpp"
#include "lip/model.hpp"
#include "lip/predictive.hpp"
#include "lip/solver.hpp"

namespace lip::io {

inline std::string format_double(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Risk values in CSV cells: plain number or the word inf.
inline std::string format_risk(const ExtendedReal& r) {
  if (!r.is_finite()) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", r.value());
  return buf;
}

namespace detail {

inline void append_json_string(std::string& out, std::string_view s) {
  out += '"';
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  out += '"';
}

inline void append_string_array(std::string& out, const std::vector<std::string>& items) {
  out += '[';
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    append_json_string(out, items[i]);
  }
  out += ']';
}

inline void append_number_array(std::string& out, const std::vector<double>& items) {
  out += '[';
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += format_double(items[i]);
  }
  out += ']';
}

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

inline nlohmann::json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open file");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(path, std::string("JSON parse error: ") + e.what());
  }
}

inline std::vector<std::string> string_array(const nlohmann::json& j, const std::string& key,
                                             const std::string& path) {
  if (!j.contains(key) || !j[key].is_array()) fail(path, "missing string array field '" + key + "'");
  std::vector<std::string> out;
  for (const auto& v : j[key]) {
    if (!v.is_string()) fail(path, "field '" + key + "' must contain only strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace detail

// Atomic-ish write: stage to a sibling temp file, then rename over the target.
inline void write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) detail::fail(tmp, "cannot open for writing");
    out << content;
    if (!out) detail::fail(tmp, "write failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) detail::fail(path, "rename failed: " + ec.message());
}

// ---- models ----------------------------------------------------------------

inline std::string model_to_json(const ModelTable& m) {
  std::string out = "{\n  \"x_labels\": ";
  detail::append_string_array(out, m.space().x_labels);
  out += ",\n  \"y_labels\": ";
  detail::append_string_array(out, m.space().y_labels);
  out += ",\n  \"theta_labels\": ";
  detail::append_string_array(out, m.theta_labels());
  out += ",\n  \"probs\": [\n";
  const std::size_t k = m.num_x(), l = m.num_y();
  for (std::size_t t = 0; t < m.num_theta(); ++t) {
    out += "    [";
    for (std::size_t i = 0; i < k; ++i) {
      if (i) out += ',';
      out += '[';
      for (std::size_t j = 0; j < l; ++j) {
        if (j) out += ',';
        out += format_double(m.prob(t, i, j));
      }
      out += ']';
    }
    out += t + 1 < m.num_theta() ? "],\n" : "]\n";
  }
  out += "  ]\n}\n";
  return out;
}

inline ModelTable parse_model(const nlohmann::json& j, const std::string& path) {
  OutcomeSpace space{detail::string_array(j, "x_labels", path),
                     detail::string_array(j, "y_labels", path)};
  std::vector<std::string> theta = detail::string_array(j, "theta_labels", path);
  if (!j.contains("probs") || !j["probs"].is_array()) detail::fail(path, "missing 'probs' tensor");
  const auto& probs = j["probs"];
  if (probs.size() != theta.size()) {
    detail::fail(path, "probs has " + std::to_string(probs.size()) + " parameter slices, expected " +
                           std::to_string(theta.size()));
  }
  const std::size_t k = space.num_x(), l = space.num_y();
  std::vector<double> flat;
  flat.reserve(theta.size() * k * l);
  for (std::size_t t = 0; t < probs.size(); ++t) {
    if (!probs[t].is_array() || probs[t].size() != k) {
      detail::fail(path, "probs[" + std::to_string(t) + "] must have one row per x label (" +
                             std::to_string(k) + ")");
    }
    for (std::size_t i = 0; i < k; ++i) {
      const auto& row = probs[t][i];
      if (!row.is_array() || row.size() != l) {
        detail::fail(path, "probs[" + std::to_string(t) + "][" + std::to_string(i) +
                               "] must have one entry per y label (" + std::to_string(l) + ")");
      }
      for (std::size_t jj = 0; jj < l; ++jj) {
        if (!row[jj].is_number()) {
          detail::fail(path, "probs[" + std::to_string(t) + "][" + std::to_string(i) + "][" +
                                 std::to_string(jj) + "] is not a number");
        }
        flat.push_back(row[jj].get<double>());
      }
    }
  }
  ModelTable m(std::move(space), std::move(theta), std::move(flat));
  const ValidationReport report = validate_model(m);
  if (!report.valid()) {
    std::string msg = "invalid model:";
    for (const auto& v : report.violations) msg += "\n  - " + v.message;
    detail::fail(path, msg);
  }
  return m;
}

inline ModelTable load_model(const std::string& path) {
  return parse_model(detail::parse_file(path), path);
}

inline void save_model(const ModelTable& m, const std::string& path) {
  write_file(path, model_to_json(m));
}

// ---- priors ----------------------------------------------------------------

inline std::string prior_to_json(const std::vector<std::string>& labels, const Prior& p) {
  std::string out = "{\n  \"labels\": ";
  detail::append_string_array(out, labels);
  out += ",\n  \"weights\": ";
  detail::append_number_array(out, p.weights);
  out += "\n}\n";
  return out;
}

inline std::string prior_to_csv(const std::vector<std::string>& labels, const Prior& p) {
  std::string out = "theta_label,weight\n";
  for (std::size_t t = 0; t < labels.size(); ++t) {
    out += labels[t];
    out += ',';
    out += format_double(p[t]);
    out += '\n';
  }
  return out;
}

struct LabeledPrior {
  std::vector<std::string> labels;
  Prior prior;
};

inline LabeledPrior load_prior(const std::string& path) {
  const nlohmann::json j = detail::parse_file(path);
  LabeledPrior lp;
  lp.labels = detail::string_array(j, "labels", path);
  if (!j.contains("weights") || !j["weights"].is_array()) detail::fail(path, "missing 'weights' array");
  for (const auto& v : j["weights"]) {
    if (!v.is_number()) detail::fail(path, "weights must be numbers");
    lp.prior.weights.push_back(v.get<double>());
  }
  if (lp.prior.size() != lp.labels.size()) {
    detail::fail(path, "labels and weights differ in length");
  }
  double sum = 0.0;
  for (std::size_t t = 0; t < lp.prior.size(); ++t) {
    if (!(lp.prior[t] >= 0.0)) detail::fail(path, "negative weight at index " + std::to_string(t));
    sum += lp.prior[t];
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    detail::fail(path, "weights sum to " + format_double(sum) + ", expected 1 within 1e-12");
  }
  return lp;
}

inline void save_prior(const std::vector<std::string>& labels, const Prior& p,
                       const std::string& path) {
  write_file(path, prior_to_json(labels, p));
}

// ---- predictive tables -----------------------------------------------------

inline std::string predictive_to_json(const OutcomeSpace& space, const PredictiveTable& q) {
  std::string out = "{\n  \"x_labels\": ";
  detail::append_string_array(out, space.x_labels);
  out += ",\n  \"y_labels\": ";
  detail::append_string_array(out, space.y_labels);
  out += ",\n  \"q\": [\n";
  for (std::size_t i = 0; i < q.num_x; ++i) {
    out += "    [";
    for (std::size_t j = 0; j < q.num_y; ++j) {
      if (j) out += ',';
      out += format_double(q(i, j));
    }
    out += i + 1 < q.num_x ? "],\n" : "]\n";
  }
  out += "  ]\n}\n";
  return out;
}

struct LabeledPredictive {
  std::vector<std::string> x_labels;
  std::vector<std::string> y_labels;
  PredictiveTable table;
};

inline LabeledPredictive load_predictive(const std::string& path) {
  const nlohmann::json j = detail::parse_file(path);
  LabeledPredictive lp;
  lp.x_labels = detail::string_array(j, "x_labels", path);
  lp.y_labels = detail::string_array(j, "y_labels", path);
  if (!j.contains("q") || !j["q"].is_array() || j["q"].size() != lp.x_labels.size()) {
    detail::fail(path, "'q' must be an array with one row per x label");
  }
  lp.table.num_x = lp.x_labels.size();
  lp.table.num_y = lp.y_labels.size();
  for (std::size_t i = 0; i < lp.table.num_x; ++i) {
    const auto& row = j["q"][i];
    if (!row.is_array() || row.size() != lp.table.num_y) {
      detail::fail(path, "q[" + std::to_string(i) + "] must have one entry per y label");
    }
    double sum = 0.0;
    for (const auto& v : row) {
      if (!v.is_number()) detail::fail(path, "q entries must be numbers");
      const double d = v.get<double>();
      if (!(d >= 0.0) || !(d <= 1.0)) {
        detail::fail(path, "q[" + std::to_string(i) + "] has an entry outside [0, 1]");
      }
      lp.table.q.push_back(d);
      sum += d;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      detail::fail(path, "q[" + std::to_string(i) + "] sums to " + format_double(sum) +
                             ", expected 1 within 1e-12");
    }
  }
  return lp;
}

inline void save_predictive(const OutcomeSpace& space, const PredictiveTable& q,
                            const std::string& path) {
  write_file(path, predictive_to_json(space, q));
}

// ---- risk profiles ----------------------------------------------------------

inline std::string risk_profile_to_csv(const std::vector<std::string>& labels,
                                       const RiskProfile& profile) {
  std::string out = "theta_label,risk\n";
  for (std::size_t t = 0; t < labels.size(); ++t) {
    out += labels[t];
    out += ',';
    out += format_risk(profile[t]);
    out += '\n';
  }
  return out;
}

inline std::string risk_profile_to_json(const std::vector<std::string>& labels,
                                        const RiskProfile& profile) {
  std::string out = "{\n  \"theta_labels\": ";
  detail::append_string_array(out, labels);
  out += ",\n  \"risks\": [";
  for (std::size_t t = 0; t < profile.size(); ++t) {
    if (t) out += ',';
    out += profile[t].is_finite() ? format_double(profile[t].value()) : "\"inf\"";
  }
  out += "]\n}\n";
  return out;
}

// ---- solver results ----------------------------------------------------------

inline std::string solver_result_to_json(const std::vector<std::string>& labels,
                                         const SolverResult& r) {
  std::string out = "{\n  \"theta_labels\": ";
  detail::append_string_array(out, labels);
  out += ",\n  \"prior\": ";
  detail::append_number_array(out, r.prior.weights);
  out += ",\n  \"objective\": " + format_double(r.objective);
  out += ",\n  \"certificate_gap\": " + format_double(r.certificate_gap);
  out += ",\n  \"iterations\": " + std::to_string(r.iterations);
  out += ",\n  \"converged\": ";
  out += r.converged ? "true" : "false";
  if (!r.trace.empty()) {
    out += ",\n  \"trace\": [\n";
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
      out += "    {\"iteration\": " + std::to_string(r.trace[i].iteration) +
             ", \"objective\": " + format_double(r.trace[i].objective) +
             ", \"gap\": " + format_double(r.trace[i].gap) + "}";
      out += i + 1 < r.trace.size() ? ",\n" : "\n";
    }
    out += "  ]";
  }
  out += "\n}\n";
  return out;
}

// ---- domination reports -------------------------------------------------------

inline std::string comparison_to_csv(const std::vector<RiskComparisonRow>& rows) {
  std::string out = "theta_label,risk_q,risk_dominating,relation\n";
  for (const auto& row : rows) {
    out += row.theta_label;
    out += ',';
    out += format_risk(row.risk_q);
    out += ',';
    out += format_risk(row.risk_dominating);
    out += ',';
    out += row.not_worse ? "<=" : ">";
    out += '\n';
  }
  return out;
}

inline std::string limit_report_to_json(const OutcomeSpace& space, const LimitReport& rep) {
  std::string out = "{\n  \"x_labels\": ";
  detail::append_string_array(out, space.x_labels);
  out += ",\n  \"y_labels\": ";
  detail::append_string_array(out, space.y_labels);
  out += ",\n  \"q\": [\n";
  for (std::size_t i = 0; i < rep.final.num_x; ++i) {
    out += "    [";
    for (std::size_t j = 0; j < rep.final.num_y; ++j) {
      if (j) out += ',';
      out += format_double(rep.final(i, j));
    }
    out += i + 1 < rep.final.num_x ? "],\n" : "]\n";
  }
  out += "  ],\n  \"limit_filled\": [";
  for (std::size_t i = 0; i < rep.limit_filled.size(); ++i) {
    if (i) out += ',';
    out += rep.limit_filled[i] ? "true" : "false";
  }
  out += "]";
  if (!rep.deviation_trace.empty()) {
    out += ",\n  \"floors\": ";
    detail::append_number_array(out, rep.floors);
    out += ",\n  \"deviation_trace\": ";
    detail::append_number_array(out, rep.deviation_trace);
    out += ",\n  \"final_deviation\": " + format_double(rep.final_deviation);
    out += ",\n  \"max_successive_change\": " + format_double(rep.max_successive_change);
    out += ",\n  \"converged\": ";
    out += rep.converged ? "true" : "false";
  }
  out += "\n}\n";
  return out;
}

// ---- solver config (JSON form mirrors the CLI flags) --------------------------

inline SolverConfig parse_solver_config(const nlohmann::json& j, const std::string& path) {
  SolverConfig cfg;
  if (j.contains("algorithm")) cfg.algorithm = parse_algorithm(j["algorithm"].get<std::string>());
  if (j.contains("floor")) cfg.floor = j["floor"].get<double>();
  if (j.contains("max_iterations")) cfg.max_iterations = j["max_iterations"].get<std::size_t>();
  if (j.contains("certificate_tolerance")) {
    cfg.certificate_tolerance = j["certificate_tolerance"].get<double>();
  }
  if (j.contains("line_search_tolerance")) {
    cfg.line_search_tolerance = j["line_search_tolerance"].get<double>();
  }
  if (j.contains("step_size")) cfg.step_size = j["step_size"].get<double>();
  if (j.contains("record_trace")) cfg.record_trace = j["record_trace"].get<bool>();
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    detail::fail(path, e.what());
  }
  return cfg;
}

inline SolverConfig load_solver_config(const std::string& path) {
  return parse_solver_config(detail::parse_file(path), path);
}

}  // namespace lip::io
