// Command-line surface: model validation, prior optimization, risk reports,
// risk domination, and the (N, M) sweep that regenerates the prior panels.

#include <cstddef>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lip/lip.hpp"

namespace {

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> grid;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const std::size_t comma = std::min(spec.find(',', pos), spec.size());
    const std::string item = spec.substr(pos, comma - pos);
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      grid.push_back(v);
    } catch (const std::exception&) {
      throw std::runtime_error("bad grid entry '" + item + "' in --grid");
    }
    pos = comma + 1;
    if (comma == spec.size()) break;
  }
  return grid;
}

std::pair<int, int> parse_pair(const std::string& spec, const std::string& flag) {
  const std::size_t comma = spec.find(',');
  if (comma == std::string::npos) {
    throw std::runtime_error(flag + " expects N,M (got '" + spec + "')");
  }
  try {
    return {std::stoi(spec.substr(0, comma)), std::stoi(spec.substr(comma + 1))};
  } catch (const std::exception&) {
    throw std::runtime_error(flag + " expects integer N,M (got '" + spec + "')");
  }
}

struct SolverFlags {
  std::string algorithm = "fw";
  double floor = 0.0;
  bool anneal = false;
  double tol = 1e-8;
  std::size_t max_iters = 100000;
  double ls_tol = 1e-12;
  double step_size = 1.0;
  bool trace = false;
  std::string config_path;
};

void attach_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--algorithm", f.algorithm, "optimizer: fw (Frank-Wolfe) or eg (exp-gradient)")
      ->check(CLI::IsMember({"fw", "eg", "frank-wolfe", "exp-gradient"}));
  auto* floor_opt =
      cmd->add_option("--floor", f.floor, "uniform mass reserved at every parameter, in [0, 0.5)");
  cmd->add_flag("--anneal", f.anneal, "shrinking-floor schedule instead of a fixed floor")
      ->excludes(floor_opt);
  cmd->add_option("--tol", f.tol, "certificate tolerance in nats (default 1e-8)");
  cmd->add_option("--max-iters", f.max_iters, "iteration cap (default 100000)");
  cmd->add_option("--line-search-tol", f.ls_tol, "1-D line search tolerance (default 1e-12)");
  cmd->add_option("--step-size", f.step_size, "exp-gradient initial step (default 1)");
  cmd->add_flag("--trace", f.trace, "record the per-iteration objective/gap trace");
  cmd->add_option("--config", f.config_path, "solver config JSON; explicit flags override it");
}

lip::SolverConfig make_config(const CLI::App* cmd, const SolverFlags& f) {
  lip::SolverConfig cfg;
  if (!f.config_path.empty()) cfg = lip::io::load_solver_config(f.config_path);
  if (cmd->count("--algorithm")) cfg.algorithm = lip::parse_algorithm(f.algorithm);
  if (cmd->count("--floor")) cfg.floor = f.floor;
  if (cmd->count("--tol")) cfg.certificate_tolerance = f.tol;
  if (cmd->count("--max-iters")) cfg.max_iterations = f.max_iters;
  if (cmd->count("--line-search-tol")) cfg.line_search_tolerance = f.ls_tol;
  if (cmd->count("--step-size")) cfg.step_size = f.step_size;
  if (cmd->count("--trace")) cfg.record_trace = f.trace;
  cfg.validate();
  return cfg;
}

lip::ModelTable resolve_model(const std::string& model_path, const std::string& binomial_spec,
                              const std::string& grid_spec) {
  if (!model_path.empty() && !binomial_spec.empty()) {
    throw std::runtime_error("give either --model or --binomial, not both");
  }
  if (!model_path.empty()) {
    if (!grid_spec.empty()) throw std::runtime_error("--grid applies only to --binomial");
    return lip::io::load_model(model_path);
  }
  if (binomial_spec.empty()) throw std::runtime_error("one of --model or --binomial is required");
  const auto [n, m] = parse_pair(binomial_spec, "--binomial");
  const std::vector<double> grid =
      grid_spec.empty() ? lip::default_theta_grid() : parse_grid(grid_spec);
  return lip::build_binomial_model(n, m, grid);
}

void require_same_labels(const std::vector<std::string>& got, const std::vector<std::string>& want,
                         const std::string& what) {
  if (got != want) throw std::runtime_error(what + " labels do not match the model");
}

int run_validate(const std::string& model_path) {
  lip::io::load_model(model_path);  // throws with a violation list when invalid
  std::cout << model_path << ": valid\n";
  return 0;
}

int run_solve(const CLI::App* cmd, const std::string& model_path, const std::string& binomial_spec,
              const std::string& grid_spec, const SolverFlags& sf, const std::string& out_path,
              const std::string& format) {
  const lip::ModelTable m = resolve_model(model_path, binomial_spec, grid_spec);
  const lip::SolverConfig cfg = make_config(cmd, sf);
  lip::SolverResult result;
  if (sf.anneal) {
    result = lip::anneal_lip(m, lip::default_anneal_floors(), cfg).back();
  } else {
    result = lip::solve_lip(m, cfg);
  }
  const std::string content = format == "csv"
                                  ? lip::io::prior_to_csv(m.theta_labels(), result.prior)
                                  : lip::io::solver_result_to_json(m.theta_labels(), result);
  lip::io::write_file(out_path, content);
  std::cout << "objective " << lip::io::format_double(result.objective) << " nats, gap "
            << lip::io::format_double(result.certificate_gap) << ", iterations "
            << result.iterations << ", converged " << (result.converged ? "true" : "false")
            << ", support " << lip::support_size(result.prior) << "\n";
  return result.converged ? 0 : 2;
}

int run_risk(const std::string& model_path, const std::string& predictive_path,
             const std::string& prior_path, const std::string& out_path,
             const std::string& format) {
  const lip::ModelTable m = lip::io::load_model(model_path);
  lip::PredictiveTable q;
  if (!predictive_path.empty()) {
    const lip::io::LabeledPredictive lq = lip::io::load_predictive(predictive_path);
    require_same_labels(lq.x_labels, m.space().x_labels, "predictive x");
    require_same_labels(lq.y_labels, m.space().y_labels, "predictive y");
    q = lq.table;
  } else {
    const lip::io::LabeledPrior lp = lip::io::load_prior(prior_path);
    require_same_labels(lp.labels, m.theta_labels(), "prior");
    // Zero data marginals are fine here: the limit composition fills those
    // rows from the uniform measure.
    q = lip::limit_predictive(m, lp.prior, lip::uniform_prior(m.num_theta())).final;
  }
  const lip::RiskProfile profile = lip::risk_profile(m, q);
  const std::string content = format == "json"
                                  ? lip::io::risk_profile_to_json(m.theta_labels(), profile)
                                  : lip::io::risk_profile_to_csv(m.theta_labels(), profile);
  lip::io::write_file(out_path, content);
  return 0;
}

int run_dominate(const CLI::App* cmd, const std::string& model_path,
                 const std::string& predictive_path, const SolverFlags& sf,
                 const std::string& out_dir) {
  const lip::ModelTable m = lip::io::load_model(model_path);
  const lip::io::LabeledPredictive lq = lip::io::load_predictive(predictive_path);
  require_same_labels(lq.x_labels, m.space().x_labels, "predictive x");
  require_same_labels(lq.y_labels, m.space().y_labels, "predictive y");
  const lip::SolverConfig cfg = make_config(cmd, sf);
  const lip::DominationResult res = lip::dominating_predictive(m, lq.table, cfg);

  std::filesystem::create_directories(out_dir);
  const auto path = [&](const char* name) { return (std::filesystem::path(out_dir) / name).string(); };
  lip::io::write_file(path("predictive.json"), lip::io::predictive_to_json(m.space(), res.predictive));
  lip::io::write_file(path("risk_comparison.csv"), lip::io::comparison_to_csv(res.comparison));
  std::vector<std::string> kept_labels;
  for (std::size_t t : res.pattern.finite_risk_thetas) kept_labels.push_back(m.theta_labels()[t]);
  lip::io::write_file(path("solver_result.json"),
                      lip::io::solver_result_to_json(
                          res.trivial_case ? m.theta_labels() : kept_labels, res.solve));
  std::string summary = "{\n  \"dominates\": ";
  summary += res.dominance ? "true" : "false";
  summary += ",\n  \"trivial_case\": ";
  summary += res.trivial_case ? "true" : "false";
  summary += ",\n  \"achieved_dq\": " + lip::io::format_double(res.solve.objective);
  summary += ",\n  \"certificate_gap\": " + lip::io::format_double(res.solve.certificate_gap);
  summary += ",\n  \"converged\": ";
  summary += res.solve.converged ? "true" : "false";
  summary += ",\n  \"finite_risk_parameters\": ";
  lip::io::detail::append_string_array(summary, kept_labels);
  summary += "\n}\n";
  lip::io::write_file(path("summary.json"), summary);

  std::cout << (res.dominance ? "dominates" : "does NOT dominate") << "; achieved divergence "
            << lip::io::format_double(res.solve.objective) << ", gap "
            << lip::io::format_double(res.solve.certificate_gap) << "\n";
  return res.solve.converged ? 0 : 2;
}

int run_sweep_cmd(const CLI::App* cmd, const std::string& pairs_spec, bool default_figure1,
                  const std::string& grid_spec, const SolverFlags& sf,
                  const std::string& out_dir) {
  std::vector<lip::SweepPair> pairs;
  if (!pairs_spec.empty()) {
    std::size_t pos = 0;
    while (pos < pairs_spec.size()) {
      const std::size_t semi = std::min(pairs_spec.find(';', pos), pairs_spec.size());
      const auto [n, m] = parse_pair(pairs_spec.substr(pos, semi - pos), "--pairs");
      pairs.push_back({n, m});
      pos = semi + 1;
    }
  } else {
    pairs = lip::default_sweep_pairs();
    (void)default_figure1;  // the default set IS the figure-1 set
  }
  const std::vector<double> grid =
      grid_spec.empty() ? lip::default_theta_grid() : parse_grid(grid_spec);
  const lip::SolverConfig cfg = make_config(cmd, sf);

  const std::vector<lip::SweepRecord> records = lip::run_sweep(pairs, grid, cfg);

  std::filesystem::create_directories(out_dir);
  const auto path = [&](const std::string& name) {
    return (std::filesystem::path(out_dir) / name).string();
  };
  lip::io::write_file(path("prior_weights.csv"), lip::sweep_to_csv(records));
  lip::io::write_file(path("summary.csv"), lip::sweep_summary_csv(records));
  bool any_failed = false, all_converged = true;
  for (const auto& rec : records) {
    const std::string name = "solve_N" + std::to_string(rec.pair.n_past) + "_M" +
                             std::to_string(rec.pair.m_future) + ".json";
    if (rec.failed) {
      any_failed = true;
      std::cout << "(N=" << rec.pair.n_past << ", M=" << rec.pair.m_future
                << "): FAILED: " << rec.error << "\n";
      continue;
    }
    lip::io::write_file(path(name), lip::io::solver_result_to_json(rec.theta_labels, rec.result));
    all_converged = all_converged && rec.result.converged;
    std::cout << "(N=" << rec.pair.n_past << ", M=" << rec.pair.m_future << "): objective "
              << lip::io::format_double(rec.result.objective) << ", gap "
              << lip::io::format_double(rec.result.certificate_gap) << ", support " << rec.support
              << ", " << rec.seconds << " s\n";
  }
  if (any_failed) return 1;
  return all_converged ? 0 : 2;
}

int run_build_model(const std::string& preset, int n, int m, const std::string& grid_spec,
                    double eps, const std::string& out_path) {
  const std::vector<double> grid =
      grid_spec.empty() ? lip::default_theta_grid() : parse_grid(grid_spec);
  lip::ModelTable model = [&] {
    if (preset == "binomial") return lip::build_binomial_model(n, m, grid);
    if (preset == "endpoint-binomial") return lip::build_endpoint_binomial_model(grid);
    if (preset == "two-point") return lip::build_two_point_model(eps);
    throw std::runtime_error("unknown preset '" + preset + "'");
  }();
  lip::io::save_model(model, out_path);
  std::cout << "wrote " << out_path << " (" << model.num_theta() << " parameters, "
            << model.num_x() << "x" << model.num_y() << " outcomes)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"latent information priors, minimax predictive densities, and risk domination"};
  app.require_subcommand(1);

  auto* validate_cmd = app.add_subcommand("validate", "check a model file against all invariants");
  std::string v_model;
  validate_cmd->add_option("--model", v_model, "model JSON file")->required();

  auto* solve_cmd = app.add_subcommand("solve", "maximize the conditional mutual information");
  std::string s_model, s_binomial, s_grid, s_out, s_format = "json";
  SolverFlags s_flags;
  solve_cmd->add_option("--model", s_model, "model JSON file");
  solve_cmd->add_option("--binomial", s_binomial, "build a binomial model: N,M");
  solve_cmd->add_option("--grid", s_grid, "comma-separated parameter grid (default 0,0.1,...,1)");
  attach_solver_flags(solve_cmd, s_flags);
  solve_cmd->add_option("--out", s_out, "output file")->required();
  solve_cmd->add_option("--format", s_format, "json (full result) or csv (prior histogram)")
      ->check(CLI::IsMember({"json", "csv"}));

  auto* risk_cmd = app.add_subcommand("risk", "per-parameter prediction risk of a predictive");
  std::string r_model, r_predictive, r_prior, r_out, r_format = "csv";
  risk_cmd->add_option("--model", r_model, "model JSON file")->required();
  auto* r_pred_opt = risk_cmd->add_option("--predictive", r_predictive, "predictive JSON file");
  risk_cmd->add_option("--prior", r_prior, "prior JSON file (risk of its limit predictive)")
      ->excludes(r_pred_opt);
  risk_cmd->add_option("--out", r_out, "output file")->required();
  risk_cmd->add_option("--format", r_format, "csv or json")
      ->check(CLI::IsMember({"json", "csv"}));

  auto* dom_cmd = app.add_subcommand("dominate", "build a never-worse limit predictive");
  std::string d_model, d_predictive, d_out;
  SolverFlags d_flags;
  dom_cmd->add_option("--model", d_model, "model JSON file")->required();
  dom_cmd->add_option("--predictive", d_predictive, "predictive JSON file to dominate")->required();
  attach_solver_flags(dom_cmd, d_flags);
  dom_cmd->add_option("--out", d_out, "output directory")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "solve a batch of (N, M) binomial models");
  std::string w_pairs, w_grid, w_out;
  bool w_default = false;
  SolverFlags w_flags;
  auto* w_pairs_opt =
      sweep_cmd->add_option("--pairs", w_pairs, "semicolon-separated N,M pairs: \"0,1;0,5\"");
  sweep_cmd->add_flag("--default-figure1", w_default,
                      "use the default N in {0,5,20,100} x M in {1,5,100,1000} panel set")
      ->excludes(w_pairs_opt);
  sweep_cmd->add_option("--grid", w_grid, "comma-separated parameter grid (default 0,0.1,...,1)");
  attach_solver_flags(sweep_cmd, w_flags);
  sweep_cmd->add_option("--out", w_out, "output directory")->required();

  auto* build_cmd = app.add_subcommand("build-model", "write a preset model file");
  std::string b_preset, b_grid, b_out;
  int b_n = 0, b_m = 1;
  double b_eps = 0.5;
  build_cmd->add_option("--preset", b_preset, "binomial | endpoint-binomial | two-point")
      ->required()
      ->check(CLI::IsMember({"binomial", "endpoint-binomial", "two-point"}));
  build_cmd->add_option("--n", b_n, "past sample count (binomial preset)");
  build_cmd->add_option("--m", b_m, "future sample count (binomial preset)");
  build_cmd->add_option("--grid", b_grid, "comma-separated parameter grid");
  build_cmd->add_option("--eps", b_eps, "mixing weight for the two-point preset, in (0,1)");
  build_cmd->add_option("--out", b_out, "output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Flatten CLI11's error-code zoo onto the documented contract:
    // 0 success (--help), 1 any input problem.
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (validate_cmd->parsed()) return run_validate(v_model);
    if (solve_cmd->parsed()) {
      return run_solve(solve_cmd, s_model, s_binomial, s_grid, s_flags, s_out, s_format);
    }
    if (risk_cmd->parsed()) {
      if (r_predictive.empty() && r_prior.empty()) {
        throw std::runtime_error("one of --predictive or --prior is required");
      }
      return run_risk(r_model, r_predictive, r_prior, r_out, r_format);
    }
    if (dom_cmd->parsed()) return run_dominate(dom_cmd, d_model, d_predictive, d_flags, d_out);
    if (sweep_cmd->parsed()) {
      return run_sweep_cmd(sweep_cmd, w_pairs, w_default, w_grid, w_flags, w_out);
    }
    if (build_cmd->parsed()) return run_build_model(b_preset, b_n, b_m, b_grid, b_eps, b_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
