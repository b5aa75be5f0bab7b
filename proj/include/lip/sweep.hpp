#pragma once

// The (N, M) sweep: solve for the optimal prior of the binomial model over a
// list of past/future sample-size pairs and emit plot-ready long-format data.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <cstddef>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "lip/functionals.hpp"
#include "lip/io.hpp"
#include "lip/model.hpp"
#include "lip/solver.hpp"

namespace lip {

struct SweepPair {
  int n_past = 0;
  int m_future = 1;
};

inline std::vector<SweepPair> default_sweep_pairs() {
  std::vector<SweepPair> pairs;
  for (int n : {0, 5, 20, 100}) {
    for (int m : {1, 5, 100, 1000}) pairs.push_back({n, m});
  }
  return pairs;
}

inline std::vector<double> default_theta_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 10; ++k) grid.push_back(static_cast<double>(k) / 10.0);
  return grid;
}

inline std::size_t support_size(const Prior& p, double threshold = 1e-4) {
  std::size_t n = 0;
  for (double w : p.weights) {
    if (w > threshold) ++n;
  }
  return n;
}

struct SweepRecord {
  SweepPair pair;
  std::vector<std::string> theta_labels;
  SolverResult result;
  std::size_t support = 0;  // weights above the 1e-4 reporting threshold
  bool has_mirror = false;
  double symmetrized_objective = 0.0;  // I of the mirror-averaged prior
  bool failed = false;
  std::string error;
  double seconds = 0.0;
};

inline std::size_t sweep_thread_cap() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("LIPSOLVE_THREADS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed >= 1) return static_cast<std::size_t>(parsed);
  }
  return hw;
}

// Pairs solve independently and may run concurrently; each record is a pure
// function of (pair, grid, cfg), so the output order is the input order
// regardless of scheduling.
inline std::vector<SweepRecord> run_sweep(const std::vector<SweepPair>& pairs,
                                          const std::vector<double>& grid,
                                          const SolverConfig& cfg = {}) {
  std::vector<SweepRecord> records(pairs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= pairs.size()) return;
      SweepRecord& rec = records[idx];
      rec.pair = pairs[idx];
      const auto start = std::chrono::steady_clock::now();
      try {
        const ModelTable m = build_binomial_model(rec.pair.n_past, rec.pair.m_future, grid);
        rec.theta_labels = m.theta_labels();
        rec.result = solve_lip(m, cfg);
        rec.support = support_size(rec.result.prior);
        if (const auto perm = mirror_permutation(grid)) {
          rec.has_mirror = true;
          const Prior sym = mix(rec.result.prior, mirrored_prior(rec.result.prior, *perm), 0.5);
          rec.symmetrized_objective = conditional_mutual_information(m, sym);
        }
      } catch (const std::exception& e) {
        rec.failed = true;
        rec.error = e.what();
      }
      rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  };
  const std::size_t nthreads = std::min(sweep_thread_cap(), std::max<std::size_t>(pairs.size(), 1));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(nthreads);
    for (std::size_t i = 0; i < nthreads; ++i) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
  }
  return records;
}

// Long-format CSV with one row per (pair, parameter): ready for plotting the
// prior panels.
inline std::string sweep_to_csv(const std::vector<SweepRecord>& records) {
  std::string out = "N,M,theta_label,weight\n";
  for (const auto& rec : records) {
    if (rec.failed) continue;
    for (std::size_t t = 0; t < rec.theta_labels.size(); ++t) {
      out += std::to_string(rec.pair.n_past);
      out += ',';
      out += std::to_string(rec.pair.m_future);
      out += ',';
      out += rec.theta_labels[t];
      out += ',';
      out += io::format_double(rec.result.prior[t]);
      out += '\n';
    }
  }
  return out;
}

// Per-pair summary (objective, certificate, support size) in CSV form.
inline std::string sweep_summary_csv(const std::vector<SweepRecord>& records) {
  std::string out = "N,M,objective,certificate_gap,iterations,converged,support_size,seconds\n";
  for (const auto& rec : records) {
    out += std::to_string(rec.pair.n_past);
    out += ',';
    out += std::to_string(rec.pair.m_future);
    out += ',';
    if (rec.failed) {
      out += "error,error,0,false,0,";
      out += io::format_double(rec.seconds);
    } else {
      out += io::format_double(rec.result.objective);
      out += ',';
      out += io::format_double(rec.result.certificate_gap);
      out += ',';
      out += std::to_string(rec.result.iterations);
      out += ',';
      out += rec.result.converged ? "true" : "false";
      out += ',';
      out += std::to_string(rec.support);
      out += ',';
      out += io::format_double(rec.seconds);
    }
    out += '\n';
  }
  return out;
}

}  // namespace lip
