#pragma once

// Monte-Carlo harness: ground truth -> samples -> estimates -> metrics,
// aggregated per lambda over independent seeded runs.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "lapgraph/error.hpp"
#include "lapgraph/graph.hpp"
#include "lapgraph/lsp.hpp"
#include "lapgraph/metrics.hpp"
#include "lapgraph/model_select.hpp"
#include "lapgraph/parallel.hpp"
#include "lapgraph/synth.hpp"

namespace lapgraph {

struct BenchSpec {
  SynthSpec synth{};
  std::size_t n = 400;
  std::size_t runs = 10;
  std::uint64_t seed = 1;
  EstimatorMode mode = EstimatorMode::kConstrainedAdaptiveLasso;
  SolverConfig solver{};
  std::vector<double> lambdas;  // fixed grid, ignored when bic_select is set
  bool bic_select = false;
  GridRange bic_range = GridRange::kSynthetic;
  std::size_t bic_grid_size = 10;

  void validate() const {
    if (runs < 1) throw ConfigError("runs must be at least 1");
    if (synth.p < 2) throw ConfigError("p must be at least 2");
    if (synth.graph == GraphKind::kTwoComponentErdosRenyi && synth.p < 4) {
      throw ConfigError("two-component graphs need p >= 4");
    }
    if (!(synth.p_er >= 0.0 && synth.p_er <= 1.0)) throw ConfigError("p_er must lie in [0, 1]");
    if (!(synth.kappa >= 0.0)) throw ConfigError("kappa must be nonnegative");
    if (n < 2) throw ConfigError("n must be at least 2");
    if (!bic_select) {
      if (lambdas.empty()) throw ConfigError("a fixed-lambda bench needs at least one lambda");
      for (double l : lambdas) {
        if (!(l > 0.0)) throw ConfigError("lambdas must be positive");
      }
    }
  }

  EstimatorSpec estimator(double lambda) const { return EstimatorSpec::make(lambda, mode, solver); }
};

/// Metrics of one estimate against the ground truth. The first-pass (constrained
/// lasso) metrics are filled only for multi-pass runs.
struct EstimateMetrics {
  double lambda = 0.0;
  EdgeScore score;
  double frob = 0.0;     // fixed scale c = 1
  double frob_ls = 0.0;  // least-squares scale
  std::size_t edges = 0;
  bool converged = false;
  bool has_first_pass = false;
  EdgeScore first_pass_score;
  double first_pass_frob = 0.0;
  std::size_t first_pass_edges = 0;
};

struct RunRecord {
  std::size_t run = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  std::vector<EstimateMetrics> per_lambda;  // one entry per grid lambda, or the single BIC choice
  double seconds = 0.0;
};

struct AggregateRow {
  std::string label;  // lambda value, or "bic"
  std::string metric;
  double mean = 0.0;
  double std = 0.0;
  std::size_t runs = 0;
};

struct BenchReport {
  BenchSpec spec;
  std::vector<RunRecord> runs;
  std::vector<AggregateRow> rows;
  std::size_t failures = 0;
  std::size_t best_index = 0;  // grid index with the highest mean F1
  double best_lambda = 0.0;
  double best_f1_mean = 0.0;
  double best_f1_std = 0.0;
  double best_frob_mean = 0.0;
  double mean_seconds = 0.0;

  std::size_t successes() const { return runs.size() - failures; }

  /// Mean of a metric at a grid index over successful runs.
  double mean(std::size_t index, const std::string& metric) const {
    for (const AggregateRow& r : rows) {
      if (r.metric == metric && r.label == label_of(index)) return r.mean;
    }
    throw InputError("no aggregate row for metric " + metric);
  }

  std::string label_of(std::size_t index) const {
    if (spec.bic_select) return "bic";
    return format_number(spec.lambdas.at(index));
  }

  static std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
  }
};

struct BenchHooks {
  IterationObserver on_iteration;
  std::function<void(const GraphEstimate&, const SampleCovariance&)> on_estimate;
};

namespace detail {

inline EstimateMetrics score_estimate(const GraphEstimate& est, const GroundTruthModel& truth, double lambda) {
  EstimateMetrics m;
  m.lambda = lambda;
  m.score = f1_score(est.edges, truth.edges0);
  const Matrix off = masked_offdiagonal(est.omega_hat, est.edges);
  m.frob = frob_error(off, truth.omega0, ScaleMode::kFixedOne).error;
  m.frob_ls = frob_error(off, truth.omega0, ScaleMode::kLeastSquares).error;
  m.edges = est.edges.size();
  m.converged = est.converged();
  return m;
}

inline EstimateMetrics run_one_lambda(const SampleCovariance& sigma, const GroundTruthModel& truth,
                                      const BenchSpec& spec, double lambda, const BenchHooks& hooks) {
  EstimateHooks est_hooks;
  est_hooks.on_iteration = hooks.on_iteration;
  bool has_first = false;
  EdgeScore first_score;
  double first_frob = 0.0;
  std::size_t first_edges = 0;
  const EstimatorSpec es = spec.estimator(lambda);
  if (es.solver.k_outer_max > 1) {
    est_hooks.on_outer = [&](std::size_t outer, const InnerResult& r) {
      if (outer != 1) return;
      const EdgeSet edges = extract_edges(r.v);
      first_score = f1_score(edges, truth.edges0);
      first_frob = frob_error(masked_offdiagonal(r.omega, edges), truth.omega0, ScaleMode::kFixedOne).error;
      first_edges = edges.size();
      has_first = true;
    };
  }
  const GraphEstimate est = estimate(sigma, es, est_hooks);
  if (hooks.on_estimate) hooks.on_estimate(est, sigma);
  EstimateMetrics m = score_estimate(est, truth, lambda);
  m.has_first_pass = has_first;
  m.first_pass_score = first_score;
  m.first_pass_frob = first_frob;
  m.first_pass_edges = first_edges;
  return m;
}

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

// population standard deviation (divisor = count)
inline Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  m.std = std::sqrt(ss / static_cast<double>(xs.size()));
  return m;
}

}  // namespace detail

/// Executes one seeded run: seed = master seed + run index.
inline RunRecord bench_run(const BenchSpec& spec, std::size_t run, const BenchHooks& hooks = {}) {
  RunRecord rec;
  rec.run = run;
  rec.seed = spec.seed + run;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Rng rng(rec.seed);
    const GroundTruthModel truth = make_ground_truth(spec.synth, rng);
    const SampleMatrix x(sample_gaussian(truth.phi, spec.n, rng));
    const SampleCovariance sigma = sample_covariance(x);
    if (spec.bic_select) {
      EstimateHooks est_hooks;
      est_hooks.on_iteration = hooks.on_iteration;
      const SelectionReport sel =
          select_lambda(sigma, spec.n, spec.estimator(1.0), spec.bic_range, spec.bic_grid_size, 1, est_hooks);
      if (hooks.on_estimate) hooks.on_estimate(sel.chosen, sigma);
      rec.per_lambda.push_back(detail::score_estimate(sel.chosen, truth, sel.lambda_star));
    } else {
      for (double lambda : spec.lambdas) {
        rec.per_lambda.push_back(detail::run_one_lambda(sigma, truth, spec, lambda, hooks));
      }
    }
    rec.ok = true;
  } catch (const Error& e) {
    rec.ok = false;
    rec.error = e.what();
    rec.per_lambda.clear();
  }
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

/// Runs every seed and aggregates mean / population std per grid point and metric.
/// Failed runs are counted and excluded from the aggregates.
inline BenchReport monte_carlo(const BenchSpec& spec, std::size_t threads = 1, const BenchHooks& hooks = {}) {
  spec.validate();
  BenchReport report;
  report.spec = spec;
  report.runs.resize(spec.runs);
  parallel_for(spec.runs, threads, [&](std::size_t r) { report.runs[r] = bench_run(spec, r, hooks); });

  double seconds = 0.0;
  for (const RunRecord& r : report.runs) {
    if (!r.ok) ++report.failures;
    seconds += r.seconds;
  }
  report.mean_seconds = seconds / static_cast<double>(spec.runs);

  const std::size_t points = spec.bic_select ? 1 : spec.lambdas.size();
  double best_f1 = -1.0;
  for (std::size_t k = 0; k < points; ++k) {
    std::map<std::string, std::vector<double>> series;
    std::vector<std::string> order;
    auto push = [&](const std::string& name, double value) {
      auto [it, inserted] = series.try_emplace(name);
      if (inserted) order.push_back(name);
      it->second.push_back(value);
    };
    for (const RunRecord& r : report.runs) {
      if (!r.ok) continue;
      const EstimateMetrics& m = r.per_lambda[k];
      push("f1", m.score.f1);
      push("precision", m.score.precision);
      push("recall", m.score.recall);
      push("frob", m.frob);
      push("frob_ls", m.frob_ls);
      push("edges", static_cast<double>(m.edges));
      push("converged", m.converged ? 1.0 : 0.0);
      if (spec.bic_select) push("lambda", m.lambda);
      if (m.has_first_pass) {
        push("cl_f1", m.first_pass_score.f1);
        push("cl_frob", m.first_pass_frob);
        push("cl_edges", static_cast<double>(m.first_pass_edges));
      }
    }
    const std::string label = report.label_of(k);
    for (const std::string& name : order) {
      const detail::Moments mom = detail::moments(series[name]);
      report.rows.push_back({label, name, mom.mean, mom.std, series[name].size()});
      if (name == "f1" && mom.mean > best_f1) {
        best_f1 = mom.mean;
        report.best_index = k;
        report.best_lambda = spec.bic_select ? 0.0 : spec.lambdas[k];
        report.best_f1_mean = mom.mean;
        report.best_f1_std = mom.std;
      }
    }
  }
  if (report.successes() > 0) report.best_frob_mean = report.mean(report.best_index, "frob");
  return report;
}

/// "lambda,metric,mean,std,runs" with one row per grid point and metric.
inline void write_bench_csv(std::ostream& os, const BenchReport& report) {
  os << "lambda,metric,mean,std,runs\n";
  for (const AggregateRow& r : report.rows) {
    os << r.label << ',' << r.metric << ',' << BenchReport::format_number(r.mean) << ','
       << BenchReport::format_number(r.std) << ',' << r.runs << '\n';
  }
}

/// Flat "key: value" summary.
inline void write_bench_summary(std::ostream& os, const BenchReport& report) {
  const BenchSpec& s = report.spec;
  os << "graph: " << to_string(s.synth.graph) << '\n'
     << "p: " << s.synth.p << '\n'
     << "p_er: " << s.synth.p_er << '\n'
     << "kappa: " << s.synth.kappa << '\n'
     << "n: " << s.n << '\n'
     << "mode: " << to_string(s.mode) << '\n'
     << "runs: " << s.runs << '\n'
     << "seed: " << s.seed << '\n'
     << "selection: " << (s.bic_select ? std::string("bic-") + to_string(s.bic_range) : "fixed-grid") << '\n'
     << "successful_runs: " << report.successes() << '\n'
     << "failed_runs: " << report.failures << '\n';
  for (const RunRecord& r : report.runs) {
    if (!r.ok) os << "run_" << r.run << "_error: " << r.error << '\n';
  }
  if (report.successes() > 0) {
    os << "best_label: " << report.label_of(report.best_index) << '\n'
       << "best_f1_mean: " << BenchReport::format_number(report.best_f1_mean) << '\n'
       << "best_f1_std: " << BenchReport::format_number(report.best_f1_std) << '\n'
       << "best_frob_mean: " << BenchReport::format_number(report.best_frob_mean) << '\n';
  }
  os << "mean_seconds_per_run: " << report.mean_seconds << '\n';
}

}  // namespace lapgraph
