#pragma once

// Command implementations behind the `lapgraph` executable. Each command takes
// a fully resolved options struct, so a run can be replayed from the manifest
// it writes.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lapgraph/bench.hpp"
#include "lapgraph/error.hpp"
#include "lapgraph/io.hpp"
#include "lapgraph/lsp.hpp"
#include "lapgraph/matrix_core.hpp"
#include "lapgraph/metrics.hpp"
#include "lapgraph/model_select.hpp"
#include "lapgraph/parallel.hpp"
#include "lapgraph/synth.hpp"

namespace lapgraph::cli {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInput = 2,
  kExitNumerical = 3,
  kExitPartialBench = 4,
};

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct SolverOptions {
  double rho0 = 2.0;
  double mu = 10.0;
  double tau_abs = 1e-4;
  double tau_rel = 1e-4;
  double epsilon = 1e-5;
  std::size_t outer = 2;
  std::size_t max_inner = 500;

  SolverConfig config(double lambda) const {
    SolverConfig c;
    c.lambda0 = lambda;
    c.rho0 = rho0;
    c.mu = mu;
    c.tau_abs = tau_abs;
    c.tau_rel = tau_rel;
    c.epsilon = epsilon;
    c.k_outer_max = outer;
    c.k_inner_max = max_inner;
    return c;
  }
};

struct EstimateOptions {
  std::string input;
  std::string output_dir = ".";
  std::size_t threads = 0;
  std::uint64_t seed = 0;
  double lambda = 0.1;
  bool standardize = false;
  SolverOptions solver;
};

struct SelectOptions {
  std::string input;
  std::string output_dir = ".";
  std::size_t threads = 0;
  std::uint64_t seed = 0;
  std::string grid = "synthetic";
  std::size_t grid_size = 10;
  bool standardize = false;
  std::string truth;  // optional ground-truth edge list for scoring
  SolverOptions solver;
};

struct SynthOptions {
  std::string output_dir = ".";
  std::uint64_t seed = 1;
  std::string graph = "chain";
  std::size_t p = 100;
  std::size_t n = 400;
  double kappa = 0.0;
  double p_er = 0.03;
};

struct BenchOptions {
  std::string output_dir = ".";
  std::size_t threads = 0;
  BenchSpec spec;
};

// ---------------------------------------------------------------------------
// JSON (manifest) round trip

inline Json to_json(const SolverOptions& s) {
  return Json{{"rho0", s.rho0},     {"mu", s.mu},       {"tau_abs", s.tau_abs},    {"tau_rel", s.tau_rel},
              {"epsilon", s.epsilon}, {"outer", s.outer}, {"max_inner", s.max_inner}};
}

inline void from_json(const Json& j, SolverOptions& s) {
  s.rho0 = j.at("rho0");
  s.mu = j.at("mu");
  s.tau_abs = j.at("tau_abs");
  s.tau_rel = j.at("tau_rel");
  s.epsilon = j.at("epsilon");
  s.outer = j.at("outer");
  s.max_inner = j.at("max_inner");
}

inline Json to_json(const EstimateOptions& o) {
  return Json{{"input", o.input},
              {"output_dir", o.output_dir},
              {"threads", o.threads},
              {"seed", o.seed},
              {"lambda", o.lambda},
              {"mode", to_string(o.solver.outer == 1 ? EstimatorMode::kConstrainedLasso
                                                     : EstimatorMode::kConstrainedAdaptiveLasso)},
              {"standardize", o.standardize},
              {"solver", to_json(o.solver)}};
}

inline void from_json(const Json& j, EstimateOptions& o) {
  o.input = j.at("input");
  o.output_dir = j.at("output_dir");
  o.threads = j.at("threads");
  o.seed = j.at("seed");
  o.lambda = j.at("lambda");
  o.standardize = j.at("standardize");
  from_json(j.at("solver"), o.solver);
}

inline Json to_json(const SelectOptions& o) {
  return Json{{"input", o.input},   {"output_dir", o.output_dir}, {"threads", o.threads},
              {"seed", o.seed},     {"grid", o.grid},             {"grid_size", o.grid_size},
              {"standardize", o.standardize}, {"truth", o.truth}, {"solver", to_json(o.solver)}};
}

inline void from_json(const Json& j, SelectOptions& o) {
  o.input = j.at("input");
  o.output_dir = j.at("output_dir");
  o.threads = j.at("threads");
  o.seed = j.at("seed");
  o.grid = j.at("grid");
  o.grid_size = j.at("grid_size");
  o.standardize = j.at("standardize");
  o.truth = j.at("truth");
  from_json(j.at("solver"), o.solver);
}

inline Json to_json(const SynthOptions& o) {
  return Json{{"output_dir", o.output_dir}, {"seed", o.seed}, {"graph", o.graph}, {"p", o.p},
              {"n", o.n},                   {"kappa", o.kappa}, {"p_er", o.p_er}};
}

inline void from_json(const Json& j, SynthOptions& o) {
  o.output_dir = j.at("output_dir");
  o.seed = j.at("seed");
  o.graph = j.at("graph");
  o.p = j.at("p");
  o.n = j.at("n");
  o.kappa = j.at("kappa");
  o.p_er = j.at("p_er");
}

inline Json to_json(const BenchSpec& s) {
  return Json{{"graph", to_string(s.synth.graph)},
              {"p", s.synth.p},
              {"p_er", s.synth.p_er},
              {"kappa", s.synth.kappa},
              {"n", s.n},
              {"runs", s.runs},
              {"seed", s.seed},
              {"mode", s.mode == EstimatorMode::kConstrainedLasso ? "cl" : "cal"},
              {"lambdas", s.lambdas},
              {"selection", s.bic_select ? "bic" : "grid"},
              {"bic_grid", to_string(s.bic_range)},
              {"bic_grid_size", s.bic_grid_size},
              {"threshold", s.solver.thresholding == Thresholding::kNegativeOnly ? "constrained" : "unconstrained"},
              {"rho0", s.solver.rho0},
              {"mu", s.solver.mu},
              {"tau_abs", s.solver.tau_abs},
              {"tau_rel", s.solver.tau_rel},
              {"epsilon", s.solver.epsilon},
              {"outer", s.solver.k_outer_max},
              {"max_inner", s.solver.k_inner_max}};
}

inline Json to_json(const BenchOptions& o) {
  return Json{{"output_dir", o.output_dir}, {"threads", o.threads}, {"spec", to_json(o.spec)}};
}

// ---------------------------------------------------------------------------
// bench spec settings (shared by --spec files and inline flags)

inline std::string normalize_key(std::string key) {
  for (char& c : key) {
    if (c == '-') c = '_';
  }
  return key;
}

inline double parse_real(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) throw ConfigError("bad number for " + key + ": '" + value + "'");
  return x;
}

inline std::size_t parse_count(const std::string& key, const std::string& value) {
  const double x = parse_real(key, value);
  if (x < 0 || x != static_cast<double>(static_cast<std::size_t>(x))) {
    throw ConfigError("expected a nonnegative integer for " + key + ": '" + value + "'");
  }
  return static_cast<std::size_t>(x);
}

inline std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::string token;
  std::istringstream in(value);
  while (std::getline(in, token, ',')) {
    std::istringstream words(token);
    std::string w;
    while (words >> w) out.push_back(parse_real(key, w));
  }
  return out;
}

/// Log-spaced values from lo to hi inclusive.
inline std::vector<double> log_space(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) throw ConfigError("bad log-spaced range");
  if (count == 1) return {lo};
  std::vector<double> out(count);
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) out[k] = lo * std::exp(step * static_cast<double>(k));
  out.front() = lo;
  out.back() = hi;
  return out;
}

/// Applies ordered key=value settings to a bench spec. lambda_min/max/count build a log grid.
inline void apply_bench_settings(BenchSpec& spec, const std::vector<std::pair<std::string, std::string>>& settings) {
  std::optional<double> lo, hi;
  std::size_t count = 10;
  for (const auto& [raw_key, value] : settings) {
    const std::string key = normalize_key(raw_key);
    if (key == "graph") {
      spec.synth.graph = parse_graph_kind(value);
    } else if (key == "p") {
      spec.synth.p = parse_count(key, value);
    } else if (key == "p_er") {
      spec.synth.p_er = parse_real(key, value);
    } else if (key == "kappa") {
      spec.synth.kappa = parse_real(key, value);
    } else if (key == "n") {
      spec.n = parse_count(key, value);
    } else if (key == "runs") {
      spec.runs = parse_count(key, value);
    } else if (key == "seed") {
      spec.seed = parse_count(key, value);
    } else if (key == "mode") {
      if (value == "cl") {
        spec.mode = EstimatorMode::kConstrainedLasso;
      } else if (value == "cal") {
        spec.mode = EstimatorMode::kConstrainedAdaptiveLasso;
      } else {
        throw ConfigError("mode must be cl or cal");
      }
    } else if (key == "lambdas" || key == "lambda") {
      spec.lambdas = parse_list(key, value);
    } else if (key == "lambda_min") {
      lo = parse_real(key, value);
    } else if (key == "lambda_max") {
      hi = parse_real(key, value);
    } else if (key == "lambda_count") {
      count = parse_count(key, value);
    } else if (key == "selection") {
      if (value != "bic" && value != "grid") throw ConfigError("selection must be grid or bic");
      spec.bic_select = value == "bic";
    } else if (key == "bic_grid") {
      spec.bic_range = parse_grid_range(value);
    } else if (key == "bic_grid_size") {
      spec.bic_grid_size = parse_count(key, value);
    } else if (key == "threshold") {
      if (value == "constrained") {
        spec.solver.thresholding = Thresholding::kNegativeOnly;
      } else if (value == "unconstrained") {
        spec.solver.thresholding = Thresholding::kTwoSided;
      } else {
        throw ConfigError("threshold must be constrained or unconstrained");
      }
    } else if (key == "rho0") {
      spec.solver.rho0 = parse_real(key, value);
    } else if (key == "mu") {
      spec.solver.mu = parse_real(key, value);
    } else if (key == "tau_abs") {
      spec.solver.tau_abs = parse_real(key, value);
    } else if (key == "tau_rel") {
      spec.solver.tau_rel = parse_real(key, value);
    } else if (key == "epsilon") {
      spec.solver.epsilon = parse_real(key, value);
    } else if (key == "outer") {
      spec.solver.k_outer_max = parse_count(key, value);
    } else if (key == "max_inner") {
      spec.solver.k_inner_max = parse_count(key, value);
    } else {
      throw ConfigError("unknown bench setting '" + raw_key + "'");
    }
  }
  if (lo || hi) {
    if (!lo || !hi) throw ConfigError("lambda_min and lambda_max must be given together");
    spec.lambdas = log_space(*lo, *hi, count);
  }
  if (spec.mode == EstimatorMode::kConstrainedLasso) {
    spec.solver.k_outer_max = 1;
  } else if (spec.solver.k_outer_max < 2) {
    spec.solver.k_outer_max = 2;
  }
}

/// Flat key=value lines; '#' starts a comment.
inline std::vector<std::pair<std::string, std::string>> parse_settings_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open bench spec " + path.string());
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string trimmed = io::detail::trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ParseError(path.string() + ": line " + std::to_string(line_no) + " is not key=value");
    }
    out.emplace_back(io::detail::trim(trimmed.substr(0, eq)), io::detail::trim(trimmed.substr(eq + 1)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// output helpers

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void write_manifest(const fs::path& dir, const std::string& subcommand, const Json& config,
                           const Json& results = Json::object()) {
  Json m{{"tool", "lapgraph"},
         {"version", kToolVersion},
         {"subcommand", subcommand},
         {"config", config},
         {"results", results},
         {"timestamp", utc_timestamp()}};
  io::write_text(dir / "manifest.json", m.dump(2) + "\n");
}

/// Writes summary.txt ("key: value") and summary.json with the same flat fields.
inline void write_summary(const fs::path& dir, const Json& flat) {
  std::ostringstream txt;
  for (const auto& [key, value] : flat.items()) {
    txt << key << ": ";
    if (value.is_string()) {
      txt << value.get<std::string>();
    } else if (value.is_number_float()) {
      txt << io::detail::format_double(value.get<double>());
    } else {
      txt << value.dump();
    }
    txt << '\n';
  }
  io::write_text(dir / "summary.txt", txt.str());
  io::write_text(dir / "summary.json", flat.dump(2) + "\n");
}

inline void write_graph_outputs(const fs::path& dir, const GraphEstimate& est,
                                const std::vector<std::string>& names) {
  io::write_matrix_csv(dir / "omega.csv", est.omega_hat);
  io::write_matrix_csv(dir / "weights.csv", est.w_hat);
  io::write_matrix_csv(dir / "laplacian.csv", est.laplacian_hat);
  io::write_edges_csv(dir / "edges.csv", est.edges, est.w_hat);
  if (!names.empty()) {
    std::ostringstream os;
    os << "index,name\n";
    for (std::size_t k = 0; k < names.size(); ++k) os << k + 1 << ',' << names[k] << '\n';
    io::write_text(dir / "nodes.csv", os.str());
  }
}

inline void add_estimate_summary(Json& flat, const GraphEstimate& est) {
  flat["edges"] = est.edges.size();
  flat["converged"] = est.converged();
  for (const OuterRecord& r : est.diagnostics) {
    const std::string prefix = "outer_" + std::to_string(r.outer_iteration) + "_";
    flat[prefix + "inner_iterations"] = r.inner_iterations;
    flat[prefix + "converged"] = r.converged;
    flat[prefix + "lsp_objective"] = r.lsp_objective;
    flat[prefix + "primal_residual"] = r.primal_residual;
    flat[prefix + "dual_residual"] = r.dual_residual;
    flat[prefix + "edges"] = r.edge_count;
  }
}

inline io::SampleTable load_samples(const std::string& input, bool standardize_columns) {
  if (input.empty()) throw ConfigError("--input is required");
  io::SampleTable table = io::read_samples(input);
  if (standardize_columns) table.data = standardize(SampleMatrix(table.data)).data();
  return table;
}

inline std::size_t resolve_threads(std::size_t threads) { return threads == 0 ? default_thread_count() : threads; }

// ---------------------------------------------------------------------------
// commands (throw lapgraph::Error; main maps errors to exit codes)

inline int run_estimate(const EstimateOptions& o) {
  const io::SampleTable table = load_samples(o.input, o.standardize);
  const SampleMatrix x(table.data);
  const SampleCovariance sigma = sample_covariance(x);
  EstimatorSpec spec{o.lambda, o.solver.config(o.lambda)};
  const GraphEstimate est = estimate(sigma, spec);

  const fs::path dir(o.output_dir);
  fs::create_directories(dir);
  write_graph_outputs(dir, est, table.names);
  Json flat{{"subcommand", "estimate"}, {"n", x.n()}, {"p", x.p()}, {"lambda", o.lambda},
            {"mode", to_string(spec.mode())}};
  add_estimate_summary(flat, est);
  flat["bic"] = bic(sigma, est.omega_hat, est.edges.size(), x.n());
  write_summary(dir, flat);
  write_manifest(dir, "estimate", to_json(o));
  return kExitOk;
}

inline int run_select(const SelectOptions& o) {
  const GridRange range = parse_grid_range(o.grid);
  const io::SampleTable table = load_samples(o.input, o.standardize);
  const SampleMatrix x(table.data);
  const SampleCovariance sigma = sample_covariance(x);
  const EstimatorSpec spec{1.0, o.solver.config(1.0)};
  const SelectionReport report = select_lambda(sigma, x.n(), spec, range, o.grid_size, resolve_threads(o.threads));

  const fs::path dir(o.output_dir);
  fs::create_directories(dir);
  std::ostringstream csv;
  csv << "lambda,bic,edges,converged\n";
  for (const SelectionRecord& r : report.records) {
    csv << io::detail::format_double(r.lambda) << ',' << io::detail::format_double(r.bic) << ',' << r.edge_count
        << ',' << (r.converged ? 1 : 0) << '\n';
  }
  io::write_text(dir / "selection.csv", csv.str());
  write_graph_outputs(dir, report.chosen, table.names);

  Json flat{{"subcommand", "select"},
            {"n", x.n()},
            {"p", x.p()},
            {"mode", to_string(spec.mode())},
            {"grid", to_string(range)},
            {"lambda_sm", report.grid.lambda_sm},
            {"lambda_min", report.grid.values.front()},
            {"lambda_max", report.grid.values.back()},
            {"lambda_star", report.lambda_star},
            {"bic_star", report.records[report.chosen_index].bic}};
  add_estimate_summary(flat, report.chosen);
  if (!o.truth.empty()) {
    const EdgeSet truth = io::read_edges_csv(o.truth, x.p());
    const EdgeScore s = f1_score(report.chosen.edges, truth);
    flat["truth_f1"] = s.f1;
    flat["truth_precision"] = s.precision;
    flat["truth_recall"] = s.recall;
  }
  write_summary(dir, flat);
  write_manifest(dir, "select", to_json(o));
  return kExitOk;
}

inline int run_synth(const SynthOptions& o) {
  SynthSpec spec;
  spec.graph = parse_graph_kind(o.graph);
  spec.p = o.p;
  spec.kappa = o.kappa;
  spec.p_er = o.p_er;
  if (o.p < 2) throw ConfigError("--p must be at least 2");
  if (o.n < 2) throw ConfigError("--n must be at least 2");
  if (!(o.kappa >= 0.0)) throw ConfigError("--kappa must be nonnegative");
  if (!(o.p_er >= 0.0 && o.p_er <= 1.0)) throw ConfigError("--p-er must lie in [0, 1]");
  if (spec.graph == GraphKind::kTwoComponentErdosRenyi && o.p < 4) throw ConfigError("er2 needs --p >= 4");

  Rng rng(o.seed);
  const GroundTruthModel model = make_ground_truth(spec, rng);
  const Matrix samples = sample_gaussian(model.phi, o.n, rng);

  const fs::path dir(o.output_dir);
  fs::create_directories(dir);
  io::write_matrix_csv(dir / "samples.csv", samples);
  io::write_matrix_csv(dir / "truth_omega.csv", model.omega0);
  Matrix truth_w = -model.omega0;
  truth_w.diagonal().setZero();
  io::write_edges_csv(dir / "truth_edges.csv", model.edges0, truth_w);

  const double min_eig = sym_eigendecompose(model.omega_true).d(0);
  Json results{{"edges", model.edges0.size()},
               {"components", model.edges0.component_count()},
               {"min_eigenvalue_shifted", min_eig}};
  write_manifest(dir, "synth", to_json(o), results);
  return kExitOk;
}

inline int run_bench(const BenchOptions& o) {
  const BenchReport report = monte_carlo(o.spec, resolve_threads(o.threads));
  const fs::path dir(o.output_dir);
  fs::create_directories(dir);
  std::ostringstream csv;
  write_bench_csv(csv, report);
  io::write_text(dir / "bench.csv", csv.str());
  std::ostringstream summary;
  write_bench_summary(summary, report);
  io::write_text(dir / "summary.txt", summary.str());
  Json results{{"successful_runs", report.successes()}, {"failed_runs", report.failures}};
  write_manifest(dir, "bench", to_json(o), results);
  const double ok_fraction = static_cast<double>(report.successes()) / static_cast<double>(o.spec.runs);
  if (report.failures > 0) std::cerr << "bench: " << report.failures << " run(s) failed\n";
  return ok_fraction >= 0.9 ? kExitOk : kExitPartialBench;
}

/// Re-executes the command recorded in a manifest.json.
inline int run_manifest(const fs::path& path) {
  Json m;
  try {
    m = Json::parse(io::read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  const std::string sub = m.at("subcommand");
  const Json& cfg = m.at("config");
  if (sub == "estimate") {
    EstimateOptions o;
    from_json(cfg, o);
    return run_estimate(o);
  }
  if (sub == "select") {
    SelectOptions o;
    from_json(cfg, o);
    return run_select(o);
  }
  if (sub == "synth") {
    SynthOptions o;
    from_json(cfg, o);
    return run_synth(o);
  }
  if (sub == "bench") {
    BenchOptions o;
    o.output_dir = cfg.at("output_dir");
    o.threads = cfg.at("threads");
    std::vector<std::pair<std::string, std::string>> settings;
    for (const auto& [key, value] : cfg.at("spec").items()) {
      if (key == "lambdas") {
        std::string joined;
        for (const auto& v : value) joined += io::detail::format_double(v.get<double>()) + ",";
        settings.emplace_back(key, joined);
      } else {
        settings.emplace_back(key, value.is_string() ? value.get<std::string>()
                                                     : (value.is_number_float()
                                                            ? io::detail::format_double(value.get<double>())
                                                            : value.dump()));
      }
    }
    apply_bench_settings(o.spec, settings);
    return run_bench(o);
  }
  throw ParseError("manifest has unknown subcommand '" + sub + "'");
}

inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitUsage;
  if (dynamic_cast<const InputError*>(&e) || dynamic_cast<const ParseError*>(&e)) return kExitInput;
  if (dynamic_cast<const Error*>(&e)) return kExitNumerical;
  return kExitInput;
}

// ---------------------------------------------------------------------------
// argument parsing

inline void add_solver_flags(CLI::App& cmd, SolverOptions& s) {
  cmd.add_option("--rho0", s.rho0, "initial ADMM penalty")->capture_default_str();
  cmd.add_option("--mu", s.mu, "residual balancing factor")->capture_default_str();
  cmd.add_option("--tau-abs", s.tau_abs, "absolute tolerance")->capture_default_str();
  cmd.add_option("--tau-rel", s.tau_rel, "relative tolerance")->capture_default_str();
  cmd.add_option("--epsilon", s.epsilon, "log-sum penalty epsilon")->capture_default_str();
  cmd.add_option("--outer", s.outer, "outer passes (1 = constrained lasso)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--max-inner", s.max_inner, "maximum ADMM iterations per pass")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

/// Parses argv and runs the chosen command. Returns the process exit code.
inline int main_entry(int argc, const char* const* argv, std::ostream& err = std::cerr) {
  CLI::App app{"Sparse graph learning under Laplacian-related (M-matrix) constraints", "lapgraph"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  EstimateOptions est;
  auto* est_cmd = app.add_subcommand("estimate", "estimate a graph at a fixed lambda");
  est_cmd->add_option("--input", est.input, "samples CSV (rows = observations)")->required();
  est_cmd->add_option("--output-dir", est.output_dir)->capture_default_str();
  est_cmd->add_option("--threads", est.threads, "worker threads (0 = all cores)");
  est_cmd->add_option("--seed", est.seed, "recorded only; estimation is deterministic");
  est_cmd->add_option("--lambda", est.lambda, "regularisation lambda")->check(CLI::PositiveNumber)->capture_default_str();
  est_cmd->add_flag("--standardize", est.standardize, "centre and scale columns to unit variance");
  add_solver_flags(*est_cmd, est.solver);

  SelectOptions sel;
  auto* sel_cmd = app.add_subcommand("select", "choose lambda by BIC and estimate");
  sel_cmd->add_option("--input", sel.input, "samples CSV")->required();
  sel_cmd->add_option("--output-dir", sel.output_dir)->capture_default_str();
  sel_cmd->add_option("--threads", sel.threads, "worker threads (0 = all cores)");
  sel_cmd->add_option("--seed", sel.seed, "recorded only");
  sel_cmd->add_option("--grid", sel.grid, "grid range")
      ->check(CLI::IsMember({"synthetic", "real"}))
      ->capture_default_str();
  sel_cmd->add_option("--grid-size", sel.grid_size)->check(CLI::Range(2, 1000))->capture_default_str();
  sel_cmd->add_flag("--standardize", sel.standardize, "centre and scale columns to unit variance");
  sel_cmd->add_option("--truth", sel.truth, "ground-truth edges CSV to score the selected model");
  add_solver_flags(*sel_cmd, sel.solver);

  SynthOptions syn;
  auto* syn_cmd = app.add_subcommand("synth", "generate a synthetic Laplacian model and samples");
  syn_cmd->add_option("--output-dir", syn.output_dir)->capture_default_str();
  syn_cmd->add_option("--seed", syn.seed)->capture_default_str();
  syn_cmd->add_option("--threads", "ignored")->expected(1);
  syn_cmd->add_option("--graph", syn.graph)->check(CLI::IsMember({"chain", "er", "er2"}))->capture_default_str();
  syn_cmd->add_option("--p", syn.p)->capture_default_str();
  syn_cmd->add_option("--n", syn.n)->capture_default_str();
  syn_cmd->add_option("--kappa", syn.kappa)->capture_default_str();
  syn_cmd->add_option("--p-er", syn.p_er)->capture_default_str();

  BenchOptions bench;
  std::string spec_path;
  std::vector<std::pair<std::string, std::string>> overrides;
  auto* bench_cmd = app.add_subcommand("bench", "Monte-Carlo benchmark on synthetic models");
  bench_cmd->add_option("--spec", spec_path, "flat key=value bench spec");
  bench_cmd->add_option("--output-dir", bench.output_dir)->capture_default_str();
  bench_cmd->add_option("--threads", bench.threads, "worker threads (0 = all cores)");
  for (const char* key : {"graph", "p", "p-er", "kappa", "n", "runs", "seed", "mode", "lambdas", "lambda-min",
                          "lambda-max", "lambda-count", "selection", "bic-grid", "bic-grid-size", "threshold",
                          "rho0", "mu", "tau-abs", "tau-rel", "epsilon", "outer", "max-inner"}) {
    const std::string name = key;
    bench_cmd->add_option_function<std::string>(
        "--" + name, [&overrides, name](const std::string& v) { overrides.emplace_back(name, v); });
  }

  std::string manifest_path;
  auto* replay_cmd = app.add_subcommand("replay", "re-run the command recorded in a manifest.json");
  replay_cmd->add_option("manifest", manifest_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out;
    const int code = app.exit(e, out, err);
    std::cout << out.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*est_cmd) return run_estimate(est);
    if (*sel_cmd) return run_select(sel);
    if (*syn_cmd) return run_synth(syn);
    if (*bench_cmd) {
      std::vector<std::pair<std::string, std::string>> settings;
      if (!spec_path.empty()) settings = parse_settings_file(spec_path);
      settings.insert(settings.end(), overrides.begin(), overrides.end());
      apply_bench_settings(bench.spec, settings);
      return run_bench(bench);
    }
    if (*replay_cmd) return run_manifest(manifest_path);
  } catch (const std::exception& e) {
    err << "lapgraph: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitUsage;
}

}  // namespace lapgraph::cli
