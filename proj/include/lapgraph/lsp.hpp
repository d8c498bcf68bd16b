#pragma once

// Log-sum-penalty reweighting around the inner ADMM solver: a constrained
// lasso pass with uniform weights followed by adaptive-lasso passes.

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>

#include "lapgraph/admm.hpp"
#include "lapgraph/error.hpp"
#include "lapgraph/graph.hpp"
#include "lapgraph/matrix_core.hpp"

namespace lapgraph {

enum class EstimatorMode { kConstrainedLasso, kConstrainedAdaptiveLasso };

inline const char* to_string(EstimatorMode mode) {
  return mode == EstimatorMode::kConstrainedLasso ? "constrained-lasso" : "constrained-adaptive-lasso";
}

struct EstimatorSpec {
  double lambda = 0.1;
  SolverConfig solver{};

  EstimatorMode mode() const {
    return solver.k_outer_max == 1 ? EstimatorMode::kConstrainedLasso : EstimatorMode::kConstrainedAdaptiveLasso;
  }

  static EstimatorSpec make(double lambda, EstimatorMode mode, SolverConfig solver = {}) {
    if (mode == EstimatorMode::kConstrainedLasso) {
      solver.k_outer_max = 1;
    } else if (solver.k_outer_max < 2) {
      solver.k_outer_max = 2;
    }
    solver.lambda0 = lambda;
    return {lambda, solver};
  }

  EstimatorSpec with_lambda(double value) const {
    EstimatorSpec copy = *this;
    copy.lambda = value;
    copy.solver.lambda0 = value;
    return copy;
  }
};

/// lambda_ij = lambda / (|omega_bar_ij| + epsilon) off the diagonal, zero on it.
inline PenaltyWeights lsp_weights(const Matrix& omega_bar, double lambda, double epsilon) {
  if (!(lambda > 0.0) || !(epsilon > 0.0)) throw ConfigError("lambda and epsilon must be positive");
  const Matrix sym = symmetrize(omega_bar);
  Matrix w = lambda / (sym.array().abs() + epsilon);
  w.diagonal().setZero();
  return PenaltyWeights(std::move(w));
}

/// tr(Omega Sigma) - log|Omega| + lambda * sum_{i != j} log(1 + |Omega_ij| / epsilon).
inline double lsp_objective(const Matrix& omega, const SampleCovariance& sigma, double lambda, double epsilon) {
  const double fit = (sigma.matrix().cwiseProduct(omega)).sum() - log_det_pd(omega);
  double penalty = 0.0;
  for (Eigen::Index j = 0; j < omega.cols(); ++j) {
    for (Eigen::Index i = 0; i < omega.rows(); ++i) {
      if (i != j) penalty += std::log1p(std::abs(omega(i, j)) / epsilon);
    }
  }
  return fit + lambda * penalty;
}

/// Point at which diagnostics evaluate the LSP objective: Omega's diagonal with
/// V's exactly-sparse off-diagonal, falling back to Omega if that is not PD.
inline Matrix diagnostic_point(const Matrix& omega, const Matrix& v) {
  Matrix projected = project_offdiagonal(omega, v);
  return is_positive_definite(projected) ? projected : omega;
}

inline GraphEstimate assemble_estimate(Matrix omega_hat, Matrix v) {
  GraphEstimate out;
  out.edges = extract_edges(v);
  out.w_hat = build_weights(omega_hat, out.edges);
  out.laplacian_hat = build_laplacian(out.w_hat);
  out.omega_hat = std::move(omega_hat);
  out.v = std::move(v);
  return out;
}

struct EstimateHooks {
  IterationObserver on_iteration;
  // called after each outer pass with its 1-based index and the raw inner result
  std::function<void(std::size_t, const InnerResult&)> on_outer;
};

/// Runs the outer reweighting loop. Errors from the inner solver are rethrown
/// with the outer iteration index attached.
inline GraphEstimate estimate(const SampleCovariance& sigma, const EstimatorSpec& spec,
                              const EstimateHooks& hooks = {}) {
  SolverConfig cfg = spec.solver;
  cfg.lambda0 = spec.lambda;
  cfg.validate();

  PenaltyWeights weights = PenaltyWeights::uniform(sigma.p(), spec.lambda);
  InnerResult last;
  std::vector<OuterRecord> diagnostics;
  for (std::size_t outer = 1; outer <= cfg.k_outer_max; ++outer) {
    try {
      last = solve_inner(sigma, weights, cfg, hooks.on_iteration);
    } catch (const Error&) {
      rethrow_with_context("outer iteration " + std::to_string(outer));
    }

    OuterRecord record;
    record.outer_iteration = outer;
    record.inner_iterations = last.iterations;
    record.converged = last.converged;
    record.primal_residual = last.primal_residual;
    record.dual_residual = last.dual_residual;
    record.lsp_objective = lsp_objective(diagnostic_point(last.omega, last.v), sigma, spec.lambda, cfg.epsilon);
    record.edge_count = extract_edges(last.v).size();
    diagnostics.push_back(record);
    if (hooks.on_outer) hooks.on_outer(outer, last);

    if (outer < cfg.k_outer_max) weights = lsp_weights(last.omega, spec.lambda, cfg.epsilon);
  }

  GraphEstimate out = assemble_estimate(std::move(last.omega), std::move(last.v));
  out.diagnostics = std::move(diagnostics);
  return out;
}

}  // namespace lapgraph
