#pragma once

// Inner ADMM loop for the sign-constrained weighted-l1 log-likelihood problem
//
//   min  tr(Sigma Omega) - log|Omega| + sum_{i != j} lambda_ij |V_ij|
//   s.t. Omega = V,  V_ij <= 0 (i != j),  Omega PD.

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <tuple>
#include <utility>

#include "lapgraph/error.hpp"
#include "lapgraph/matrix_core.hpp"

namespace lapgraph {

/// How off-diagonal entries of V are thresholded.
enum class Thresholding {
  kNegativeOnly,  // s_neg: soft threshold negatives, clip positives to zero
  kTwoSided,      // plain soft threshold, no sign constraint (ablation only)
};

/// Per-entry l1 weights lambda_ij. Symmetric, nonnegative, diagonal ignored.
class PenaltyWeights {
 public:
  explicit PenaltyWeights(Matrix lambda) : lambda_(std::move(lambda)) {
    if (lambda_.rows() != lambda_.cols()) throw InputError("penalty weights must be square");
    if (!all_finite(lambda_)) throw InputError("penalty weights must be finite");
    for (Eigen::Index i = 0; i < lambda_.rows(); ++i) {
      for (Eigen::Index j = 0; j < lambda_.cols(); ++j) {
        if (i == j) continue;
        if (lambda_(i, j) < 0.0) throw InputError("penalty weights must be nonnegative");
        if (lambda_(i, j) != lambda_(j, i)) throw InputError("penalty weights must be symmetric");
      }
    }
    lambda_.diagonal().setZero();
  }

  static PenaltyWeights uniform(std::size_t p, double lambda) {
    return PenaltyWeights(Matrix::Constant(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p), lambda));
  }

  const Matrix& matrix() const noexcept { return lambda_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return lambda_(i, j); }
  std::size_t p() const noexcept { return static_cast<std::size_t>(lambda_.rows()); }

 private:
  Matrix lambda_;
};

struct SolverConfig {
  double lambda0 = 0.1;
  double rho0 = 2.0;
  double mu = 10.0;
  double tau_abs = 1e-4;
  double tau_rel = 1e-4;
  double epsilon = 1e-5;
  std::size_t k_outer_max = 2;
  std::size_t k_inner_max = 500;
  Thresholding thresholding = Thresholding::kNegativeOnly;

  void validate() const {
    if (!(lambda0 > 0.0)) throw ConfigError("lambda0 must be positive");
    if (!(rho0 > 0.0)) throw ConfigError("rho0 must be positive");
    if (!(mu > 1.0)) throw ConfigError("mu must exceed 1");
    if (!(tau_abs > 0.0) || !(tau_rel > 0.0)) throw ConfigError("tolerances must be positive");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (k_outer_max < 1) throw ConfigError("k_outer_max must be at least 1");
    if (k_inner_max < 1) throw ConfigError("k_inner_max must be at least 1");
  }
};

struct AdmmState {
  Matrix omega;
  Matrix v;
  Matrix u;  // scaled dual
  double rho = 2.0;
};

struct ConvergenceCheck {
  bool converged = false;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

struct InnerResult {
  Matrix omega;
  Matrix v;
  Matrix u;
  double rho = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

/// Snapshot handed to an observer after every inner iteration.
struct IterationView {
  std::size_t iteration;  // 1-based
  const Matrix& omega;
  const Matrix& v;
  const Matrix& u;
  double rho;
  double min_omega_eigenvalue;
  const ConvergenceCheck& check;
};

using IterationObserver = std::function<void(const IterationView&)>;

namespace detail {

// Positive root of rho*x^2 - d*x - 1 = 0, written to avoid cancellation when d >> 0.
inline double omega_eigen_map(double d, double rho) {
  const double root = std::sqrt(d * d + 4.0 * rho);
  return d > 0.0 ? 2.0 / (d + root) : (root - d) / (2.0 * rho);
}

struct OmegaStep {
  Matrix omega;
  double min_eigenvalue;
};

inline OmegaStep omega_step(const Matrix& sigma, const Matrix& v, const Matrix& u, double rho) {
  const EigenDecomposition eig = sym_eigendecompose(sigma - rho * (v + u));
  Vector mapped(eig.d.size());
  for (Eigen::Index l = 0; l < eig.d.size(); ++l) mapped(l) = omega_eigen_map(eig.d(l), rho);
  // eigenvalues ascending, the map is decreasing
  const double min_eig = mapped.size() > 0 ? mapped.minCoeff() : 0.0;
  return {symmetrize(eig.q * mapped.asDiagonal() * eig.q.transpose()), min_eig};
}

}  // namespace detail

/// Omega-update: argmin tr(Sigma Omega) - log|Omega| + rho/2 ||V - Omega + U||_F^2.
inline Matrix omega_update(const SampleCovariance& sigma, const Matrix& v, const Matrix& u, double rho) {
  if (!(rho > 0.0)) throw ConfigError("rho must be positive");
  return detail::omega_step(sigma.matrix(), v, u, rho).omega;
}

/// (1 - beta/|a|)_+ * min(a, 0); zero at a == 0.
inline double s_neg(double a, double beta) {
  if (a >= 0.0) return 0.0;
  const double shrink = 1.0 - beta / -a;
  return shrink > 0.0 ? shrink * a : 0.0;
}

inline double soft_threshold(double a, double beta) {
  if (a > beta) return a - beta;
  if (a < -beta) return a + beta;
  return 0.0;
}

/// V-update: diagonal copied from Omega - U, off-diagonal thresholded at lambda_ij / rho.
inline Matrix v_update(const Matrix& omega, const Matrix& u, const PenaltyWeights& weights, double rho,
                       Thresholding mode = Thresholding::kNegativeOnly) {
  if (!(rho > 0.0)) throw ConfigError("rho must be positive");
  const Matrix a = symmetrize(omega - u);
  const Eigen::Index p = a.rows();
  Matrix v(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    v(j, j) = a(j, j);
    for (Eigen::Index i = j + 1; i < p; ++i) {
      const double beta = weights(i, j) / rho;
      const double x = mode == Thresholding::kNegativeOnly ? s_neg(a(i, j), beta) : soft_threshold(a(i, j), beta);
      v(i, j) = x;
      v(j, i) = x;
    }
  }
  return v;
}

inline Matrix u_update(const Matrix& u, const Matrix& v, const Matrix& omega) { return u + (v - omega); }

inline ConvergenceCheck check_convergence(const Matrix& omega, const Matrix& v, const Matrix& v_prev,
                                          const Matrix& u, double rho, double tau_abs, double tau_rel,
                                          std::size_t p) {
  const double pd = static_cast<double>(p);
  const double tau_pri = pd * tau_abs + tau_rel * std::max(omega.norm(), v.norm());
  const double tau_dual = pd * tau_abs + tau_rel * u.norm() / rho;
  ConvergenceCheck out;
  out.primal_residual = (omega - v).norm();
  out.dual_residual = rho * (v - v_prev).norm();
  out.converged = out.primal_residual <= tau_pri && out.dual_residual <= tau_dual;
  return out;
}

/// Residual balancing: returns the new (rho, U) pair.
inline std::pair<double, Matrix> adapt_rho(double rho, double primal_residual, double dual_residual, double mu,
                                           const Matrix& u) {
  if (primal_residual > mu * dual_residual) return {2.0 * rho, u / 2.0};
  if (dual_residual > mu * primal_residual) return {rho / 2.0, 2.0 * u};
  return {rho, u};
}

inline InnerResult solve_inner(const SampleCovariance& sigma, const PenaltyWeights& weights, const SolverConfig& cfg,
                               const IterationObserver& observer = {}) {
  cfg.validate();
  const Matrix& s = sigma.matrix();
  const std::size_t p = sigma.p();
  if (weights.p() != p) throw InputError("penalty weights and covariance differ in size");
  if ((s.diagonal().array() <= 0.0).any()) {
    throw InitializationError("covariance has a non-positive diagonal entry; cannot initialise Omega");
  }

  const auto dim = static_cast<Eigen::Index>(p);
  AdmmState state{s.diagonal().cwiseInverse().asDiagonal(), Matrix::Zero(dim, dim), Matrix::Zero(dim, dim),
                  cfg.rho0};

  InnerResult result;
  ConvergenceCheck check;
  std::size_t k = 0;
  while (!check.converged && k < cfg.k_inner_max) {
    detail::OmegaStep step = detail::omega_step(s, state.v, state.u, state.rho);
    Matrix v_next = v_update(step.omega, state.u, weights, state.rho, cfg.thresholding);
    Matrix u_next = u_update(state.u, v_next, step.omega);
    check = check_convergence(step.omega, v_next, state.v, u_next, state.rho, cfg.tau_abs, cfg.tau_rel, p);
    ++k;
    if (!all_finite(step.omega) || !all_finite(v_next) || !all_finite(u_next)) {
      throw DivergenceError("ADMM iterate became non-finite at inner iteration " + std::to_string(k), k);
    }

    state.omega = std::move(step.omega);
    state.v = std::move(v_next);
    const double rho_used = state.rho;
    if (check.converged) {
      state.u = std::move(u_next);
    } else {
      std::tie(state.rho, state.u) = adapt_rho(state.rho, check.primal_residual, check.dual_residual, cfg.mu, u_next);
    }
    if (observer) observer(IterationView{k, state.omega, state.v, state.u, rho_used, step.min_eigenvalue, check});
  }

  result.omega = std::move(state.omega);
  result.v = std::move(state.v);
  result.u = std::move(state.u);
  result.rho = state.rho;
  result.iterations = k;
  result.converged = check.converged;
  result.primal_residual = check.primal_residual;
  result.dual_residual = check.dual_residual;
  return result;
}

/// tr(Sigma Omega) - log|Omega| + sum_{i != j} lambda_ij |Omega_ij|.
inline double weighted_lasso_objective(const Matrix& omega, const SampleCovariance& sigma,
                                       const PenaltyWeights& weights) {
  const double fit = (sigma.matrix().cwiseProduct(omega)).sum() - log_det_pd(omega);
  Matrix penalty = weights.matrix().cwiseProduct(omega.cwiseAbs());
  penalty.diagonal().setZero();
  return fit + penalty.sum();
}

/// Omega with its off-diagonal replaced by the (exactly sparse) V.
inline Matrix project_offdiagonal(const Matrix& omega, const Matrix& v) {
  Matrix out = v;
  out.diagonal() = omega.diagonal();
  return out;
}

}  // namespace lapgraph
