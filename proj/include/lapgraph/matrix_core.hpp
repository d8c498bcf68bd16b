#pragma once

// Dense symmetric matrix primitives shared by the solver and the synthetic sampler.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "lapgraph/error.hpp"

namespace lapgraph {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Eigenvalues at or below this fraction of the largest one count as zero.
inline constexpr double kPinvRankTol = 1e-9;

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

inline Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

inline bool is_symmetric(const Matrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

/// n x p observation matrix, rows are observations. Validated on construction.
class SampleMatrix {
 public:
  explicit SampleMatrix(Matrix data) : data_(std::move(data)) {
    if (data_.rows() < 2 || data_.cols() < 1) {
      throw InputError("sample matrix needs at least 2 rows and 1 column, got " +
                       std::to_string(data_.rows()) + "x" + std::to_string(data_.cols()));
    }
    if (!all_finite(data_)) throw InputError("sample matrix contains non-finite entries");
  }

  const Matrix& data() const noexcept { return data_; }
  std::size_t n() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  std::size_t p() const noexcept { return static_cast<std::size_t>(data_.cols()); }

 private:
  Matrix data_;
};

/// p x p sample covariance. Exactly symmetric.
class SampleCovariance {
 public:
  explicit SampleCovariance(Matrix sigma) : sigma_(std::move(sigma)) {
    if (sigma_.rows() != sigma_.cols() || sigma_.rows() < 1) {
      throw InputError("covariance must be a non-empty square matrix");
    }
    if (!all_finite(sigma_)) throw InputError("covariance contains non-finite entries");
    if (!is_symmetric(sigma_, 1e-12)) throw InputError("covariance is not symmetric");
    sigma_ = symmetrize(sigma_);
  }

  const Matrix& matrix() const noexcept { return sigma_; }
  std::size_t p() const noexcept { return static_cast<std::size_t>(sigma_.rows()); }

 private:
  Matrix sigma_;
};

struct EigenDecomposition {
  Matrix q;  // columns are eigenvectors
  Vector d;  // ascending
};

/// (1/n) Xc' Xc with Xc the column-centred samples.
inline SampleCovariance sample_covariance(const SampleMatrix& x) {
  const Matrix& data = x.data();
  const Matrix centred = data.rowwise() - data.colwise().mean();
  Matrix sigma = (centred.transpose() * centred) / static_cast<double>(x.n());
  // mirror the upper triangle so the result is bit-for-bit symmetric
  sigma.triangularView<Eigen::StrictlyLower>() = sigma.transpose().triangularView<Eigen::StrictlyLower>();
  return SampleCovariance(std::move(sigma));
}

/// Centre each column and scale it to unit variance (1/n convention).
inline SampleMatrix standardize(const SampleMatrix& x) {
  Matrix out = x.data();
  const double n = static_cast<double>(x.n());
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const double mean = out.col(j).mean();
    out.col(j).array() -= mean;
    const double var = out.col(j).squaredNorm() / n;
    if (!(var > 0.0)) throw DegenerateColumnError(static_cast<std::size_t>(j));
    out.col(j) /= std::sqrt(var);
  }
  return SampleMatrix(std::move(out));
}

inline EigenDecomposition sym_eigendecompose(const Matrix& a) {
  if (a.rows() != a.cols()) throw InputError("eigendecomposition needs a square matrix");
  if (!all_finite(a)) throw InputError("eigendecomposition input contains non-finite entries");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(a));
  if (solver.info() != Eigen::Success) throw DomainError("symmetric eigensolver did not converge");
  return {solver.eigenvectors(), solver.eigenvalues()};
}

/// Phi = Q diag(d) Q' with d_i = 1/sqrt(D_i) on the numerical range of A, so that Phi Phi' = A^+.
inline Matrix pinv_sqrt_factor(const Matrix& a, double tol = kPinvRankTol) {
  const EigenDecomposition eig = sym_eigendecompose(a);
  const double top = eig.d.size() > 0 ? std::max(0.0, eig.d.maxCoeff()) : 0.0;
  Vector scale(eig.d.size());
  for (Eigen::Index i = 0; i < eig.d.size(); ++i) {
    const double di = eig.d(i);
    if (di < -tol * top) {
      throw NotPsdError("matrix has eigenvalue " + std::to_string(di) + " below the PSD tolerance");
    }
    scale(i) = di > tol * top ? 1.0 / std::sqrt(di) : 0.0;
  }
  return symmetrize(eig.q * scale.asDiagonal() * eig.q.transpose());
}

/// log|A| through a Cholesky factorisation; throws DomainError if A is not PD.
inline double log_det_pd(const Matrix& a) {
  Eigen::LLT<Matrix> llt(symmetrize(a));
  if (llt.info() != Eigen::Success) throw DomainError("matrix is not positive definite");
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

inline bool is_positive_definite(const Matrix& a) {
  Eigen::LLT<Matrix> llt(symmetrize(a));
  return llt.info() == Eigen::Success;
}

}  // namespace lapgraph
