#pragma once

#include <cstddef>

#include "lapgraph/error.hpp"
#include "lapgraph/graph.hpp"
#include "lapgraph/matrix_core.hpp"

namespace lapgraph {

struct EdgeScore {
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

/// Edge-detection F1 against a ground-truth set. Empty estimates score zero precision.
inline EdgeScore f1_score(const EdgeSet& estimated, const EdgeSet& truth) {
  if (estimated.p() != truth.p()) throw InputError("edge sets are on different node counts");
  std::size_t hits = 0;
  for (const Edge& e : estimated) {
    if (truth.contains(e.i, e.j)) ++hits;
  }
  EdgeScore s;
  s.precision = estimated.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(estimated.size());
  s.recall = truth.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(truth.size());
  const double denom = s.precision + s.recall;
  s.f1 = denom > 0.0 ? 2.0 * s.precision * s.recall / denom : 0.0;
  return s;
}

enum class ScaleMode { kFixedOne, kLeastSquares };

struct FrobeniusError {
  double error = 0.0;
  double scale = 1.0;
};

inline Matrix offdiagonal(const Matrix& m) {
  Matrix out = m;
  out.diagonal().setZero();
  return out;
}

/// ||c * est_off - truth_off||_F / ||truth_off||_F on off-diagonal parts.
inline FrobeniusError frob_error(const Matrix& estimated, const Matrix& truth, ScaleMode mode) {
  if (estimated.rows() != truth.rows() || estimated.cols() != truth.cols()) {
    throw InputError("matrices differ in shape");
  }
  const Matrix est = offdiagonal(estimated);
  const Matrix ref = offdiagonal(truth);
  const double ref_norm = ref.norm();
  if (!(ref_norm > 0.0)) throw DomainError("reference off-diagonal is zero; normalised error undefined");
  FrobeniusError out;
  if (mode == ScaleMode::kLeastSquares) {
    const double denom = est.squaredNorm();
    out.scale = denom > 0.0 ? est.cwiseProduct(ref).sum() / denom : 0.0;
  }
  out.error = (out.scale * est - ref).norm() / ref_norm;
  return out;
}

}  // namespace lapgraph
