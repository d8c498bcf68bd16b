#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "lapgraph/error.hpp"
#include "lapgraph/matrix_core.hpp"

namespace lapgraph {

/// Undirected edge {i, j}, stored 0-based with i < j.
struct Edge {
  std::size_t i;
  std::size_t j;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Sorted, duplicate-free set of undirected edges on p nodes.
class EdgeSet {
 public:
  EdgeSet() = default;
  explicit EdgeSet(std::size_t p) : p_(p) {}
  EdgeSet(std::size_t p, std::vector<Edge> edges) : p_(p), edges_(std::move(edges)) {
    for (Edge& e : edges_) {
      if (e.i == e.j) throw InputError("self-loop in edge set");
      if (e.i > e.j) std::swap(e.i, e.j);
      if (e.j >= p_) throw InputError("edge index out of range");
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  }

  /// Adds {i, j}; returns false if it was already present.
  bool insert(std::size_t i, std::size_t j) {
    if (i == j) throw InputError("self-loop in edge set");
    if (i > j) std::swap(i, j);
    if (j >= p_) throw InputError("edge index out of range");
    const Edge e{i, j};
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it != edges_.end() && *it == e) return false;
    edges_.insert(it, e);
    return true;
  }

  bool contains(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return std::binary_search(edges_.begin(), edges_.end(), Edge{i, j});
  }

  std::size_t p() const noexcept { return p_; }
  std::size_t size() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return edges_.empty(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  auto begin() const noexcept { return edges_.begin(); }
  auto end() const noexcept { return edges_.end(); }

  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> deg(p_, 0);
    for (const Edge& e : edges_) {
      ++deg[e.i];
      ++deg[e.j];
    }
    return deg;
  }

  /// Number of connected components, isolated nodes included.
  std::size_t component_count() const {
    std::vector<std::size_t> parent(p_);
    for (std::size_t k = 0; k < p_; ++k) parent[k] = k;
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::size_t count = p_;
    for (const Edge& e : edges_) {
      const std::size_t a = find(e.i);
      const std::size_t b = find(e.j);
      if (a != b) {
        parent[a] = b;
        --count;
      }
    }
    return count;
  }

  friend bool operator==(const EdgeSet&, const EdgeSet&) = default;

 private:
  std::size_t p_ = 0;
  std::vector<Edge> edges_;
};

/// One outer (reweighting) pass of the estimator.
struct OuterRecord {
  std::size_t outer_iteration = 0;  // 1-based
  double lsp_objective = 0.0;
  std::size_t inner_iterations = 0;
  bool converged = false;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  std::size_t edge_count = 0;
};

struct GraphEstimate {
  Matrix omega_hat;
  Matrix v;
  Matrix w_hat;
  Matrix laplacian_hat;
  EdgeSet edges;
  std::vector<OuterRecord> diagnostics;

  bool converged() const {
    return std::all_of(diagnostics.begin(), diagnostics.end(), [](const OuterRecord& r) { return r.converged; });
  }
};

/// {i, j} is an edge iff V_ij is exactly nonzero.
inline EdgeSet extract_edges(const Matrix& v) {
  if (v.rows() != v.cols()) throw InputError("edge extraction needs a square matrix");
  const auto p = static_cast<std::size_t>(v.rows());
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      if (v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0.0) edges.push_back({i, j});
    }
  }
  return EdgeSet(p, std::move(edges));
}

/// W_ij = max(0, -Omega_ij) on the edge set, zero elsewhere.
inline Matrix build_weights(const Matrix& omega_hat, const EdgeSet& edges) {
  const Eigen::Index p = omega_hat.rows();
  if (omega_hat.cols() != p || static_cast<std::size_t>(p) != edges.p()) {
    throw InputError("weight matrix and edge set differ in size");
  }
  Matrix w = Matrix::Zero(p, p);
  for (const Edge& e : edges) {
    const auto i = static_cast<Eigen::Index>(e.i);
    const auto j = static_cast<Eigen::Index>(e.j);
    // average the two triangles so the result is symmetric even for a slightly asymmetric input
    const double x = std::max(0.0, -0.5 * (omega_hat(i, j) + omega_hat(j, i)));
    w(i, j) = x;
    w(j, i) = x;
  }
  return w;
}

/// Combinatorial Laplacian D - W.
inline Matrix build_laplacian(const Matrix& w) {
  if (w.rows() != w.cols()) throw InputError("weight matrix must be square");
  if ((w.array() < 0.0).any()) throw InputError("weight matrix has a negative entry");
  if (!is_symmetric(w, 1e-12)) throw InputError("weight matrix is not symmetric");
  Matrix l = -w;
  l.diagonal().setZero();
  for (Eigen::Index i = 0; i < l.rows(); ++i) l(i, i) = -l.row(i).sum();
  return l;
}

/// Estimated off-diagonal precision restricted to the edge set (signs kept).
inline Matrix masked_offdiagonal(const Matrix& omega_hat, const EdgeSet& edges) {
  Matrix out = Matrix::Zero(omega_hat.rows(), omega_hat.cols());
  for (const Edge& e : edges) {
    const auto i = static_cast<Eigen::Index>(e.i);
    const auto j = static_cast<Eigen::Index>(e.j);
    const double x = 0.5 * (omega_hat(i, j) + omega_hat(j, i));
    out(i, j) = x;
    out(j, i) = x;
  }
  return out;
}

}  // namespace lapgraph
