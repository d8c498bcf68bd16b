#pragma once

// Ground-truth Laplacian precision models and Gaussian sampling.
//
// Reproducibility: every random draw goes through Rng, which wraps
// std::mt19937_64 (its output sequence is fixed by the C++ standard) and
// derives uniforms and normals itself instead of using the
// implementation-defined <random> distributions.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lapgraph/error.hpp"
#include "lapgraph/graph.hpp"
#include "lapgraph/matrix_core.hpp"

namespace lapgraph {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound) by rejection, bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal() {
    if (spare_) {
      const double z = *spare_;
      spare_.reset();
      return z;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    return r * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

enum class GraphKind { kChain, kErdosRenyi, kTwoComponentErdosRenyi };

inline const char* to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::kChain:
      return "chain";
    case GraphKind::kErdosRenyi:
      return "er";
    case GraphKind::kTwoComponentErdosRenyi:
      return "er2";
  }
  return "?";
}

inline GraphKind parse_graph_kind(const std::string& s) {
  if (s == "chain") return GraphKind::kChain;
  if (s == "er") return GraphKind::kErdosRenyi;
  if (s == "er2") return GraphKind::kTwoComponentErdosRenyi;
  throw ConfigError("unknown graph kind '" + s + "' (expected chain, er or er2)");
}

/// Path 1 - 2 - ... - p.
inline EdgeSet chain_graph(std::size_t p) {
  if (p < 2) throw InputError("chain graph needs p >= 2");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < p; ++i) edges.push_back({i, i + 1});
  return EdgeSet(p, std::move(edges));
}

namespace detail {

// Erdos-Renyi on nodes [offset, offset + size) of a p-node edge set, with isolated-node repair.
inline void add_er_block(EdgeSet& edges, std::size_t offset, std::size_t size, double p_er, Rng& rng) {
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = i + 1; j < size; ++j) {
      if (rng.uniform() < p_er) edges.insert(offset + i, offset + j);
    }
  }
  if (size < 2) return;
  std::vector<std::size_t> deg(size, 0);
  for (const Edge& e : edges) {
    if (e.i >= offset && e.j < offset + size) {
      ++deg[e.i - offset];
      ++deg[e.j - offset];
    }
  }
  for (std::size_t i = 0; i < size; ++i) {
    if (deg[i] > 0) continue;
    std::size_t j = static_cast<std::size_t>(rng.below(size - 1));
    if (j >= i) ++j;
    edges.insert(offset + i, offset + j);
    ++deg[i];
    ++deg[j];
  }
}

}  // namespace detail

/// G(p, p_er); afterwards every isolated node (ascending index) is joined to a
/// uniformly chosen other node.
inline EdgeSet er_graph(std::size_t p, double p_er, Rng& rng) {
  if (p < 2) throw InputError("Erdos-Renyi graph needs p >= 2");
  if (!(p_er >= 0.0 && p_er <= 1.0)) throw InputError("edge probability must lie in [0, 1]");
  EdgeSet edges(p);
  detail::add_er_block(edges, 0, p, p_er, rng);
  return edges;
}

/// Two independent Erdos-Renyi blocks on nodes [0, p/2) and [p/2, p), no cross edges.
inline EdgeSet two_component_er_graph(std::size_t p, double p_er, Rng& rng) {
  if (p < 4) throw InputError("two-component graph needs p >= 4");
  if (!(p_er >= 0.0 && p_er <= 1.0)) throw InputError("edge probability must lie in [0, 1]");
  EdgeSet edges(p);
  const std::size_t half = p / 2;
  detail::add_er_block(edges, 0, half, p_er, rng);
  detail::add_er_block(edges, half, p - half, p_er, rng);
  return edges;
}

inline EdgeSet make_graph(GraphKind kind, std::size_t p, double p_er, Rng& rng) {
  switch (kind) {
    case GraphKind::kChain:
      return chain_graph(p);
    case GraphKind::kErdosRenyi:
      return er_graph(p, p_er, rng);
    case GraphKind::kTwoComponentErdosRenyi:
      return two_component_er_graph(p, p_er, rng);
  }
  throw ConfigError("unknown graph kind");
}

inline constexpr double kWeightLow = 0.1;
inline constexpr double kWeightHigh = 0.3;

/// Combinatorial Laplacian with off-diagonals drawn from U[-0.3, -0.1] on the edges,
/// in ascending edge order.
inline Matrix laplacian_precision(const EdgeSet& edges, Rng& rng) {
  const auto p = static_cast<Eigen::Index>(edges.p());
  Matrix omega = Matrix::Zero(p, p);
  for (const Edge& e : edges) {
    const double w = rng.uniform(kWeightLow, kWeightHigh);
    const auto i = static_cast<Eigen::Index>(e.i);
    const auto j = static_cast<Eigen::Index>(e.j);
    omega(i, j) = -w;
    omega(j, i) = -w;
  }
  for (Eigen::Index i = 0; i < p; ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (j != i) s += omega(i, j);
    }
    omega(i, i) = -s;
  }
  return omega;
}

struct ShiftedModel {
  Matrix omega_true;  // Omega0 + kappa I
  Matrix phi;         // phi * phi' = pinv(omega_true)
};

inline ShiftedModel shift_and_factor(const Matrix& omega0, double kappa) {
  if (!(kappa >= 0.0)) throw InputError("kappa must be nonnegative");
  Matrix shifted = omega0;
  shifted.diagonal().array() += kappa;
  Matrix phi = pinv_sqrt_factor(shifted);
  return {std::move(shifted), std::move(phi)};
}

/// n rows, each phi * w with w ~ N(0, I) drawn component by component.
inline Matrix sample_gaussian(const Matrix& phi, std::size_t n, Rng& rng) {
  if (n < 1) throw InputError("need at least one sample");
  const Eigen::Index p = phi.rows();
  Matrix w(p, static_cast<Eigen::Index>(n));
  for (Eigen::Index t = 0; t < w.cols(); ++t) {
    for (Eigen::Index k = 0; k < p; ++k) w(k, t) = rng.normal();
  }
  return (phi * w).transpose();
}

struct GroundTruthModel {
  Matrix omega0;
  double kappa = 0.0;
  EdgeSet edges0;
  Matrix omega_true;
  Matrix phi;
};

struct SynthSpec {
  GraphKind graph = GraphKind::kChain;
  std::size_t p = 100;
  double p_er = 0.03;
  double kappa = 0.0;
};

inline GroundTruthModel make_ground_truth(const SynthSpec& spec, Rng& rng) {
  GroundTruthModel model;
  model.edges0 = make_graph(spec.graph, spec.p, spec.p_er, rng);
  model.omega0 = laplacian_precision(model.edges0, rng);
  model.kappa = spec.kappa;
  ShiftedModel shifted = shift_and_factor(model.omega0, spec.kappa);
  model.omega_true = std::move(shifted.omega_true);
  model.phi = std::move(shifted.phi);
  return model;
}

}  // namespace lapgraph
