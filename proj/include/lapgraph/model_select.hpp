#pragma once

// BIC-based choice of lambda over a log-spaced grid anchored at the smallest
// lambda that produces an empty graph.

#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "lapgraph/error.hpp"
#include "lapgraph/graph.hpp"
#include "lapgraph/lsp.hpp"
#include "lapgraph/matrix_core.hpp"
#include "lapgraph/parallel.hpp"

namespace lapgraph {

enum class GridRange { kSynthetic, kReal };

inline const char* to_string(GridRange range) { return range == GridRange::kSynthetic ? "synthetic" : "real"; }

inline GridRange parse_grid_range(const std::string& s) {
  if (s == "synthetic") return GridRange::kSynthetic;
  if (s == "real") return GridRange::kReal;
  throw ConfigError("unknown grid range '" + s + "' (expected synthetic or real)");
}

struct LambdaGrid {
  std::vector<double> values;  // ascending
  double lambda_sm = 0.0;
  GridRange range = GridRange::kSynthetic;
};

struct SelectionRecord {
  double lambda = 0.0;
  double bic = 0.0;
  std::size_t edge_count = 0;
  bool converged = false;
};

struct SelectionReport {
  LambdaGrid grid;
  std::vector<SelectionRecord> records;
  std::size_t chosen_index = 0;
  double lambda_star = 0.0;
  GraphEstimate chosen;
};

/// Unpenalised Gaussian fit tr(Sigma Omega) - log|Omega|.
inline double gaussian_fit(const SampleCovariance& sigma, const Matrix& omega_hat) {
  return (sigma.matrix().cwiseProduct(omega_hat)).sum() - log_det_pd(omega_hat);
}

/// tr(Sigma Omega) - log|Omega| + (ln n / n) * |E|.
inline double bic(const SampleCovariance& sigma, const Matrix& omega_hat, std::size_t edge_count, std::size_t n) {
  if (n < 2) throw InputError("BIC needs n >= 2");
  const double nn = static_cast<double>(n);
  return gaussian_fit(sigma, omega_hat) + std::log(nn) / nn * static_cast<double>(edge_count);
}

inline constexpr double kLambdaSmRelativeWidth = 1.05;
inline constexpr double kLambdaSmCeiling = 1e6;
inline constexpr double kLambdaSmFloor = 1e-6;

/// Smallest lambda (to 5% relative width) whose estimate has no edges.
///
/// Starts at the largest off-diagonal |Sigma_ij| (largest diagonal entry if the
/// off-diagonal is zero), halves until edges appear or doubles until they
/// vanish, then bisects geometrically. Returns the no-edge end of the bracket;
/// if even the floor (1e-6 x start) has no edges, returns the floor.
inline double find_lambda_sm(const SampleCovariance& sigma, const EstimatorSpec& spec,
                             const EstimateHooks& hooks = {}) {
  const Matrix off = sigma.matrix() - Matrix(sigma.matrix().diagonal().asDiagonal());
  double scale = off.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) scale = sigma.matrix().diagonal().cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) throw InputError("covariance is identically zero");

  auto no_edges = [&](double lambda) {
    try {
      return estimate(sigma, spec.with_lambda(lambda), hooks).edges.empty();
    } catch (const Error&) {
      std::ostringstream os;
      os << "lambda " << lambda;
      rethrow_with_context(os.str());
    }
  };

  const double floor = kLambdaSmFloor * scale;
  const double ceiling = kLambdaSmCeiling * scale;
  double lo = 0.0;  // has edges
  double hi = 0.0;  // no edges
  if (no_edges(scale)) {
    hi = scale;
    for (double lambda = scale / 2.0;; lambda /= 2.0) {
      if (lambda < floor) return floor;
      if (!no_edges(lambda)) {
        lo = lambda;
        break;
      }
      hi = lambda;
    }
  } else {
    lo = scale;
    for (double lambda = 2.0 * scale;; lambda *= 2.0) {
      if (lambda > ceiling) {
        std::ostringstream os;
        os << "no empty-graph lambda found up to " << ceiling;
        throw SearchFailure(os.str());
      }
      if (no_edges(lambda)) {
        hi = lambda;
        break;
      }
      lo = lambda;
    }
  }
  while (hi / lo > kLambdaSmRelativeWidth) {
    const double mid = std::sqrt(lo * hi);
    if (no_edges(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

/// `count` log-spaced values; synthetic spans [sm/100, sm], real spans [sm/160, sm/4].
inline LambdaGrid lambda_grid(double lambda_sm, GridRange range, std::size_t count = 10) {
  if (!(lambda_sm > 0.0)) throw InputError("lambda_sm must be positive");
  if (count < 2) throw ConfigError("lambda grid needs at least two points");
  const double upper = range == GridRange::kSynthetic ? lambda_sm : lambda_sm / 4.0;
  const double lower = range == GridRange::kSynthetic ? upper / 100.0 : upper / 40.0;
  LambdaGrid grid;
  grid.lambda_sm = lambda_sm;
  grid.range = range;
  grid.values.resize(count);
  const double step = std::log(upper / lower) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) grid.values[k] = lower * std::exp(step * static_cast<double>(k));
  grid.values.front() = lower;
  grid.values.back() = upper;
  return grid;
}

/// Estimates at every grid point and keeps the minimum-BIC model (ties go to the smaller lambda).
inline SelectionReport select_lambda(const SampleCovariance& sigma, std::size_t n, const EstimatorSpec& spec,
                                     GridRange range, std::size_t grid_size = 10, std::size_t threads = 1,
                                     const EstimateHooks& hooks = {}) {
  SelectionReport report;
  report.grid = lambda_grid(find_lambda_sm(sigma, spec, hooks), range, grid_size);
  const std::size_t count = report.grid.values.size();
  std::vector<GraphEstimate> estimates(count);
  report.records.resize(count);
  parallel_for(count, threads, [&](std::size_t k) {
    const double lambda = report.grid.values[k];
    try {
      estimates[k] = estimate(sigma, spec.with_lambda(lambda), hooks);
      report.records[k] = {lambda, bic(sigma, estimates[k].omega_hat, estimates[k].edges.size(), n),
                           estimates[k].edges.size(), estimates[k].converged()};
    } catch (const Error&) {
      std::ostringstream os;
      os << "lambda " << lambda;
      rethrow_with_context(os.str());
    }
  });
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < count; ++k) {
    if (report.records[k].bic < best) {
      best = report.records[k].bic;
      report.chosen_index = k;
    }
  }
  report.lambda_star = report.records[report.chosen_index].lambda;
  report.chosen = std::move(estimates[report.chosen_index]);
  return report;
}

inline SelectionReport select_lambda(const SampleMatrix& x, const EstimatorSpec& spec, GridRange range,
                                     std::size_t grid_size = 10, std::size_t threads = 1) {
  return select_lambda(sample_covariance(x), x.n(), spec, range, grid_size, threads);
}

}  // namespace lapgraph
