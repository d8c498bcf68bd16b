#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "lapgraph/lsp.hpp"
#include "lapgraph/metrics.hpp"
#include "lapgraph/synth.hpp"
#include "support/oracles.hpp"

using namespace lapgraph;

namespace {

SampleCovariance random_covariance(std::mt19937_64& gen, Eigen::Index p, Eigen::Index n) {
  const Matrix mix = Matrix::Identity(p, p) + 0.4 * oracle::random_samples(gen, p, p);
  return sample_covariance(SampleMatrix(oracle::random_samples(gen, n, p) * mix));
}

}  // namespace

TEST(LspWeights, Examples) {
  const PenaltyWeights zero = lsp_weights(Matrix::Identity(2, 2), 1.0, 1e-5);
  EXPECT_NEAR(zero(0, 1), 1e5, 1e-6);
  EXPECT_EQ(zero(0, 0), 0.0);
  Matrix om = Matrix::Identity(2, 2);
  om(0, 1) = om(1, 0) = -1.0;
  EXPECT_NEAR(lsp_weights(om, 1.0, 1e-5)(0, 1), 1.0 / (1.0 + 1e-5), 1e-15);
  EXPECT_THROW(lsp_weights(om, 0.0, 1e-5), ConfigError);
  EXPECT_THROW(lsp_weights(om, 1.0, 0.0), ConfigError);
}

TEST(LspWeights, ElementwiseFormulaAndExactSymmetry) {
  std::mt19937_64 gen(51);
  const Matrix om = oracle::random_symmetric(gen, 9);
  const PenaltyWeights w = lsp_weights(om, 0.3, 1e-3);
  for (Eigen::Index i = 0; i < 9; ++i) {
    for (Eigen::Index j = 0; j < 9; ++j) {
      EXPECT_EQ(w(i, j), w(j, i));
      if (i == j) {
        EXPECT_EQ(w(i, j), 0.0);
      } else {
        EXPECT_NEAR(w(i, j), 0.3 / (std::abs(om(i, j)) + 1e-3), 1e-12);
      }
    }
  }
  // a slightly asymmetric iterate still gives exactly symmetric weights
  Matrix skew = om;
  skew(0, 1) += 1e-12;
  const PenaltyWeights ws = lsp_weights(skew, 0.3, 1e-3);
  EXPECT_EQ(ws.matrix(), ws.matrix().transpose());
}

TEST(LspObjective, Examples) {
  const SampleCovariance eye(Matrix::Identity(3, 3));
  EXPECT_NEAR(lsp_objective(Matrix::Identity(3, 3), eye, 0.7, 1e-5), 3.0, 1e-14);

  const double eps = 1e-5, lambda = 0.4;
  const double b = -eps * (std::numbers::e - 1.0);
  Matrix om = Matrix::Identity(2, 2);
  om(0, 1) = om(1, 0) = b;
  const SampleCovariance eye2(Matrix::Identity(2, 2));
  const double fit = 2.0 - std::log(1.0 - b * b);
  EXPECT_NEAR(lsp_objective(om, eye2, lambda, eps) - fit, 2.0 * lambda, 1e-12);
}

TEST(LspObjective, MatchesSummationOracle) {
  std::mt19937_64 gen(52);
  for (int trial = 0; trial < 5; ++trial) {
    const SampleCovariance s = random_covariance(gen, 5, 30);
    const Matrix om = oracle::random_psd(gen, 5, 9) + 0.5 * Matrix::Identity(5, 5);
    double expect = -oracle::jacobi(om).values.array().log().sum();
    for (Eigen::Index i = 0; i < 5; ++i) {
      for (Eigen::Index j = 0; j < 5; ++j) {
        expect += s.matrix()(i, j) * om(i, j);
        if (i != j) expect += 0.2 * std::log(1.0 + std::abs(om(i, j)) / 1e-4);
      }
    }
    EXPECT_NEAR(lsp_objective(om, s, 0.2, 1e-4), expect, 1e-10);
  }
}

TEST(LspObjective, NotPositiveDefiniteIsDomainError) {
  Matrix om(2, 2);
  om << 1, 2, 2, 1;
  EXPECT_THROW(lsp_objective(om, SampleCovariance(Matrix::Identity(2, 2)), 0.1, 1e-5), DomainError);
}

TEST(EstimatorSpec, ModeMatchesOuterCount) {
  const EstimatorSpec cl = EstimatorSpec::make(0.1, EstimatorMode::kConstrainedLasso);
  EXPECT_EQ(cl.solver.k_outer_max, 1u);
  EXPECT_EQ(cl.mode(), EstimatorMode::kConstrainedLasso);
  SolverConfig one;
  one.k_outer_max = 1;
  const EstimatorSpec cal = EstimatorSpec::make(0.1, EstimatorMode::kConstrainedAdaptiveLasso, one);
  EXPECT_GE(cal.solver.k_outer_max, 2u);
  EXPECT_EQ(cal.mode(), EstimatorMode::kConstrainedAdaptiveLasso);
  EXPECT_EQ(cal.with_lambda(0.5).solver.lambda0, 0.5);
}

TEST(Estimate, ConstrainedLassoIsOneUniformSolve) {
  std::mt19937_64 gen(53);
  const SampleCovariance s = random_covariance(gen, 7, 40);
  const EstimatorSpec spec = EstimatorSpec::make(0.08, EstimatorMode::kConstrainedLasso);
  const GraphEstimate est = estimate(s, spec);
  const InnerResult direct = solve_inner(s, PenaltyWeights::uniform(7, 0.08), spec.solver);
  EXPECT_EQ(est.omega_hat, direct.omega);
  EXPECT_EQ(est.v, direct.v);
  ASSERT_EQ(est.diagnostics.size(), 1u);
  EXPECT_EQ(est.diagnostics[0].inner_iterations, direct.iterations);
}

TEST(Estimate, SecondPassUsesReweightedFirstOmega) {
  std::mt19937_64 gen(54);
  const SampleCovariance s = random_covariance(gen, 6, 40);
  const EstimatorSpec spec = EstimatorSpec::make(0.05, EstimatorMode::kConstrainedAdaptiveLasso);
  Matrix first;
  EstimateHooks hooks;
  hooks.on_outer = [&](std::size_t outer, const InnerResult& r) {
    if (outer == 1) first = r.omega;
  };
  const GraphEstimate est = estimate(s, spec, hooks);
  const InnerResult second = solve_inner(s, lsp_weights(first, 0.05, spec.solver.epsilon), spec.solver);
  EXPECT_EQ(est.omega_hat, second.omega);
  EXPECT_EQ(est.diagnostics.size(), 2u);
}

TEST(Estimate, MajorizeMinimizeDescent) {
  std::mt19937_64 gen(55);
  std::uniform_real_distribution<double> ul(0.01, 0.2);
  for (int trial = 0; trial < 24; ++trial) {
    const Eigen::Index p = 4 + trial % 6;
    const SampleCovariance s = random_covariance(gen, p, 3 * p + 10);
    SolverConfig cfg;
    cfg.k_outer_max = 4;
    const GraphEstimate est = estimate(s, EstimatorSpec::make(ul(gen), EstimatorMode::kConstrainedAdaptiveLasso, cfg));
    ASSERT_EQ(est.diagnostics.size(), 4u);
    for (std::size_t k = 1; k < est.diagnostics.size(); ++k) {
      EXPECT_LE(est.diagnostics[k].lsp_objective, est.diagnostics[k - 1].lsp_objective + 1e-6)
          << "trial " << trial << " outer " << k + 1;
    }
  }
}

TEST(Estimate, ErrorsCarryOuterIteration) {
  Matrix sm = Matrix::Identity(3, 3);
  sm(1, 1) = 0.0;
  try {
    estimate(SampleCovariance(sm), EstimatorSpec::make(0.1, EstimatorMode::kConstrainedAdaptiveLasso));
    FAIL() << "expected InitializationError";
  } catch (const InitializationError& e) {
    EXPECT_NE(std::string(e.what()).find("outer iteration 1"), std::string::npos);
  }
}

TEST(Estimate, SmallChainRecoveredForSomeLambda) {
  Rng rng(7);
  SynthSpec spec;
  spec.p = 10;
  const GroundTruthModel truth = make_ground_truth(spec, rng);
  const SampleCovariance s = sample_covariance(SampleMatrix(sample_gaussian(truth.phi, 2000, rng)));
  double best = 0.0;
  for (double lambda = 1e-3; lambda < 2.0; lambda *= 2.0) {
    const GraphEstimate est = estimate(s, EstimatorSpec::make(lambda, EstimatorMode::kConstrainedAdaptiveLasso));
    best = std::max(best, f1_score(est.edges, truth.edges0).f1);
  }
  EXPECT_EQ(best, 1.0);
}

TEST(Estimate, EdgeCountShrinksAlongLambdaForConstrainedLasso) {
  Rng rng(8);
  SynthSpec spec;
  spec.graph = GraphKind::kErdosRenyi;
  spec.p = 20;
  spec.p_er = 0.15;
  const GroundTruthModel truth = make_ground_truth(spec, rng);
  const SampleCovariance s = sample_covariance(SampleMatrix(sample_gaussian(truth.phi, 200, rng)));
  std::size_t previous = std::numeric_limits<std::size_t>::max();
  for (double lambda = 1e-3; lambda < 5.0; lambda *= 1.8) {
    const std::size_t edges = estimate(s, EstimatorSpec::make(lambda, EstimatorMode::kConstrainedLasso)).edges.size();
    EXPECT_LE(edges, previous) << "lambda " << lambda;
    previous = edges;
  }
}
