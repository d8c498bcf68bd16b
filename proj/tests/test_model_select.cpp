#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lapgraph/metrics.hpp"
#include "lapgraph/model_select.hpp"
#include "lapgraph/synth.hpp"
#include "support/oracles.hpp"

using namespace lapgraph;

namespace {

const EstimatorSpec kCal = EstimatorSpec::make(1.0, EstimatorMode::kConstrainedAdaptiveLasso);

}  // namespace

TEST(Bic, Examples) {
  const SampleCovariance eye(Matrix::Identity(4, 4));
  EXPECT_NEAR(bic(eye, Matrix::Identity(4, 4), 0, 10), 4.0, 1e-15);
  // n = e^2 is not an integer, so check the complexity slope through two edge counts
  const double n = 7.0;
  EXPECT_NEAR(bic(eye, Matrix::Identity(4, 4), 1, 7) - 4.0, std::log(n) / n, 1e-15);
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = bad(1, 0) = 3.0;
  EXPECT_THROW(bic(SampleCovariance(Matrix::Identity(2, 2)), bad, 0, 10), DomainError);
  EXPECT_THROW(bic(eye, Matrix::Identity(4, 4), 0, 1), InputError);
  // the n = e^2 example evaluated through the same closed form
  const double e2 = std::numbers::e * std::numbers::e;
  EXPECT_NEAR(4.0 + std::log(e2) / e2, 4.0 + 2.0 / e2, 1e-15);
}

TEST(Bic, MatchesTraceLogdetOracleAndIsAdditive) {
  std::mt19937_64 gen(71);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix x = oracle::random_samples(gen, 30, 5);
    const SampleCovariance s = sample_covariance(SampleMatrix(x));
    const Matrix om = oracle::random_psd(gen, 5, 8) + Matrix::Identity(5, 5);
    double tr = 0.0;
    for (Eigen::Index i = 0; i < 5; ++i)
      for (Eigen::Index j = 0; j < 5; ++j) tr += s.matrix()(i, j) * om(j, i);
    const double fit = tr - oracle::jacobi(om).values.array().log().sum();
    const std::size_t edges = static_cast<std::size_t>(trial);
    const double value = bic(s, om, edges, 30);
    EXPECT_NEAR(value, fit + std::log(30.0) / 30.0 * static_cast<double>(edges), 1e-10);
    EXPECT_EQ(value - std::log(30.0) / 30.0 * static_cast<double>(edges), gaussian_fit(s, om) + 0.0);
  }
}

TEST(LambdaGrid, Examples) {
  const LambdaGrid syn = lambda_grid(100.0, GridRange::kSynthetic);
  ASSERT_EQ(syn.values.size(), 10u);
  EXPECT_EQ(syn.values.front(), 1.0);
  EXPECT_EQ(syn.values.back(), 100.0);
  for (std::size_t k = 1; k < 10; ++k) {
    EXPECT_NEAR(syn.values[k] / syn.values[k - 1], std::pow(100.0, 1.0 / 9.0), 1e-10);
  }
  const LambdaGrid real = lambda_grid(100.0, GridRange::kReal);
  EXPECT_EQ(real.values.front(), 0.625);
  EXPECT_EQ(real.values.back(), 25.0);
  EXPECT_NEAR(real.values.back() / real.values.front(), 40.0, 1e-10);
  for (std::size_t k = 1; k < 10; ++k) {
    EXPECT_NEAR(real.values[k] / real.values[k - 1], std::pow(40.0, 1.0 / 9.0), 1e-10);
  }
  EXPECT_THROW(lambda_grid(0.0, GridRange::kSynthetic), InputError);
}

TEST(LambdaGrid, RatioInvariantAcrossScales) {
  for (double sm : {1e-4, 0.37, 12.0, 9e5}) {
    const LambdaGrid g = lambda_grid(sm, GridRange::kSynthetic);
    EXPECT_NEAR(g.values.back() / g.values.front(), 100.0, 1e-10 * 100.0);
    for (std::size_t k = 1; k < g.values.size(); ++k) EXPECT_LT(g.values[k - 1], g.values[k]);
  }
}

TEST(FindLambdaSm, IdentityCovarianceReturnsFloor) {
  const SampleCovariance eye(Matrix::Identity(3, 3));
  const double sm = find_lambda_sm(eye, kCal);
  EXPECT_EQ(sm, kLambdaSmFloor * 1.0);
  EXPECT_TRUE(estimate(eye, kCal.with_lambda(sm)).edges.empty());
}

TEST(FindLambdaSm, BracketsTheEmptyGraph) {
  Matrix s(2, 2);
  s << 1.0, 0.9, 0.9, 1.0;
  const SampleCovariance sigma(s);
  const double sm = find_lambda_sm(sigma, kCal);
  EXPECT_TRUE(estimate(sigma, kCal.with_lambda(sm)).edges.empty());
  EXPECT_GE(estimate(sigma, kCal.with_lambda(sm / 2.0)).edges.size(), 1u);
  EXPECT_EQ(find_lambda_sm(sigma, kCal), sm);
}

TEST(FindLambdaSm, BracketWidthOnRandomData) {
  std::mt19937_64 gen(72);
  const Matrix mix = Matrix::Identity(6, 6) - 0.3 * Matrix::Ones(6, 6) / 6.0;
  const SampleCovariance s = sample_covariance(SampleMatrix(oracle::random_samples(gen, 100, 6) * mix));
  const EstimatorSpec cl = EstimatorSpec::make(1.0, EstimatorMode::kConstrainedLasso);
  const double sm = find_lambda_sm(s, cl);
  EXPECT_TRUE(estimate(s, cl.with_lambda(sm)).edges.empty());
  EXPECT_GE(estimate(s, cl.with_lambda(sm / kLambdaSmRelativeWidth)).edges.size(), 1u);
}

TEST(SelectLambda, ChainRecovery) {
  Rng rng(73);
  SynthSpec spec;
  spec.p = 20;
  const GroundTruthModel truth = make_ground_truth(spec, rng);
  const SampleMatrix x(sample_gaussian(truth.phi, 2000, rng));
  const SelectionReport report = select_lambda(x, kCal, GridRange::kSynthetic);
  ASSERT_EQ(report.records.size(), 10u);
  EXPECT_GE(f1_score(report.chosen.edges, truth.edges0).f1, 0.95);
  // the choice attains the minimum, earliest among ties
  for (std::size_t k = 0; k < 10; ++k) {
    EXPECT_GE(report.records[k].bic, report.records[report.chosen_index].bic);
    if (k < report.chosen_index) {
      EXPECT_GT(report.records[k].bic, report.records[report.chosen_index].bic);
    }
    EXPECT_EQ(report.records[k].lambda, report.grid.values[k]);
  }
  EXPECT_EQ(report.lambda_star, report.grid.values[report.chosen_index]);
  EXPECT_EQ(report.chosen.edges.size(), report.records[report.chosen_index].edge_count);

  const SelectionReport again = select_lambda(x, kCal, GridRange::kSynthetic, 10, 3);
  EXPECT_EQ(again.lambda_star, report.lambda_star);
  EXPECT_EQ(again.chosen.omega_hat, report.chosen.omega_hat);
}

TEST(SelectLambda, IndependentDataGivesNearEmptyGraph) {
  std::mt19937_64 gen(74);
  const SampleMatrix x(oracle::random_samples(gen, 500, 8));
  const SelectionReport report = select_lambda(x, kCal, GridRange::kSynthetic);
  EXPECT_LE(report.chosen.edges.size(), 2u);
}

TEST(GridRange, Parsing) {
  EXPECT_EQ(parse_grid_range("real"), GridRange::kReal);
  EXPECT_THROW(parse_grid_range("other"), ConfigError);
}
