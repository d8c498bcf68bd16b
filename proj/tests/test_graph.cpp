#include <gtest/gtest.h>

#include <random>

#include "lapgraph/graph.hpp"
#include "lapgraph/lsp.hpp"
#include "support/oracles.hpp"

using namespace lapgraph;

namespace {

Matrix random_sparse_v(std::mt19937_64& gen, Eigen::Index p, double density, std::size_t& nonzeros) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix v = Matrix::Identity(p, p);
  nonzeros = 0;
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      if (u(gen) < density) {
        v(i, j) = v(j, i) = -u(gen) - 1e-3;
        ++nonzeros;
      }
    }
  }
  return v;
}

}  // namespace

TEST(EdgeSet, NormalisesAndValidates) {
  const EdgeSet e(4, {{2, 1}, {0, 3}, {1, 2}});
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e.edges()[0], (Edge{0, 3}));
  EXPECT_EQ(e.edges()[1], (Edge{1, 2}));
  EXPECT_TRUE(e.contains(3, 0));
  EXPECT_THROW(EdgeSet(3, {{1, 1}}), InputError);
  EXPECT_THROW(EdgeSet(3, {{0, 3}}), InputError);
  EdgeSet f(3);
  EXPECT_TRUE(f.insert(2, 0));
  EXPECT_FALSE(f.insert(0, 2));
  EXPECT_THROW(f.insert(1, 1), InputError);
}

TEST(EdgeSet, ComponentsAndDegrees) {
  const EdgeSet e(6, {{0, 1}, {1, 2}, {3, 4}});
  EXPECT_EQ(e.component_count(), 3u);  // {0,1,2}, {3,4}, {5}
  const auto deg = e.degrees();
  EXPECT_EQ(deg, (std::vector<std::size_t>{1, 2, 1, 1, 1, 0}));
}

TEST(ExtractEdges, Examples) {
  EXPECT_TRUE(extract_edges(Matrix::Identity(3, 3)).empty());
  Matrix v = Matrix::Identity(3, 3);
  v(0, 1) = v(1, 0) = -0.3;
  const EdgeSet e = extract_edges(v);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e.edges()[0], (Edge{0, 1}));
}

TEST(ExtractEdges, CountsUpperTriangleAndIsScaleFree) {
  std::mt19937_64 gen(41);
  for (int trial = 0; trial < 10; ++trial) {
    std::size_t nnz = 0;
    const Matrix v = random_sparse_v(gen, 15, 0.2, nnz);
    const EdgeSet e = extract_edges(v);
    EXPECT_EQ(e.size(), nnz);
    for (double c : {-3.0, 1e-8, 7.0}) EXPECT_EQ(extract_edges(c * v), e);
  }
}

TEST(BuildWeights, Examples) {
  Matrix om = Matrix::Identity(3, 3);
  om(0, 1) = om(1, 0) = -0.25;
  om(0, 2) = om(2, 0) = -0.5;  // not an edge
  om(1, 2) = om(2, 1) = 1e-9;  // edge with a wrong-signed Omega entry
  const EdgeSet e(3, {{0, 1}, {1, 2}});
  const Matrix w = build_weights(om, e);
  EXPECT_EQ(w(0, 1), 0.25);
  EXPECT_EQ(w(1, 0), 0.25);
  EXPECT_EQ(w(0, 2), 0.0);
  EXPECT_EQ(w(1, 2), 0.0);
  EXPECT_EQ(w.diagonal(), Vector::Zero(3));
  EXPECT_THROW(build_weights(om, EdgeSet(4)), InputError);
}

TEST(BuildLaplacian, Examples) {
  Matrix w = Matrix::Zero(2, 2);
  w(0, 1) = w(1, 0) = 1.0;
  Matrix expect(2, 2);
  expect << 1, -1, -1, 1;
  EXPECT_EQ(build_laplacian(w), expect);
  EXPECT_EQ(build_laplacian(Matrix::Zero(4, 4)), Matrix::Zero(4, 4));
  w(0, 1) = w(1, 0) = -0.1;
  EXPECT_THROW(build_laplacian(w), InputError);
}

TEST(BuildLaplacian, RowSumsAndPsd) {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index p = 5 + trial;
    Matrix w = Matrix::Zero(p, p);
    for (Eigen::Index i = 0; i < p; ++i)
      for (Eigen::Index j = i + 1; j < p; ++j)
        if (u(gen) < 0.4) w(i, j) = w(j, i) = 10.0 * u(gen);
    const Matrix l = build_laplacian(w);
    EXPECT_LE((l * Vector::Ones(p)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GE(oracle::jacobi(l).values.minCoeff(), -1e-10);
  }
}

TEST(AssembleEstimate, SupportAndLaplacianInvariants) {
  std::mt19937_64 gen(43);
  const Matrix x = oracle::random_samples(gen, 60, 8) * (Matrix::Identity(8, 8) + 0.5 * oracle::random_samples(gen, 8, 8));
  const SampleCovariance s = sample_covariance(SampleMatrix(x));
  const GraphEstimate est = estimate(s, EstimatorSpec::make(0.05, EstimatorMode::kConstrainedAdaptiveLasso));
  EXPECT_EQ(est.edges, extract_edges(est.v));
  for (Eigen::Index i = 0; i < 8; ++i) {
    EXPECT_EQ(est.w_hat(i, i), 0.0);
    for (Eigen::Index j = 0; j < 8; ++j) {
      EXPECT_GE(est.w_hat(i, j), 0.0);
      EXPECT_EQ(est.w_hat(i, j), est.w_hat(j, i));
      if (i != j) {
        EXPECT_EQ(est.w_hat(i, j) > 0.0, est.edges.contains(i, j));
      }
    }
  }
  EXPECT_LE((est.laplacian_hat * Vector::Ones(8)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(MaskedOffdiagonal, KeepsSignsOnEdgesOnly) {
  Matrix om = Matrix::Identity(3, 3);
  om(0, 1) = om(1, 0) = 0.2;
  om(1, 2) = om(2, 1) = -0.4;
  const Matrix m = masked_offdiagonal(om, EdgeSet(3, {{0, 1}}));
  EXPECT_EQ(m(0, 1), 0.2);
  EXPECT_EQ(m(1, 2), 0.0);
  EXPECT_EQ(m(0, 0), 0.0);
}
