#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dgl/graph_model.hpp"
#include "oracles.hpp"

namespace dgl {
namespace {

UpperWeights random_weights(std::size_t n, std::mt19937_64& rng, double density = 0.6) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  UpperWeights w(n);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      if (u(rng) < density) {
        w.set(i, j, u(rng) * 2.0);
      }
    }
  }
  return w;
}

TEST(PairIndex, RoundTripsEveryPair) {
  for (std::size_t n : {2u, 3u, 7u, 31u}) {
    std::size_t expected = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const auto k = pair_index(i, j, n);
        EXPECT_EQ(k, expected++);
        EXPECT_EQ(pair_index(j, i, n), k);
        EXPECT_EQ(pair_from_index(k, n), std::make_pair(i, j));
      }
    }
    EXPECT_EQ(expected, pair_count(n));
  }
}

TEST(PairIndex, RejectsDiagonalAndOutOfRange) {
  EXPECT_THROW(pair_index(2, 2, 5), std::out_of_range);
  EXPECT_THROW(pair_index(1, 5, 5), std::out_of_range);
  EXPECT_THROW(pair_from_index(10, 5), std::out_of_range);
}

TEST(CommGraph, RadiusRuleAndSymmetry) {
  std::mt19937_64 rng(3);
  const CommGraph g = oracle::random_geometric_graph(40, 0.3, rng);
  const auto& pos = g.positions();
  for (NodeId i = 0; i < g.n_nodes(); ++i) {
    EXPECT_FALSE(g.has_edge(i, i));
    for (NodeId j = 0; j < g.n_nodes(); ++j) {
      if (i == j) continue;
      const double d = std::hypot(pos[i].x - pos[j].x, pos[i].y - pos[j].y);
      EXPECT_EQ(g.has_edge(i, j), d <= 0.3);
      EXPECT_EQ(g.has_edge(i, j), g.has_edge(j, i));
    }
    const auto nb = g.neighbors(i);
    EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
  }
}

TEST(CommGraph, FromEdgesAndHops) {
  const std::vector<Edge> path{{0, 1}, {1, 2}, {2, 3}};
  const auto g = CommGraph::from_edges(4, path);
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_TRUE(g.is_connected());
  EXPECT_EQ(g.hop_distances(0), (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_EQ(g.neighbor_slot(1, 2), 1u);
  EXPECT_EQ(g.neighbor_slot(0, 3), CommGraph::npos);
  EXPECT_DOUBLE_EQ(g.mean_degree(), 1.5);

  const std::vector<Edge> split{{0, 1}, {2, 3}};
  const auto h = CommGraph::from_edges(4, split);
  EXPECT_FALSE(h.is_connected());
  EXPECT_EQ(h.hop_distances(0)[3], CommGraph::npos);
}

TEST(UpperWeights, RejectsBadValuesAndOffSupport) {
  UpperWeights w(3);
  EXPECT_THROW(w.set(0, 1, -0.1), std::invalid_argument);
  EXPECT_THROW(w.set(0, 1, std::nan("")), std::invalid_argument);
  const std::vector<Edge> e{{0, 1}};
  const auto g = CommGraph::from_edges(3, e);
  w.set(0, 1, 2.0);
  EXPECT_NO_THROW(w.check_support(g));
  w.set(1, 2, 1.0);
  EXPECT_THROW(w.check_support(g), std::invalid_argument);
}

TEST(Laplacian, TwoNodes) {
  UpperWeights w(2, {1.0});
  const Eigen::MatrixXd l = laplacian_from_weights(w);
  Eigen::MatrixXd expected(2, 2);
  expected << 1, -1, -1, 1;
  EXPECT_EQ(l, expected);
}

TEST(Laplacian, ZeroWeightsGiveZeroMatrix) {
  EXPECT_TRUE(laplacian_from_weights(UpperWeights(6)).isZero(0.0));
}

TEST(Laplacian, MatchesDenseOracleRowSumsZeroAndPsd) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 50; ++trial) {
    const auto w = random_weights(5 + trial % 7, rng);
    const Eigen::MatrixXd l = laplacian_from_weights(w);
    const Eigen::MatrixXd ref = oracle::dense_laplacian(w);
    EXPECT_LE((l - ref).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_TRUE(l.isApprox(l.transpose()));
    for (Eigen::Index i = 0; i < l.rows(); ++i) {
      double s = 0.0;
      for (Eigen::Index j = 0; j < l.cols(); ++j) s += l(i, j);
      EXPECT_NEAR(s, 0.0, 1e-12);
    }
    Eigen::VectorXd x(l.rows());
    for (auto& v : x) v = nd(rng);
    EXPECT_GE(x.dot(l * x), -1e-9);
  }
}

TEST(Laplacian, Linear) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto w1 = random_weights(6, rng);
    const auto w2 = random_weights(6, rng);
    const double a = 0.7, b = 1.9;
    std::vector<double> mix(w1.values().size());
    for (std::size_t k = 0; k < mix.size(); ++k) {
      mix[k] = a * w1.values()[k] + b * w2.values()[k];
    }
    const Eigen::MatrixXd lhs = laplacian_from_weights(UpperWeights(6, mix));
    const Eigen::MatrixXd rhs = a * laplacian_from_weights(w1) + b * laplacian_from_weights(w2);
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Smoothness, PathExample) {
  UpperWeights w(3);
  w.set(0, 1, 1.0);
  w.set(1, 2, 2.0);
  const SignalMatrix x(3, 1, {0.0, 1.0, 3.0});
  EXPECT_DOUBLE_EQ(smoothness(w, x), 9.0);
  EXPECT_NEAR(oracle::dense_trace_smoothness(w, x), 9.0, 1e-12);
}

TEST(Smoothness, ConstantRowsAndZeroWeights) {
  std::mt19937_64 rng(2);
  const auto w = random_weights(5, rng);
  const SignalMatrix same(5, 3, std::vector<double>(15, 1.25));
  EXPECT_EQ(smoothness(w, same), 0.0);
  const auto x = oracle::random_signals(5, 4, rng);
  EXPECT_EQ(smoothness(UpperWeights(5), x), 0.0);
}

TEST(Smoothness, MatchesTraceForm) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + trial % 10;
    const auto w = random_weights(n, rng);
    const auto x = oracle::random_signals(n, 1 + trial % 6, rng);
    const double s = smoothness(w, x);
    EXPECT_LE(std::abs(s - oracle::dense_trace_smoothness(w, x)), 1e-9 * (1.0 + std::abs(s)));
  }
}

TEST(Smoothness, DimensionMismatchThrows) {
  const SignalMatrix x(4, 2);
  EXPECT_THROW(smoothness(UpperWeights(3), x), std::invalid_argument);
}

TEST(EdgeDifferences, ScalarAndIdenticalRows) {
  const std::vector<Edge> e{{0, 1}};
  const auto g = CommGraph::from_edges(2, e);
  const auto z = edge_differences(SignalMatrix(2, 1, {0.0, 3.0}), g);
  EXPECT_EQ(z.get(g, 0, 1), 9.0);
  EXPECT_EQ(z.get(g, 1, 0), 9.0);
  const auto z0 = edge_differences(SignalMatrix(2, 3, std::vector<double>(6, -2.0)), g);
  EXPECT_EQ(z0.get(g, 0, 1), 0.0);
}

TEST(EdgeDifferences, MatchesLoopOracleExactly) {
  std::mt19937_64 rng(21);
  const CommGraph g = oracle::random_geometric_graph(30, 0.35, rng);
  const auto x = oracle::random_signals(30, 17, rng);
  const auto z = edge_differences(x, g);
  for (const Edge& e : g.edges()) {
    const double ref = oracle::squared_difference(x, e.u, e.v);
    EXPECT_EQ(z.get(g, e.u, e.v), ref);
    EXPECT_EQ(z.get(g, e.v, e.u), ref);
  }
  const auto upper = z.to_upper(g);
  EXPECT_NO_THROW(upper.check_support(g));
}

} // namespace
} // namespace dgl
