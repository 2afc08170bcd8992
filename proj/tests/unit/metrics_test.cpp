#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dgl/metrics.hpp"
#include "oracles.hpp"

namespace dgl {
namespace {

UpperWeights random_upper(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  UpperWeights w(n);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (u(rng) < 0.5) w.set(i, j, u(rng));
  return w;
}

TEST(Frobenius, Example) {
  // Upper entries differ by (1, 2, 2): full matrix norm sqrt(2 * 9).
  const UpperWeights a(3, {1.0, 2.0, 3.0});
  const UpperWeights b(3, {0.0, 0.0, 1.0});
  EXPECT_DOUBLE_EQ(frobenius_error(a, b), std::sqrt(18.0));
  EXPECT_EQ(frobenius_error(a, a), 0.0);
}

TEST(Frobenius, MatchesDenseOracle) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    const auto a = random_upper(4 + t % 9, rng);
    const auto b = random_upper(4 + t % 9, rng);
    EXPECT_NEAR(frobenius_error(a, b), oracle::dense_frobenius(a, b), 1e-12);
  }
}

TEST(NormalizedFrobenius, OrthogonalSupportsAndBounds) {
  UpperWeights a(3), b(3);
  a.set(0, 1, 2.0);
  b.set(1, 2, 5.0);
  EXPECT_DOUBLE_EQ(*normalized_frobenius_error(a, b), std::sqrt(2.0));
  EXPECT_EQ(*normalized_frobenius_error(a, a), 0.0);
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    const auto x = random_upper(6, rng);
    const auto y = random_upper(6, rng);
    if (const auto v = normalized_frobenius_error(x, y)) {
      EXPECT_GE(*v, 0.0);
      EXPECT_LE(*v, 2.0);
    }
  }
}

TEST(NormalizedFrobenius, ScaleInvariant) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> s(1e-3, 1e3);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 3 + t % 12;
    const auto a = random_upper(n, rng);
    const auto b = random_upper(n, rng);
    const auto base = normalized_frobenius_error(a, b);
    if (!base) continue;
    std::vector<double> va(a.values().begin(), a.values().end());
    const double k = s(rng);
    for (auto& v : va) v *= k;
    EXPECT_NEAR(*normalized_frobenius_error(UpperWeights(n, va), b), *base, 1e-12);
  }
}

TEST(NormalizedFrobenius, ZeroMatrixHasNoValue) {
  const UpperWeights a(3, {1.0, 0.0, 0.0});
  EXPECT_FALSE(normalized_frobenius_error(a, UpperWeights(3)).has_value());
  EXPECT_FALSE(normalized_frobenius_error(UpperWeights(3), a).has_value());
}

TEST(Wasserstein, Examples) {
  EXPECT_EQ(*wasserstein2_1d({0.0, 1.0}, {1.0, 0.0}), 0.0);
  EXPECT_DOUBLE_EQ(*wasserstein2_1d({0.0, 0.0}, {1.0, 1.0}), 1.0);
  EXPECT_DOUBLE_EQ(*wasserstein2_1d({0.0}, {3.0}), 3.0);
  // Unequal sizes: {0} against {0, 2} moves half the mass by 2.
  EXPECT_DOUBLE_EQ(*wasserstein2_1d({0.0}, {0.0, 2.0}), std::sqrt(2.0));
  EXPECT_FALSE(wasserstein2_1d({}, {1.0}).has_value());
}

TEST(Wasserstein, PermutationInvarianceAndIdentity) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> a(1 + rng() % 40), b(1 + rng() % 40);
    for (auto& v : a) v = u(rng);
    for (auto& v : b) v = u(rng);
    auto pa = a;
    std::shuffle(pa.begin(), pa.end(), rng);
    EXPECT_EQ(*wasserstein2_1d(pa, b), *wasserstein2_1d(a, b));
    EXPECT_EQ(*wasserstein2_1d(a, pa), 0.0);
    EXPECT_GT(*wasserstein2_1d(a, b), 0.0);
    EXPECT_NEAR(*wasserstein2_1d(a, b), *wasserstein2_1d(b, a), 1e-15);
  }
}

TEST(Wasserstein, EqualSizesAreSortedRms) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 50; ++t) {
    std::vector<double> a(20), b(20);
    for (auto& v : a) v = nd(rng);
    for (auto& v : b) v = nd(rng);
    auto sa = a, sb = b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    double s = 0.0;
    for (std::size_t k = 0; k < 20; ++k) s += (sa[k] - sb[k]) * (sa[k] - sb[k]);
    EXPECT_NEAR(*wasserstein2_1d(a, b), std::sqrt(s / 20.0), 1e-12);
  }
}

TEST(Wasserstein, GraphVariants) {
  const auto g = CommGraph::from_edges(3, std::vector<Edge>{{0, 1}, {1, 2}});
  UpperWeights a(3), b(3);
  a.set(0, 1, 1.0);
  b.set(1, 2, 1.0);
  // Same multiset {0, 1} on the support.
  EXPECT_EQ(wasserstein_distance(a, b, g), 0.0);
  EXPECT_EQ(*wasserstein_nonzero(a, b), 0.0);
  b.set(0, 1, 1.0);
  EXPECT_DOUBLE_EQ(wasserstein_distance(a, b, g), std::sqrt(0.5));
  EXPECT_FALSE(wasserstein_nonzero(a, UpperWeights(3)).has_value());
}

TEST(MetricsReport, CarriesLedger) {
  const auto g = CommGraph::from_edges(2, std::vector<Edge>{{0, 1}});
  MessageLedger l;
  l.charge(Phase::WeightExchange, 6);
  l.charge(Phase::InitSignals, 4);
  const auto r = make_report(UpperWeights(2, {1.0}), UpperWeights(2, {0.5}), g, l);
  EXPECT_EQ(r.total_messages, 10u);
  EXPECT_EQ(r.phases, l);
  EXPECT_DOUBLE_EQ(r.frobenius, std::sqrt(0.5));
  EXPECT_EQ(*r.normalized_frobenius, 0.0);
  EXPECT_DOUBLE_EQ(r.wasserstein, 0.5);
}

} // namespace
} // namespace dgl
