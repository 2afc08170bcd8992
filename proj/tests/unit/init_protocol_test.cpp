#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "dgl/init_protocol.hpp"
#include "oracles.hpp"

namespace dgl {
namespace {

CommGraph graph_of(std::size_t n, std::vector<Edge> edges) { return CommGraph::from_edges(n, edges); }

void expect_matches_oracle(const CommGraph& g, const SignalMatrix& x, const EdgeDifferences& z) {
  for (const Edge& e : g.edges()) {
    const double ref = oracle::squared_difference(x, e.u, e.v);
    ASSERT_EQ(z.get(g, e.u, e.v), ref) << e.u << "-" << e.v;
    ASSERT_EQ(z.get(g, e.v, e.u), ref) << e.v << "-" << e.u;
  }
}

// Ids here are zero-based: the path 0-1-2 with node 1 in the middle.
TEST(InitProtocol, PathOfThree) {
  const auto g = graph_of(3, {{0, 1}, {1, 2}});
  const SignalMatrix x(3, 2, {0.0, 1.0, 2.0, 2.0, -1.0, 5.0});
  MessageLedger ledger;
  const auto r = run_initialization(g, x, ledger);
  EXPECT_EQ(ledger.count(Phase::InitSignals), 4u);
  EXPECT_EQ(ledger.count(Phase::InitResults), 2u);
  EXPECT_EQ(ledger.total(), 6u);
  EXPECT_EQ(naive_initialization_cost(g, 2), 8u);
  EXPECT_EQ(r.rounds, 1u);
  EXPECT_EQ(r.recount, ledger);
  expect_matches_oracle(g, x, r.z);
}

TEST(InitProtocol, TwoNodesTieBreak) {
  const auto g = graph_of(2, {{0, 1}});
  const SignalMatrix x(2, 1, {1.5, -0.5});
  MessageLedger ledger;
  const auto r = run_initialization(g, x, ledger);
  EXPECT_EQ(ledger.count(Phase::InitSignals), 1u);
  EXPECT_EQ(ledger.count(Phase::InitResults), 1u);
  EXPECT_EQ(r.recount, ledger);
  expect_matches_oracle(g, x, r.z);
}

TEST(InitProtocol, NaiveCostFormula) {
  EXPECT_EQ(naive_initialization_cost(graph_of(3, {{0, 1}, {1, 2}}), 2), 8u);
  EXPECT_EQ(naive_initialization_cost(graph_of(3, {}), 7), 0u);
}

TEST(InitProtocol, SingleNodeIsTrivial) {
  MessageLedger ledger;
  const auto r = run_initialization(graph_of(1, {}), SignalMatrix(1, 3), ledger);
  EXPECT_EQ(ledger.total(), 0u);
  EXPECT_EQ(r.rounds, 0u);
}

TEST(InitProtocol, RejectsWrongShape) {
  MessageLedger ledger;
  EXPECT_THROW(run_initialization(graph_of(3, {{0, 1}, {1, 2}}), SignalMatrix(2, 3), ledger),
               std::invalid_argument);
}

TEST(InitProtocol, OracleEquivalenceCompletenessAndDominance) {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<int> n_dist(5, 100);
  std::uniform_int_distribution<int> m_dist(1, 50);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = static_cast<std::size_t>(n_dist(rng));
    const double radius = std::min(1.5, 2.2 / std::sqrt(static_cast<double>(n)));
    const auto g = oracle::random_geometric_graph(n, radius, rng);
    const auto x = oracle::random_signals(n, static_cast<std::size_t>(m_dist(rng)), rng);
    MessageLedger ledger;
    const auto r = run_initialization(g, x, ledger);
    expect_matches_oracle(g, x, r.z);
    EXPECT_EQ(r.z, edge_differences(x, g));
    EXPECT_EQ(r.recount, ledger);
    EXPECT_LE(r.rounds, n);
    if (x.n_signals() >= 2) {
      EXPECT_LE(ledger.total(), naive_initialization_cost(g, x.n_signals()));
    }
    EXPECT_EQ(ledger.count(Phase::WeightExchange), 0u);
  }
}

// With one signal a send costs the same as a returned result, so relaying z
// between two non-receivers can push the protocol above 2|E|M.
TEST(InitProtocol, SingleSignalCanExceedNaive) {
  const auto g = graph_of(6, {{0, 1}, {0, 2}, {0, 4}, {0, 5}, {1, 3}, {1, 4}, {1, 5}, {3, 5}});
  const SignalMatrix x(6, 1, {0.0, 1.0, 2.0, 3.0, 4.0, 5.0});
  MessageLedger ledger;
  const auto r = run_initialization(g, x, ledger);
  expect_matches_oracle(g, x, r.z);
  EXPECT_EQ(r.recount, ledger);
  EXPECT_EQ(ledger.count(Phase::InitSignals), 8u);
  EXPECT_EQ(ledger.count(Phase::InitResults), 10u);
  EXPECT_GT(ledger.total(), naive_initialization_cost(g, 1));
}

TEST(InitProtocol, ScheduleDoesNotMatter) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = oracle::random_geometric_graph(40, 0.3, rng);
    const auto x = oracle::random_signals(40, 6, rng);
    MessageLedger base_ledger;
    const auto base = run_initialization(g, x, base_ledger);
    InitOptions opts;
    opts.schedule.resize(40);
    std::iota(opts.schedule.begin(), opts.schedule.end(), NodeId{0});
    for (int p = 0; p < 5; ++p) {
      std::shuffle(opts.schedule.begin(), opts.schedule.end(), rng);
      MessageLedger ledger;
      const auto r = run_initialization(g, x, ledger, opts);
      EXPECT_EQ(r.z, base.z);
      EXPECT_EQ(ledger, base_ledger);
      EXPECT_EQ(r.rounds, base.rounds);
    }
  }
}

TEST(InitProtocol, Deterministic) {
  std::mt19937_64 rng(5);
  const auto g = oracle::random_geometric_graph(60, 0.25, rng);
  const auto x = oracle::random_signals(60, 9, rng);
  MessageLedger a, b;
  const auto ra = run_initialization(g, x, a);
  const auto rb = run_initialization(g, x, b);
  EXPECT_EQ(a, b);
  EXPECT_EQ(ra.rounds, rb.rounds);
  EXPECT_EQ(ra.z, rb.z);
}

TEST(Ledger, CsvAndArithmetic) {
  MessageLedger l;
  l.charge(Phase::InitSignals, 4);
  l.charge(Phase::CentralDown, 2);
  MessageLedger m;
  m.charge(Phase::InitSignals, 1);
  l += m;
  EXPECT_EQ(l.total(), 7u);
  std::ostringstream os;
  l.write_csv(os);
  EXPECT_EQ(os.str(),
            "phase,count\ninit_signals,5\ninit_results,0\nweight_exchange,0\ncentral_up,0\n"
            "central_down,2\n");
  for (Phase p : kAllPhases) {
    EXPECT_EQ(phase_from_name(phase_name(p)), p);
  }
  EXPECT_FALSE(phase_from_name("bogus").has_value());
}

TEST(Transport, OneHopOnlyAndCountsPayload) {
  const auto g = graph_of(3, {{0, 1}, {1, 2}});
  Transport t(g);
  t.send(1, Message{0, Phase::InitSignals, 0, 1, {1.0, 2.0, 3.0}});
  EXPECT_THROW(t.send(2, Message{0, Phase::InitSignals, 0, 2, {1.0}}), std::logic_error);
  EXPECT_FALSE(t.idle());
  const auto inbox = t.drain(1);
  ASSERT_EQ(inbox.size(), 1u);
  EXPECT_EQ(inbox[0].payload.size(), 3u);
  EXPECT_TRUE(t.idle());
  EXPECT_EQ(t.recount().count(Phase::InitSignals), 3u);
}

} // namespace
} // namespace dgl
