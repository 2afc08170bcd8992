#include "dgl/init_protocol.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <numeric>
#include <string>

namespace dgl {
namespace {

struct NodeView {
  // known[slot] is true once z for neighbors(i)[slot] is held locally.
  std::vector<bool> known;
  std::size_t missing = 0;
  // Signals this node holds from others, keyed by origin.
  std::map<NodeId, std::vector<double>> received;
};

// True when j ranks above i: j has higher degree, or equal degree and i has
// the lower id (the lower id is the one that sends).
bool outranks(const CommGraph& g, NodeId j, NodeId i) {
  const auto dj = g.degree(j);
  const auto di = g.degree(i);
  return dj > di || (dj == di && i < j);
}

// Highest-degree neighbor with undetermined z, lowest id on ties.
std::optional<NodeId> pick_receiver(const CommGraph& g, NodeId i, const NodeView& view) {
  std::optional<NodeId> best;
  const auto nb = g.neighbors(i);
  for (std::size_t s = 0; s < nb.size(); ++s) {
    if (view.known[s]) {
      continue;
    }
    if (!best || g.degree(nb[s]) > g.degree(*best)) {
      best = nb[s];
    }
  }
  return best;
}

void learn(const CommGraph& g, EdgeDifferences& z, std::vector<NodeView>& views, NodeId at,
           NodeId other, double value) {
  const std::size_t slot = g.neighbor_slot(at, other);
  NodeView& v = views[at];
  if (!v.known[slot]) {
    v.known[slot] = true;
    --v.missing;
    z.at_node(at)[slot] = value;
  }
}

} // namespace

InitResult run_initialization(const CommGraph& g, const SignalMatrix& x, MessageLedger& ledger,
                              const InitOptions& options) {
  const std::size_t n = g.n_nodes();
  if (x.n_nodes() != n) {
    throw std::invalid_argument("run_initialization: signal rows differ from node count");
  }
  std::vector<NodeId> schedule = options.schedule;
  if (schedule.empty()) {
    schedule.resize(n);
    std::iota(schedule.begin(), schedule.end(), NodeId{0});
  } else {
    auto sorted = schedule;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < sorted.size(); ++k) {
      if (sorted[k] != k || sorted.size() != n) {
        throw std::invalid_argument("run_initialization: schedule is not a permutation of nodes");
      }
    }
  }

  const std::size_t m = x.n_signals();
  InitResult result{EdgeDifferences(g, m), 0, {}};
  Transport transport(g);

  std::vector<NodeView> views(n);
  std::size_t incomplete = 0;
  for (NodeId i = 0; i < n; ++i) {
    views[i].known.assign(g.degree(i), false);
    views[i].missing = g.degree(i);
    incomplete += views[i].missing > 0 ? 1 : 0;
  }

  while (incomplete > 0) {
    if (result.rounds >= n) {
      throw DiagnosticError("initialization protocol made no complete pass after " +
                            std::to_string(n) + " rounds; the graph is probably disconnected");
    }
    ++result.rounds;

    // Snapshot of who lacks what, taken before anyone acts this round.
    std::vector<std::vector<bool>> known_at_start(n);
    for (NodeId i = 0; i < n; ++i) {
      known_at_start[i] = views[i].known;
    }

    // Signal transmissions.
    for (NodeId i : schedule) {
      if (views[i].missing == 0) {
        continue;
      }
      const auto target = pick_receiver(g, i, views[i]);
      if (!target || !outranks(g, *target, i) || views[i].received.contains(*target)) {
        continue;
      }
      const auto row = x.row(i);
      transport.send(*target, Message{i, Phase::InitSignals, i, i, {row.begin(), row.end()}});
      ledger.charge(Phase::InitSignals, m);
    }

    // All signals land before any receiver computes, so results queued below
    // never mix with this round's signal traffic.
    std::vector<std::vector<Message>> signal_inbox(n);
    for (NodeId r : schedule) {
      signal_inbox[r] = transport.drain(r);
    }

    // Receivers combine every signal they hold, own included.
    for (NodeId r : schedule) {
      auto& inbox = signal_inbox[r];
      if (inbox.empty()) {
        continue;
      }
      NodeView& rv = views[r];
      std::vector<NodeId> fresh;
      for (Message& msg : inbox) {
        fresh.push_back(msg.from);
        rv.received.emplace(msg.from, std::move(msg.payload));
      }
      std::vector<NodeId> holders{r};
      for (const auto& [origin, _] : rv.received) {
        holders.push_back(origin);
      }
      std::sort(holders.begin(), holders.end());

      auto signal_of = [&](NodeId v) -> std::span<const double> {
        return v == r ? x.row(r) : std::span<const double>(rv.received.at(v));
      };
      auto lacks = [&](NodeId at, NodeId other) {
        return !known_at_start[at][g.neighbor_slot(at, other)];
      };

      for (std::size_t p = 0; p < holders.size(); ++p) {
        for (std::size_t q = p + 1; q < holders.size(); ++q) {
          const NodeId a = holders[p];
          const NodeId b = holders[q];
          const bool involves_fresh = std::find(fresh.begin(), fresh.end(), a) != fresh.end() ||
                                      std::find(fresh.begin(), fresh.end(), b) != fresh.end();
          if (!involves_fresh || !g.has_edge(a, b) || !(lacks(a, b) || lacks(b, a))) {
            continue;
          }
          // a < b: lower id minus higher id, same order as the reference.
          const double z = squared_distance(signal_of(a), signal_of(b));
          for (NodeId end : {a, b}) {
            const NodeId other = end == a ? b : a;
            if (end == r) {
              learn(g, result.z, views, r, other, z);
            } else if (lacks(end, other)) {
              transport.send(end, Message{r, Phase::InitResults, a, b, {z}});
              ledger.charge(Phase::InitResults, 1);
            }
          }
        }
      }
    }

    // Result delivery.
    for (NodeId i : schedule) {
      for (const Message& msg : transport.drain(i)) {
        const NodeId other = msg.a == i ? msg.b : msg.a;
        learn(g, result.z, views, i, other, msg.payload.front());
      }
    }

    incomplete = static_cast<std::size_t>(
        std::count_if(views.begin(), views.end(), [](const NodeView& v) { return v.missing > 0; }));
  }

  result.recount = transport.recount();
  return result;
}

std::uint64_t naive_initialization_cost(const CommGraph& g, std::size_t n_signals) {
  return 2 * static_cast<std::uint64_t>(g.edge_count()) * n_signals;
}

} // namespace dgl
