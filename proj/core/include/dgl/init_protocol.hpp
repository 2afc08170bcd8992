#pragma once

#include <cstdint>
#include <vector>

#include "dgl/errors.hpp"
#include "dgl/graph_model.hpp"
#include "dgl/ledger.hpp"

namespace dgl {

struct InitOptions {
  /// Order in which nodes act inside a round. Empty means 0..N-1. The
  /// outcome must not depend on it; tests permute it.
  std::vector<NodeId> schedule;
};

struct InitResult {
  EdgeDifferences z;
  std::size_t rounds = 0;
  /// Scalars actually delivered by the transport, counted independently of
  /// the ledger charges.
  MessageLedger recount;
};

/// Round-based computation of z_ij = ||x_i - x_j||^2 at both endpoints of
/// every communication edge.
///
/// Each round, a node with undetermined z values picks its highest-degree
/// such neighbor (lowest id on ties) and sends it x_i, provided that neighbor
/// has degree >= its own (the lower id sends when degrees are equal) and has
/// not already sent x_j to it. Every receiver computes z for all pairs of
/// signals it holds that form a communication edge and returns each value to
/// the endpoints that still lack it. Signals are charged M messages, results
/// one message per scalar. Rounds repeat until every node is complete; more
/// than N rounds throws DiagnosticError.
InitResult run_initialization(const CommGraph& g, const SignalMatrix& x, MessageLedger& ledger,
                              const InitOptions& options = {});

/// Every node sends its length-M signal across every incident edge: 2|E|M.
std::uint64_t naive_initialization_cost(const CommGraph& g, std::size_t n_signals);

} // namespace dgl
