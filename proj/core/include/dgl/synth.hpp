#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "dgl/graph_model.hpp"

namespace dgl {

struct GenConfig {
  std::size_t n_nodes = 100;
  /// Communication radius in unit-square units; unset means 2/sqrt(N).
  std::optional<double> radius;
  double removal_rate = 0.5;
  std::size_t n_signals = 1000;
  std::uint64_t seed = 1;
  double weight_low = 0.1;
  double weight_high = 1.0;
  /// epsilon in the covariance pinv(L) + epsilon*I.
  double signal_noise = 0.1;
  std::size_t connect_retry_cap = 1000;

  double effective_radius() const;
  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

/// Uniform positions in the unit square, radius rule for edges, redrawn from
/// the same seeded stream until the graph is connected. Throws
/// DiagnosticError after connect_retry_cap attempts.
CommGraph generate_comm_graph(const GenConfig& cfg);

/// Deletes floor(removal_rate * |E|) edges chosen uniformly without
/// replacement; survivors get i.i.d. weights uniform on [weight_low, weight_high).
DataGraph generate_data_graph(std::shared_ptr<const CommGraph> g, const GenConfig& cfg);

/// M columns drawn i.i.d. from N(0, pinv(L) + epsilon*I) with L the Laplacian
/// of the data graph, sampled through the eigendecomposition of L. Columns are
/// generated in order, so the first k columns do not depend on M.
SignalMatrix generate_smooth_signals(const DataGraph& d, const GenConfig& cfg);

struct SyntheticInstance {
  std::shared_ptr<const CommGraph> comm;
  DataGraph truth;
  SignalMatrix signals;
};

SyntheticInstance generate_instance(const GenConfig& cfg);

} // namespace dgl
