#pragma once

#include <cstdint>
#include <vector>

#include "dgl/adam.hpp"
#include "dgl/graph_model.hpp"
#include "dgl/ledger.hpp"
#include "dgl/node_optimizer.hpp"

namespace dgl {

/// When the outer loop of the distributed algorithm stops.
enum class GlobalStop {
  /// max |w_ij - (w_ij + w_ji)/2| over the symmetry projection < global_tol.
  ProjectionGap,
  /// max change of the symmetric weights between consecutive outer rounds
  /// < global_tol, i.e. the alternation has reached its fixed point.
  IterateChange,
};

/// Result delivery in the centralized cost model.
enum class DownlinkModel {
  /// Each node receives its incident learned weights, one scalar per
  /// communication neighbor.
  IncidentRows,
  /// Each node receives every learned weight on the communication edges.
  FullBroadcast,
};

struct GlobalRunConfig {
  double eta = 1.0;
  double lr = 0.01;
  double local_tol = 1e-6;
  std::size_t local_window = 10;
  std::size_t local_step_cap = 5000;
  double global_tol = 1e-4;
  std::size_t global_round_cap = 100;
  OptimizerMode optimizer_mode = OptimizerMode::Adam;
  DataNormalization normalization = DataNormalization::NetworkSize;
  DataScaling scaling = DataScaling::PerSignal;
  GlobalStop stop = GlobalStop::ProjectionGap;
  /// Iteration cap for the single-optimizer centralized solvers.
  std::size_t central_step_cap = 20000;
  DownlinkModel downlink = DownlinkModel::IncidentRows;

  void validate() const;
  LocalConfig local() const;
};

struct RoundTrace {
  std::size_t round = 0;
  /// Sum of local objectives at the start and end of the local phase, and
  /// after the symmetry projection (the global objective on symmetric w).
  double objective_start = 0.0;
  double objective_local = 0.0;
  double objective_projected = 0.0;
  double max_projection_change = 0.0;
  double max_iterate_change = 0.0;
  std::size_t local_steps_max = 0;
  std::size_t local_steps_total = 0;
};

struct RunResult {
  UpperWeights learned;
  /// Charges made by the algorithm.
  MessageLedger ledger;
  /// Scalars counted by the transport layer, independently of `ledger`.
  MessageLedger recount;
  std::size_t rounds_used = 0;
  bool converged = false;
  std::vector<RoundTrace> trace;
  /// Largest |w_ij - w_ji| seen after any projection (centralized paths).
  double max_asymmetry = 0.0;
};

struct DistOptions {
  /// Order in which nodes run their local phase and exchange; empty means
  /// 0..N-1. Results must not depend on it.
  std::vector<NodeId> schedule;
};

/// Arithmetic mean of the two endpoint estimates.
double symmetry_project(double wi_j, double wj_i);

/// z scaled as the optimizers see it (raw, or divided by M).
EdgeDifferences scaled_differences(const EdgeDifferences& z, DataScaling scaling);

/// Sum over nodes of the local objective evaluated on symmetric weights w.
double global_objective(const CommGraph& g, const EdgeDifferences& z, const UpperWeights& w,
                        const GlobalRunConfig& cfg);

/// Alternates per-node local convergence, 1-hop weight exchange (two scalars
/// per edge per round), averaging, and ReLU, starting from w = 1 on every
/// communication edge. The ledger only holds the weight_exchange phase; the
/// initialization cost is charged by run_initialization.
RunResult run_distributed(const CommGraph& g, const EdgeDifferences& z, const GlobalRunConfig& cfg,
                          const DistOptions& options = {});

struct CentralCost {
  NodeId center = 0;
  std::uint64_t up = 0;
  std::uint64_t down = 0;
  std::uint64_t total() const { return up + down; }
};

/// Node of minimum eccentricity (lowest id on ties).
NodeId aggregation_center(const CommGraph& g);

/// Every node ships its M-signal to the aggregation center over shortest
/// paths (M scalars per hop); results return per the downlink model.
CentralCost centralized_cost(const CommGraph& g, std::size_t n_signals,
                             DownlinkModel downlink = DownlinkModel::IncidentRows);

/// Same objective as the distributed algorithm, solved by a single optimizer
/// over all directed estimates with the symmetry projection after every step.
RunResult run_centralized(const CommGraph& g, const EdgeDifferences& z, const GlobalRunConfig& cfg,
                          std::size_t n_signals);

struct BaselineConfig {
  double alpha = 1.0;
  double beta = 0.1;
};

/// Centralized log-degree model:
///   sum_e w_e z_e - alpha * sum_i log(d_i) + beta * sum_e w_e^2,  w >= 0,
/// restricted to communication edges, solved by projected Adam. Degrees
/// inside the log are clamped at 1e-12.
RunResult run_baseline_logdegree(const CommGraph& g, const EdgeDifferences& z,
                                 const BaselineConfig& baseline, const GlobalRunConfig& cfg,
                                 std::size_t n_signals);

} // namespace dgl
