#pragma once

#include <cstddef>
#include <deque>
#include <vector>

#include "dgl/adam.hpp"
#include "dgl/graph_model.hpp"

namespace dgl {

/// What divides the data term of the local objective.
enum class DataNormalization {
  NetworkSize,  ///< global node count N
  Neighborhood, ///< |N_i|, the node's own communication degree
};

/// How the raw squared differences are scaled before entering the objective.
/// PerSignal divides z by the number of signals M, which makes the learned
/// graph independent of how many signals were observed.
enum class DataScaling { Raw, PerSignal };

struct LocalConfig {
  double eta = 1.0;
  double lr = 0.01;
  double tol = 1e-6;
  std::size_t window = 10;
  std::size_t step_cap = 5000;
  OptimizerMode mode = OptimizerMode::Adam;
  DataNormalization normalization = DataNormalization::NetworkSize;
};

/// Private state of one node: its estimates of w_ij over communication
/// neighbors, its z values, and its own optimizer instance.
struct NodeState {
  NodeId id = 0;
  std::vector<NodeId> neighbors;
  std::vector<double> weights;
  std::vector<double> z;
  double eta = 1.0;
  /// Divisor of the data term (N, or the node degree).
  double normalizer = 1.0;
  Optimizer optimizer;
  std::size_t step_count = 0;
  /// Objective values since the last call to begin_local_phase.
  std::deque<double> recent_objective;
  std::size_t history = 11;
  std::size_t phase_steps = 0;
};

/// Builds the state of node i with all weights at 1.
NodeState make_node_state(const CommGraph& g, std::span<const double> z_row, NodeId i,
                          const LocalConfig& cfg);

/// (1/norm) * sum_j w_ij z_ij + max(0, eta - d_i)^2.
double local_objective(const NodeState& s);

/// z_ij/norm - 2*max(0, eta - d_i). At d_i == eta the hinge contributes 0.
std::vector<double> local_gradient(const NodeState& s);

/// ReLU on every weight; a self-weight, if one were ever present, becomes 0.
void project_local(NodeState& s);

/// One optimizer update followed by project_local.
void local_step(NodeState& s, double lr);

/// Starts a fresh convergence window at the current weights.
void begin_local_phase(NodeState& s);

/// True when the last window+1 objective values all lie within tol of each
/// other, relative to the latest value. An oscillating optimizer whose
/// endpoints happen to coincide does not count as settled.
bool objective_settled(const std::deque<double>& history, std::size_t window, double tol);

/// objective_settled on the current phase, or `step_cap` steps taken in it.
bool local_converged(const NodeState& s, double tol, std::size_t window, std::size_t step_cap);

/// Runs local_step until local_converged. Returns the number of steps taken.
std::size_t solve_local(NodeState& s, const LocalConfig& cfg);

} // namespace dgl
