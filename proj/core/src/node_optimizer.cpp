#include "dgl/node_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dgl {
namespace {

double hinge(const NodeState& s) {
  const double d = std::accumulate(s.weights.begin(), s.weights.end(), 0.0);
  return std::max(0.0, s.eta - d);
}

void record_objective(NodeState& s) {
  s.recent_objective.push_back(local_objective(s));
  while (s.recent_objective.size() > s.history) {
    s.recent_objective.pop_front();
  }
}

} // namespace

NodeState make_node_state(const CommGraph& g, std::span<const double> z_row, NodeId i,
                          const LocalConfig& cfg) {
  if (z_row.size() != g.degree(i)) {
    throw std::invalid_argument("make_node_state: z row does not match node degree");
  }
  if (!(cfg.eta > 0.0)) {
    throw std::invalid_argument("make_node_state: eta must be positive");
  }
  NodeState s;
  s.id = i;
  const auto nb = g.neighbors(i);
  s.neighbors.assign(nb.begin(), nb.end());
  s.weights.assign(nb.size(), 1.0);
  s.z.assign(z_row.begin(), z_row.end());
  s.eta = cfg.eta;
  s.normalizer = cfg.normalization == DataNormalization::NetworkSize
                     ? static_cast<double>(g.n_nodes())
                     : static_cast<double>(std::max<std::size_t>(nb.size(), 1));
  s.optimizer = Optimizer(nb.size(), cfg.mode);
  s.history = cfg.window + 1;
  return s;
}

double local_objective(const NodeState& s) {
  double data = 0.0;
  for (std::size_t k = 0; k < s.weights.size(); ++k) {
    data += s.weights[k] * s.z[k];
  }
  const double h = hinge(s);
  return data / s.normalizer + h * h;
}

std::vector<double> local_gradient(const NodeState& s) {
  const double penalty = 2.0 * hinge(s);
  std::vector<double> grad(s.weights.size());
  for (std::size_t k = 0; k < grad.size(); ++k) {
    grad[k] = s.z[k] / s.normalizer - penalty;
  }
  return grad;
}

void project_local(NodeState& s) {
  for (std::size_t k = 0; k < s.weights.size(); ++k) {
    if (s.neighbors[k] == s.id || !(s.weights[k] > 0.0)) {
      s.weights[k] = 0.0;
    }
  }
}

void local_step(NodeState& s, double lr) {
  const auto grad = local_gradient(s);
  s.optimizer.step(s.weights, grad, lr);
  project_local(s);
  ++s.step_count;
  ++s.phase_steps;
  record_objective(s);
}

void begin_local_phase(NodeState& s) {
  s.recent_objective.clear();
  s.phase_steps = 0;
  s.recent_objective.push_back(local_objective(s));
}

bool objective_settled(const std::deque<double>& history, std::size_t window, double tol) {
  if (window == 0 || history.size() <= window) {
    return false;
  }
  const auto first = history.end() - static_cast<std::ptrdiff_t>(window + 1);
  const auto [lo, hi] = std::minmax_element(first, history.end());
  const double scale = std::abs(history.back());
  if (scale == 0.0) {
    return *hi == *lo;
  }
  return (*hi - *lo) / scale < tol;
}

bool local_converged(const NodeState& s, double tol, std::size_t window, std::size_t step_cap) {
  if (s.phase_steps >= step_cap) {
    return true;
  }
  return objective_settled(s.recent_objective, window, tol);
}

std::size_t solve_local(NodeState& s, const LocalConfig& cfg) {
  s.history = std::max(s.history, cfg.window + 1);
  begin_local_phase(s);
  if (s.weights.empty()) {
    return 0;
  }
  while (!local_converged(s, cfg.tol, cfg.window, cfg.step_cap)) {
    local_step(s, cfg.lr);
  }
  return s.phase_steps;
}

} // namespace dgl
