#include "dgl/dist_loop.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dgl/errors.hpp"

namespace dgl {

void GlobalRunConfig::validate() const {
  if (!(eta > 0.0)) {
    throw std::invalid_argument("GlobalRunConfig: eta must be positive");
  }
  if (!(lr > 0.0)) {
    throw std::invalid_argument("GlobalRunConfig: lr must be positive");
  }
  if (!(local_tol > 0.0) || !(global_tol > 0.0)) {
    throw std::invalid_argument("GlobalRunConfig: tolerances must be positive");
  }
  if (local_window == 0 || local_step_cap == 0 || global_round_cap == 0 || central_step_cap == 0) {
    throw std::invalid_argument("GlobalRunConfig: windows and caps must be at least 1");
  }
}

LocalConfig GlobalRunConfig::local() const {
  return LocalConfig{eta, lr, local_tol, local_window, local_step_cap, optimizer_mode,
                     normalization};
}

double symmetry_project(double wi_j, double wj_i) { return (wi_j + wj_i) / 2.0; }

EdgeDifferences scaled_differences(const EdgeDifferences& z, DataScaling scaling) {
  if (scaling == DataScaling::Raw || z.n_signals() <= 1) {
    return z;
  }
  EdgeDifferences out = z;
  const double m = static_cast<double>(z.n_signals());
  for (NodeId i = 0; i < out.n_nodes(); ++i) {
    for (double& v : out.at_node(i)) {
      v /= m;
    }
  }
  return out;
}

double global_objective(const CommGraph& g, const EdgeDifferences& z, const UpperWeights& w,
                        const GlobalRunConfig& cfg) {
  const EdgeDifferences zs = scaled_differences(z, cfg.scaling);
  const LocalConfig local = cfg.local();
  double total = 0.0;
  for (NodeId i = 0; i < g.n_nodes(); ++i) {
    NodeState s = make_node_state(g, zs.at_node(i), i, local);
    for (std::size_t k = 0; k < s.neighbors.size(); ++k) {
      s.weights[k] = w(i, s.neighbors[k]);
    }
    total += local_objective(s);
  }
  return total;
}

namespace {

std::vector<NodeId> resolve_schedule(std::vector<NodeId> schedule, std::size_t n) {
  if (schedule.empty()) {
    schedule.resize(n);
    std::iota(schedule.begin(), schedule.end(), NodeId{0});
    return schedule;
  }
  auto sorted = schedule;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (sorted.size() != n || sorted[k] != k) {
      throw std::invalid_argument("schedule is not a permutation of the nodes");
    }
  }
  return schedule;
}

double sum_objectives(const std::vector<NodeState>& nodes) {
  double total = 0.0;
  for (const NodeState& s : nodes) {
    total += local_objective(s);
  }
  return total;
}

UpperWeights assemble(const CommGraph& g, const std::vector<NodeState>& nodes) {
  UpperWeights w(g.n_nodes());
  for (const Edge& e : g.edges()) {
    const double from_u = nodes[e.u].weights[g.neighbor_slot(e.u, e.v)];
    const double from_v = nodes[e.v].weights[g.neighbor_slot(e.v, e.u)];
    if (from_u != from_v) {
      throw std::logic_error("assemble: endpoint estimates disagree after projection");
    }
    w.set(e.u, e.v, from_u);
  }
  return w;
}

} // namespace

RunResult run_distributed(const CommGraph& g, const EdgeDifferences& z, const GlobalRunConfig& cfg,
                          const DistOptions& options) {
  cfg.validate();
  if (z.n_nodes() != g.n_nodes()) {
    throw std::invalid_argument("run_distributed: differences do not match the graph");
  }
  const std::size_t n = g.n_nodes();
  const auto schedule = resolve_schedule(options.schedule, n);
  const EdgeDifferences zs = scaled_differences(z, cfg.scaling);
  const LocalConfig local = cfg.local();

  std::vector<NodeState> nodes;
  nodes.reserve(n);
  for (NodeId i = 0; i < n; ++i) {
    nodes.push_back(make_node_state(g, zs.at_node(i), i, local));
  }

  RunResult result;
  Transport transport(g);
  std::vector<std::vector<double>> previous(n);
  for (NodeId i = 0; i < n; ++i) {
    previous[i] = nodes[i].weights;
  }

  for (std::size_t round = 1; round <= cfg.global_round_cap; ++round) {
    RoundTrace tr;
    tr.round = round;
    tr.objective_start = sum_objectives(nodes);

    for (NodeId i : schedule) {
      const std::size_t steps = solve_local(nodes[i], local);
      tr.local_steps_max = std::max(tr.local_steps_max, steps);
      tr.local_steps_total += steps;
    }
    tr.objective_local = sum_objectives(nodes);

    // Every node hands w_ij to each neighbor j.
    for (NodeId i : schedule) {
      const NodeState& s = nodes[i];
      for (std::size_t k = 0; k < s.neighbors.size(); ++k) {
        transport.send(s.neighbors[k], Message{i, Phase::WeightExchange, i, s.neighbors[k],
                                               {s.weights[k]}});
        result.ledger.charge(Phase::WeightExchange, 1);
      }
    }

    // Averages are computed from the pre-exchange values at both endpoints,
    // then applied together.
    std::vector<std::vector<double>> averaged(n);
    for (NodeId i : schedule) {
      const NodeState& s = nodes[i];
      averaged[i] = s.weights;
      for (const Message& msg : transport.drain(i)) {
        const std::size_t slot = g.neighbor_slot(i, msg.from);
        const double mean = symmetry_project(s.weights[slot], msg.payload.front());
        if (!std::isfinite(mean)) {
          throw DiagnosticError("non-finite weight on edge (" + std::to_string(i) + ", " +
                                std::to_string(msg.from) + ")");
        }
        tr.max_projection_change =
            std::max(tr.max_projection_change, std::abs(s.weights[slot] - mean));
        averaged[i][slot] = mean;
      }
    }
    for (NodeId i : schedule) {
      nodes[i].weights = std::move(averaged[i]);
      project_local(nodes[i]);
      for (std::size_t k = 0; k < nodes[i].weights.size(); ++k) {
        tr.max_iterate_change =
            std::max(tr.max_iterate_change, std::abs(nodes[i].weights[k] - previous[i][k]));
      }
      previous[i] = nodes[i].weights;
    }
    tr.objective_projected = sum_objectives(nodes);
    result.trace.push_back(tr);
    result.rounds_used = round;

    const double gap = cfg.stop == GlobalStop::ProjectionGap ? tr.max_projection_change
                                                               : tr.max_iterate_change;
    if (gap < cfg.global_tol) {
      result.converged = true;
      break;
    }
  }

  result.learned = assemble(g, nodes);
  result.recount = transport.recount();
  return result;
}

} // namespace dgl
