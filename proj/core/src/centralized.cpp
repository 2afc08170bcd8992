#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "dgl/dist_loop.hpp"
#include "dgl/errors.hpp"

namespace dgl {

NodeId aggregation_center(const CommGraph& g) {
  NodeId best = 0;
  std::size_t best_ecc = std::numeric_limits<std::size_t>::max();
  for (NodeId c = 0; c < g.n_nodes(); ++c) {
    const auto dist = g.hop_distances(c);
    const std::size_t ecc = *std::max_element(dist.begin(), dist.end());
    if (ecc == CommGraph::npos) {
      throw std::invalid_argument("aggregation_center: graph is disconnected");
    }
    if (ecc < best_ecc) {
      best_ecc = ecc;
      best = c;
    }
  }
  return best;
}

CentralCost centralized_cost(const CommGraph& g, std::size_t n_signals, DownlinkModel downlink) {
  CentralCost cost;
  if (g.n_nodes() <= 1) {
    return cost;
  }
  cost.center = aggregation_center(g);
  const auto dist = g.hop_distances(cost.center);
  for (NodeId i = 0; i < g.n_nodes(); ++i) {
    const std::uint64_t hops = dist[i];
    cost.up += hops * n_signals;
    const std::uint64_t delivered =
        downlink == DownlinkModel::IncidentRows ? g.degree(i) : g.edge_count();
    cost.down += hops * delivered;
  }
  return cost;
}

namespace {

// Next hop toward the center: the lowest-id neighbor one hop closer.
std::vector<NodeId> parents_toward(const CommGraph& g, NodeId center,
                                   const std::vector<std::size_t>& dist) {
  std::vector<NodeId> parent(g.n_nodes(), center);
  for (NodeId i = 0; i < g.n_nodes(); ++i) {
    if (i == center) {
      continue;
    }
    for (NodeId j : g.neighbors(i)) {
      if (dist[j] + 1 == dist[i]) {
        parent[i] = j;
        break;
      }
    }
  }
  return parent;
}

// Moves every payload hop by hop through the transport, so the recount sees
// each relayed scalar on each edge it crosses.
MessageLedger simulate_central_traffic(const CommGraph& g, std::size_t n_signals,
                                       DownlinkModel downlink) {
  Transport transport(g);
  if (g.n_nodes() <= 1) {
    return transport.recount();
  }
  const NodeId center = aggregation_center(g);
  const auto dist = g.hop_distances(center);
  const auto parent = parents_toward(g, center, dist);

  // Uplink: signals travel child -> parent until they reach the center.
  for (NodeId i = 0; i < g.n_nodes(); ++i) {
    if (i == center) {
      continue;
    }
    NodeId at = i;
    std::vector<double> payload(n_signals, 0.0);
    while (at != center) {
      transport.send(parent[at], Message{at, Phase::CentralUp, i, center, std::move(payload)});
      auto inbox = transport.drain(parent[at]);
      payload = std::move(inbox.back().payload);
      at = parent[at];
    }
  }

  // Downlink: the center's reply retraces each path in reverse.
  for (NodeId i = 0; i < g.n_nodes(); ++i) {
    if (i == center) {
      continue;
    }
    std::vector<NodeId> path;
    for (NodeId at = i; at != center; at = parent[at]) {
      path.push_back(at);
    }
    const std::size_t width =
        downlink == DownlinkModel::IncidentRows ? g.degree(i) : g.edge_count();
    std::vector<double> payload(width, 0.0);
    NodeId at = center;
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      transport.send(*it, Message{at, Phase::CentralDown, center, i, std::move(payload)});
      payload = std::move(transport.drain(*it).back().payload);
      at = *it;
    }
  }
  return transport.recount();
}

void charge_central(RunResult& result, const CommGraph& g, std::size_t n_signals,
                    DownlinkModel downlink) {
  const CentralCost cost = centralized_cost(g, n_signals, downlink);
  result.ledger.charge(Phase::CentralUp, cost.up);
  result.ledger.charge(Phase::CentralDown, cost.down);
  result.recount = simulate_central_traffic(g, n_signals, downlink);
}

} // namespace

RunResult run_centralized(const CommGraph& g, const EdgeDifferences& z, const GlobalRunConfig& cfg,
                          std::size_t n_signals) {
  cfg.validate();
  if (z.n_nodes() != g.n_nodes()) {
    throw std::invalid_argument("run_centralized: differences do not match the graph");
  }
  const std::size_t n = g.n_nodes();
  const EdgeDifferences zs = scaled_differences(z, cfg.scaling);

  // Directed estimates laid out node by node, slots aligned with neighbors.
  std::vector<std::size_t> offset(n + 1, 0);
  for (NodeId i = 0; i < n; ++i) {
    offset[i + 1] = offset[i] + g.degree(i);
  }
  const std::size_t n_params = offset[n];
  std::vector<std::size_t> mirror(n_params);
  std::vector<double> zflat(n_params);
  std::vector<double> normalizer(n);
  for (NodeId i = 0; i < n; ++i) {
    const auto nb = g.neighbors(i);
    normalizer[i] = cfg.normalization == DataNormalization::NetworkSize
                        ? static_cast<double>(n)
                        : static_cast<double>(std::max<std::size_t>(nb.size(), 1));
    for (std::size_t k = 0; k < nb.size(); ++k) {
      mirror[offset[i] + k] = offset[nb[k]] + g.neighbor_slot(nb[k], i);
      zflat[offset[i] + k] = zs.at_node(i)[k];
    }
  }

  std::vector<double> w(n_params, 1.0);
  std::vector<double> grad(n_params, 0.0);
  std::vector<double> hinge(n, 0.0);
  Optimizer opt(n_params, cfg.optimizer_mode);

  auto objective = [&] {
    double total = 0.0;
    for (NodeId i = 0; i < n; ++i) {
      double data = 0.0;
      double d = 0.0;
      for (std::size_t p = offset[i]; p < offset[i + 1]; ++p) {
        data += w[p] * zflat[p];
        d += w[p];
      }
      hinge[i] = std::max(0.0, cfg.eta - d);
      total += data / normalizer[i] + hinge[i] * hinge[i];
    }
    return total;
  };

  RunResult result;
  std::deque<double> history{objective()};
  std::size_t step = 0;
  while (step < cfg.central_step_cap && !objective_settled(history, cfg.local_window, cfg.local_tol)) {
    for (NodeId i = 0; i < n; ++i) {
      for (std::size_t p = offset[i]; p < offset[i + 1]; ++p) {
        grad[p] = zflat[p] / normalizer[i] - 2.0 * hinge[i];
      }
    }
    // Both directed copies see the gradient of the shared weight. Feeding the
    // raw per-node gradients to Adam separately lets the per-coordinate
    // normalization cancel in the projection at non-optimal points.
    for (std::size_t p = 0; p < n_params; ++p) {
      const std::size_t q = mirror[p];
      if (p < q) {
        const double shared = 0.5 * (grad[p] + grad[q]);
        grad[p] = shared;
        grad[q] = shared;
      }
    }
    opt.step(w, grad, cfg.lr);
    for (double& v : w) {
      v = std::max(v, 0.0);
    }
    for (std::size_t p = 0; p < n_params; ++p) {
      const std::size_t q = mirror[p];
      if (p < q) {
        const double mean = symmetry_project(w[p], w[q]);
        if (!std::isfinite(mean)) {
          throw DiagnosticError("non-finite weight in centralized solve");
        }
        w[p] = mean;
        w[q] = mean;
      }
    }
    for (std::size_t p = 0; p < n_params; ++p) {
      result.max_asymmetry = std::max(result.max_asymmetry, std::abs(w[p] - w[mirror[p]]));
    }
    ++step;
    history.push_back(objective());
    if (history.size() > cfg.local_window + 1) {
      history.pop_front();
    }
  }

  result.learned = UpperWeights(n);
  for (NodeId i = 0; i < n; ++i) {
    const auto nb = g.neighbors(i);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (i < nb[k]) {
        result.learned.set(i, nb[k], w[offset[i] + k]);
      }
    }
  }
  result.rounds_used = step;
  result.converged = objective_settled(history, cfg.local_window, cfg.local_tol);
  charge_central(result, g, n_signals, cfg.downlink);
  return result;
}

RunResult run_baseline_logdegree(const CommGraph& g, const EdgeDifferences& z,
                                 const BaselineConfig& baseline, const GlobalRunConfig& cfg,
                                 std::size_t n_signals) {
  cfg.validate();
  if (!(baseline.alpha > 0.0) || !(baseline.beta > 0.0)) {
    throw std::invalid_argument("run_baseline_logdegree: alpha and beta must be positive");
  }
  if (z.n_nodes() != g.n_nodes()) {
    throw std::invalid_argument("run_baseline_logdegree: differences do not match the graph");
  }
  constexpr double kDegreeFloor = 1e-12;
  const std::size_t n = g.n_nodes();
  const EdgeDifferences zs = scaled_differences(z, cfg.scaling);
  const auto& edges = g.edges();
  std::vector<double> zedge(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    zedge[e] = zs.get(g, edges[e].u, edges[e].v);
  }

  std::vector<double> w(edges.size(), 1.0);
  std::vector<double> grad(edges.size(), 0.0);
  std::vector<double> degree(n, 0.0);
  Optimizer opt(edges.size(), cfg.optimizer_mode);

  auto objective = [&] {
    std::fill(degree.begin(), degree.end(), 0.0);
    double total = 0.0;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      degree[edges[e].u] += w[e];
      degree[edges[e].v] += w[e];
      total += w[e] * zedge[e] + baseline.beta * w[e] * w[e];
    }
    for (double d : degree) {
      total -= baseline.alpha * std::log(std::max(d, kDegreeFloor));
    }
    return total;
  };

  RunResult result;
  std::deque<double> history{objective()};
  std::size_t step = 0;
  while (step < cfg.central_step_cap && !objective_settled(history, cfg.local_window, cfg.local_tol)) {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const double du = std::max(degree[edges[e].u], kDegreeFloor);
      const double dv = std::max(degree[edges[e].v], kDegreeFloor);
      grad[e] = zedge[e] - baseline.alpha * (1.0 / du + 1.0 / dv) + 2.0 * baseline.beta * w[e];
    }
    opt.step(w, grad, cfg.lr);
    for (double& v : w) {
      v = std::max(v, 0.0);
    }
    ++step;
    history.push_back(objective());
    if (history.size() > cfg.local_window + 1) {
      history.pop_front();
    }
  }

  result.learned = UpperWeights(n);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    result.learned.set(edges[e].u, edges[e].v, w[e]);
  }
  result.rounds_used = step;
  result.converged = objective_settled(history, cfg.local_window, cfg.local_tol);
  charge_central(result, g, n_signals, cfg.downlink);
  return result;
}

} // namespace dgl
