#include "dgl/synth.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "dgl/errors.hpp"
#include "dgl/rng.hpp"

namespace dgl {

double GenConfig::effective_radius() const {
  return radius.value_or(2.0 / std::sqrt(static_cast<double>(n_nodes)));
}

void GenConfig::validate() const {
  if (n_nodes == 0) {
    throw std::invalid_argument("GenConfig: n_nodes must be at least 1");
  }
  if (!(effective_radius() > 0.0)) {
    throw std::invalid_argument("GenConfig: radius must be positive");
  }
  if (!(removal_rate >= 0.0 && removal_rate < 1.0)) {
    throw std::invalid_argument("GenConfig: removal_rate must lie in [0, 1)");
  }
  if (n_signals == 0) {
    throw std::invalid_argument("GenConfig: n_signals must be at least 1");
  }
  if (!(weight_low > 0.0) || !(weight_high >= weight_low)) {
    throw std::invalid_argument("GenConfig: need 0 < weight_low <= weight_high");
  }
  if (!(signal_noise >= 0.0)) {
    throw std::invalid_argument("GenConfig: signal_noise must be nonnegative");
  }
  if (connect_retry_cap == 0) {
    throw std::invalid_argument("GenConfig: connect_retry_cap must be at least 1");
  }
}

CommGraph generate_comm_graph(const GenConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed, streams::kCommGraph);
  std::vector<Point> positions(cfg.n_nodes);
  for (std::size_t attempt = 0; attempt < cfg.connect_retry_cap; ++attempt) {
    for (Point& p : positions) {
      p.x = rng.uniform();
      p.y = rng.uniform();
    }
    CommGraph g(positions, cfg.effective_radius());
    if (g.is_connected()) {
      return g;
    }
  }
  throw DiagnosticError("no connected communication graph after " +
                        std::to_string(cfg.connect_retry_cap) + " draws with N=" +
                        std::to_string(cfg.n_nodes) + ", radius=" +
                        std::to_string(cfg.effective_radius()) + "; the radius is too small");
}

DataGraph generate_data_graph(std::shared_ptr<const CommGraph> g, const GenConfig& cfg) {
  cfg.validate();
  if (!g) {
    throw std::invalid_argument("generate_data_graph: null communication graph");
  }
  Rng rng(cfg.seed, streams::kDataGraph);
  const auto& edges = g->edges();
  const std::size_t n_edges = edges.size();
  const auto n_remove =
      static_cast<std::size_t>(std::floor(cfg.removal_rate * static_cast<double>(n_edges)));

  // Partial Fisher-Yates: the first n_remove slots are the removed edges.
  std::vector<std::size_t> order(n_edges);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t k = 0; k < n_remove; ++k) {
    const std::size_t pick = k + static_cast<std::size_t>(rng.below(n_edges - k));
    std::swap(order[k], order[pick]);
  }
  std::vector<bool> removed(n_edges, false);
  for (std::size_t k = 0; k < n_remove; ++k) {
    removed[order[k]] = true;
  }

  UpperWeights w(g->n_nodes());
  for (std::size_t e = 0; e < n_edges; ++e) {
    if (!removed[e]) {
      w.set(edges[e].u, edges[e].v, rng.uniform(cfg.weight_low, cfg.weight_high));
    }
  }
  return DataGraph{std::move(w), std::move(g)};
}

SignalMatrix generate_smooth_signals(const DataGraph& d, const GenConfig& cfg) {
  cfg.validate();
  const std::size_t n = d.weights.n_nodes();
  const std::size_t m = cfg.n_signals;
  const Eigen::MatrixXd lap = laplacian_from_weights(d.weights);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lap);
  if (eig.info() != Eigen::Success) {
    throw DiagnosticError("eigendecomposition of the ground-truth Laplacian failed");
  }
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double lambda_max = lambda.size() > 0 ? lambda.maxCoeff() : 0.0;
  const double null_tol = 1e-9 * std::max(1.0, lambda_max);

  // Standard deviation along each eigenvector of the covariance.
  Eigen::VectorXd scale(static_cast<Eigen::Index>(n));
  for (Eigen::Index k = 0; k < scale.size(); ++k) {
    const double inv = lambda(k) > null_tol ? 1.0 / lambda(k) : 0.0;
    scale(k) = std::sqrt(inv + cfg.signal_noise);
  }

  Rng rng(cfg.seed, streams::kSignals);
  const Eigen::MatrixXd& basis = eig.eigenvectors();
  Eigen::VectorXd draw(static_cast<Eigen::Index>(n));
  Eigen::VectorXd column(static_cast<Eigen::Index>(n));
  std::vector<double> row_major(n * m);
  // Column by column, so column c depends only on the c-th block of draws.
  for (std::size_t c = 0; c < m; ++c) {
    for (Eigen::Index r = 0; r < draw.size(); ++r) {
      draw(r) = scale(r) * rng.normal();
    }
    column.noalias() = basis * draw;
    for (std::size_t i = 0; i < n; ++i) {
      row_major[i * m + c] = column(static_cast<Eigen::Index>(i));
    }
  }
  return SignalMatrix(n, m, std::move(row_major));
}

SyntheticInstance generate_instance(const GenConfig& cfg) {
  auto comm = std::make_shared<const CommGraph>(generate_comm_graph(cfg));
  DataGraph truth = generate_data_graph(comm, cfg);
  SignalMatrix signals = generate_smooth_signals(truth, cfg);
  return {std::move(comm), std::move(truth), std::move(signals)};
}

} // namespace dgl
