#include "dgl/graph_model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

namespace dgl {

std::size_t pair_count(std::size_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n) {
  if (i > j) {
    std::swap(i, j);
  }
  if (i == j || j >= n) {
    throw std::out_of_range("pair_index: need i != j < n");
  }
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

std::pair<std::size_t, std::size_t> pair_from_index(std::size_t k, std::size_t n) {
  if (k >= pair_count(n)) {
    throw std::out_of_range("pair_from_index: index past the last pair");
  }
  // Row i holds n-1-i entries; walk rows. O(n) but only used off the hot path.
  std::size_t i = 0;
  std::size_t row_start = 0;
  while (row_start + (n - 1 - i) <= k) {
    row_start += n - 1 - i;
    ++i;
  }
  return {i, i + 1 + (k - row_start)};
}

// ---------------------------------------------------------------- CommGraph

CommGraph::CommGraph(std::vector<Point> positions, double radius)
    : positions_(std::move(positions)), radius_(radius) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("CommGraph: radius must be positive");
  }
  const std::size_t n = positions_.size();
  neighbors_.assign(n, {});
  const double r2 = radius * radius;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = positions_[i].x - positions_[j].x;
      const double dy = positions_[i].y - positions_[j].y;
      if (dx * dx + dy * dy <= r2) {
        neighbors_[i].push_back(static_cast<NodeId>(j));
        neighbors_[j].push_back(static_cast<NodeId>(i));
      }
    }
  }
  build_edge_list();
}

CommGraph CommGraph::from_edges(std::size_t n_nodes, std::span<const Edge> edges) {
  CommGraph g;
  g.neighbors_.assign(n_nodes, {});
  for (const Edge& e : edges) {
    if (e.u == e.v || e.u >= n_nodes || e.v >= n_nodes) {
      throw std::invalid_argument("CommGraph::from_edges: bad edge (" + std::to_string(e.u) +
                                  ", " + std::to_string(e.v) + ")");
    }
    g.neighbors_[e.u].push_back(e.v);
    g.neighbors_[e.v].push_back(e.u);
  }
  for (auto& nb : g.neighbors_) {
    std::sort(nb.begin(), nb.end());
    if (std::adjacent_find(nb.begin(), nb.end()) != nb.end()) {
      throw std::invalid_argument("CommGraph::from_edges: duplicate edge");
    }
  }
  g.build_edge_list();
  return g;
}

void CommGraph::build_edge_list() {
  edges_.clear();
  for (std::size_t i = 0; i < neighbors_.size(); ++i) {
    for (NodeId j : neighbors_[i]) {
      if (j > i) {
        edges_.push_back({static_cast<NodeId>(i), j});
      }
    }
  }
}

bool CommGraph::has_edge(NodeId i, NodeId j) const { return neighbor_slot(i, j) != npos; }

std::size_t CommGraph::neighbor_slot(NodeId i, NodeId j) const {
  const auto& nb = neighbors_.at(i);
  const auto it = std::lower_bound(nb.begin(), nb.end(), j);
  if (it == nb.end() || *it != j) {
    return npos;
  }
  return static_cast<std::size_t>(it - nb.begin());
}

double CommGraph::mean_degree() const {
  if (neighbors_.empty()) {
    return 0.0;
  }
  return 2.0 * static_cast<double>(edges_.size()) / static_cast<double>(neighbors_.size());
}

bool CommGraph::is_connected() const {
  if (neighbors_.empty()) {
    return true;
  }
  const auto dist = hop_distances(0);
  return std::none_of(dist.begin(), dist.end(), [](std::size_t d) { return d == npos; });
}

std::vector<std::size_t> CommGraph::hop_distances(NodeId source) const {
  std::vector<std::size_t> dist(neighbors_.size(), npos);
  std::deque<NodeId> queue{source};
  dist.at(source) = 0;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    for (NodeId v : neighbors_[u]) {
      if (dist[v] == npos) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

// ------------------------------------------------------------- UpperWeights

UpperWeights::UpperWeights(std::size_t n_nodes) : n_(n_nodes), values_(pair_count(n_nodes), 0.0) {}

UpperWeights::UpperWeights(std::size_t n_nodes, std::vector<double> values)
    : n_(n_nodes), values_(std::move(values)) {
  if (values_.size() != pair_count(n_)) {
    throw std::invalid_argument("UpperWeights: expected N(N-1)/2 values");
  }
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("UpperWeights: weights must be finite and nonnegative");
    }
  }
}

double UpperWeights::operator()(NodeId i, NodeId j) const {
  if (i == j) {
    return 0.0;
  }
  return values_[pair_index(i, j, n_)];
}

void UpperWeights::set(NodeId i, NodeId j, double w) {
  if (!(w >= 0.0) || !std::isfinite(w)) {
    throw std::invalid_argument("UpperWeights::set: weight must be finite and nonnegative");
  }
  values_[pair_index(i, j, n_)] = w;
}

void UpperWeights::check_support(const CommGraph& g) const {
  if (g.n_nodes() != n_) {
    throw std::invalid_argument("UpperWeights: node count differs from graph");
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (values_[k] != 0.0) {
      const auto [i, j] = pair_from_index(k, n_);
      if (!g.has_edge(static_cast<NodeId>(i), static_cast<NodeId>(j))) {
        throw std::invalid_argument("UpperWeights: weight on (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ") outside the communication graph");
      }
    }
  }
}

Eigen::MatrixXd UpperWeights::to_dense() const {
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j, ++k) {
      w(i, j) = values_[k];
      w(j, i) = values_[k];
    }
  }
  return w;
}

double UpperWeights::degree(NodeId i) const {
  double d = 0.0;
  for (std::size_t j = 0; j < n_; ++j) {
    if (j != i) {
      d += (*this)(i, static_cast<NodeId>(j));
    }
  }
  return d;
}

std::size_t UpperWeights::nonzero_count() const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](double v) { return v != 0.0; }));
}

// ------------------------------------------------------------- SignalMatrix

SignalMatrix::SignalMatrix(std::size_t n_nodes, std::size_t n_signals)
    : n_(n_nodes), m_(n_signals), data_(n_nodes * n_signals, 0.0) {}

SignalMatrix::SignalMatrix(std::size_t n_nodes, std::size_t n_signals, std::vector<double> row_major)
    : n_(n_nodes), m_(n_signals), data_(std::move(row_major)) {
  if (data_.size() != n_ * m_) {
    throw std::invalid_argument("SignalMatrix: data size is not N*M");
  }
  for (double v : data_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("SignalMatrix: non-finite entry");
    }
  }
}

SignalMatrix SignalMatrix::leading_columns(std::size_t count) const {
  if (count > m_) {
    throw std::invalid_argument("SignalMatrix::leading_columns: not enough columns");
  }
  SignalMatrix out(n_, count);
  for (std::size_t i = 0; i < n_; ++i) {
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(i * m_), count,
                out.data_.begin() + static_cast<std::ptrdiff_t>(i * count));
  }
  return out;
}

Eigen::MatrixXd SignalMatrix::to_eigen() const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(m_));
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = 0; k < m_; ++k) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = data_[i * m_ + k];
    }
  }
  return out;
}

// ---------------------------------------------------------- EdgeDifferences

EdgeDifferences::EdgeDifferences(const CommGraph& g, std::size_t n_signals)
    : z_(g.n_nodes()), n_signals_(n_signals) {
  for (NodeId i = 0; i < g.n_nodes(); ++i) {
    z_[i].assign(g.degree(i), 0.0);
  }
}

double EdgeDifferences::get(const CommGraph& g, NodeId i, NodeId j) const {
  const std::size_t slot = g.neighbor_slot(i, j);
  if (slot == CommGraph::npos) {
    throw std::out_of_range("EdgeDifferences::get: not a communication edge");
  }
  return z_[i][slot];
}

UpperWeights EdgeDifferences::to_upper(const CommGraph& g) const {
  UpperWeights out(g.n_nodes());
  for (const Edge& e : g.edges()) {
    out.set(e.u, e.v, get(g, e.u, e.v));
  }
  return out;
}

// --------------------------------------------------------------- operations

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    acc += d * d;
  }
  return acc;
}

Eigen::MatrixXd laplacian_from_weights(const UpperWeights& w) {
  Eigen::MatrixXd lap = -w.to_dense();
  for (Eigen::Index i = 0; i < lap.rows(); ++i) {
    lap(i, i) = -lap.row(i).sum();
  }
  return lap;
}

double smoothness(const UpperWeights& w, const SignalMatrix& x) {
  if (w.n_nodes() != x.n_nodes()) {
    throw std::invalid_argument("smoothness: weight and signal node counts differ");
  }
  const std::size_t n = w.n_nodes();
  const auto values = w.values();
  double total = 0.0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++k) {
      if (values[k] != 0.0) {
        total += values[k] * squared_distance(x.row(static_cast<NodeId>(i)),
                                              x.row(static_cast<NodeId>(j)));
      }
    }
  }
  return total;
}

EdgeDifferences edge_differences(const SignalMatrix& x, const CommGraph& g) {
  if (x.n_nodes() != g.n_nodes()) {
    throw std::invalid_argument("edge_differences: signal rows differ from node count");
  }
  EdgeDifferences out(g, x.n_signals());
  for (const Edge& e : g.edges()) {
    const double z = squared_distance(x.row(e.u), x.row(e.v));
    out.at_node(e.u)[g.neighbor_slot(e.u, e.v)] = z;
    out.at_node(e.v)[g.neighbor_slot(e.v, e.u)] = z;
  }
  return out;
}

} // namespace dgl
