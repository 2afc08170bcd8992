#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace dgl {

using NodeId = std::uint32_t;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Undirected edge stored with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Upper-triangular pair indexing. Pair (i, j) with i < j maps to
//   i*N - i*(i+1)/2 + (j - i - 1)
// which enumerates row 0 first, then row 1, and so on.
std::size_t pair_count(std::size_t n);
std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n);
std::pair<std::size_t, std::size_t> pair_from_index(std::size_t k, std::size_t n);

/// Unweighted, undirected communication topology.
///
/// Graphs built from positions satisfy "edge iff distance <= radius". Graphs
/// built from an explicit edge list carry no geometry (positions empty,
/// radius 0) and exist for hand-constructed topologies.
class CommGraph {
public:
  CommGraph() = default;
  CommGraph(std::vector<Point> positions, double radius);

  static CommGraph from_edges(std::size_t n_nodes, std::span<const Edge> edges);

  std::size_t n_nodes() const noexcept { return neighbors_.size(); }
  double radius() const noexcept { return radius_; }
  const std::vector<Point>& positions() const noexcept { return positions_; }

  /// Neighbors of i, sorted ascending.
  std::span<const NodeId> neighbors(NodeId i) const { return neighbors_[i]; }
  std::size_t degree(NodeId i) const { return neighbors_[i].size(); }

  /// All edges with u < v in lexicographic order.
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  bool has_edge(NodeId i, NodeId j) const;

  /// Position of j inside neighbors(i), or npos when absent.
  std::size_t neighbor_slot(NodeId i, NodeId j) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  double mean_degree() const;
  bool is_connected() const;

  /// BFS hop distances from source; unreachable nodes get npos.
  std::vector<std::size_t> hop_distances(NodeId source) const;

private:
  void build_edge_list();

  std::vector<Point> positions_;
  double radius_ = 0.0;
  std::vector<std::vector<NodeId>> neighbors_;
  std::vector<Edge> edges_;
};

/// Upper-triangular part of a symmetric, zero-diagonal, nonnegative weight
/// matrix. Dense: used by metrics and the centralized paths.
class UpperWeights {
public:
  UpperWeights() = default;
  explicit UpperWeights(std::size_t n_nodes);
  UpperWeights(std::size_t n_nodes, std::vector<double> values);

  std::size_t n_nodes() const noexcept { return n_; }
  std::span<const double> values() const noexcept { return values_; }

  double operator()(NodeId i, NodeId j) const;
  void set(NodeId i, NodeId j, double w);

  /// Throws std::invalid_argument if any weight sits outside the edges of g.
  void check_support(const CommGraph& g) const;

  /// Dense symmetric N x N matrix.
  Eigen::MatrixXd to_dense() const;

  double degree(NodeId i) const;
  std::size_t nonzero_count() const;

  friend bool operator==(const UpperWeights&, const UpperWeights&) = default;

private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

/// Ground-truth weighted graph, a spanning subgraph of a CommGraph.
struct DataGraph {
  UpperWeights weights;
  std::shared_ptr<const CommGraph> source;
};

/// N x M real matrix, row i holding the feature vector of node i.
class SignalMatrix {
public:
  SignalMatrix() = default;
  SignalMatrix(std::size_t n_nodes, std::size_t n_signals);
  SignalMatrix(std::size_t n_nodes, std::size_t n_signals, std::vector<double> row_major);

  std::size_t n_nodes() const noexcept { return n_; }
  std::size_t n_signals() const noexcept { return m_; }

  std::span<const double> row(NodeId i) const { return {data_.data() + i * m_, m_}; }
  std::span<double> row(NodeId i) { return {data_.data() + i * m_, m_}; }
  double operator()(NodeId i, std::size_t k) const { return data_[i * m_ + k]; }
  double& operator()(NodeId i, std::size_t k) { return data_[i * m_ + k]; }

  const std::vector<double>& data() const noexcept { return data_; }

  /// Copy of the first `count` columns.
  SignalMatrix leading_columns(std::size_t count) const;

  Eigen::MatrixXd to_eigen() const;

  friend bool operator==(const SignalMatrix&, const SignalMatrix&) = default;

private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<double> data_;
};

/// z_ij = ||x_i - x_j||^2 held at node i for each communication neighbor j.
/// Slots are aligned with CommGraph::neighbors(i).
class EdgeDifferences {
public:
  EdgeDifferences() = default;
  EdgeDifferences(const CommGraph& g, std::size_t n_signals);

  std::size_t n_nodes() const noexcept { return z_.size(); }
  std::size_t n_signals() const noexcept { return n_signals_; }

  std::span<const double> at_node(NodeId i) const { return z_[i]; }
  std::span<double> at_node(NodeId i) { return z_[i]; }

  /// Value stored at node i for neighbor j; throws if j is not a neighbor.
  double get(const CommGraph& g, NodeId i, NodeId j) const;

  /// Dense upper-triangular view (zeros off the communication edges).
  UpperWeights to_upper(const CommGraph& g) const;

  friend bool operator==(const EdgeDifferences&, const EdgeDifferences&) = default;

private:
  std::vector<std::vector<double>> z_;
  std::size_t n_signals_ = 0;
};

/// Sum of squared coordinate differences, accumulated in index order.
double squared_distance(std::span<const double> a, std::span<const double> b);

/// Combinatorial Laplacian L = D - W of the weights.
Eigen::MatrixXd laplacian_from_weights(const UpperWeights& w);

/// sum over pairs i<j of w_ij ||x_i - x_j||^2, which equals tr(X^T L X).
double smoothness(const UpperWeights& w, const SignalMatrix& x);

/// Centralized reference computation of z over every communication edge.
EdgeDifferences edge_differences(const SignalMatrix& x, const CommGraph& g);

} // namespace dgl
