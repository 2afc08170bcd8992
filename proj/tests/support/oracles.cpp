#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace dgl::oracle {

bool connected(std::size_t n, std::span<const Edge> edges) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  std::size_t components = n;
  for (const Edge& e : edges) {
    const auto a = find(e.u);
    const auto b = find(e.v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components <= 1;
}

CommGraph random_geometric_graph(std::size_t n, double radius, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<Point> pos(n);
    for (auto& p : pos) {
      p = {u(rng), u(rng)};
    }
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dx = pos[i].x - pos[j].x;
        const double dy = pos[i].y - pos[j].y;
        if (dx * dx + dy * dy <= radius * radius) {
          edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
        }
      }
    }
    if (connected(n, edges)) {
      return CommGraph(pos, radius);
    }
  }
  throw std::runtime_error("random_geometric_graph: radius too small");
}

std::vector<std::vector<std::size_t>> all_pairs_hops(const CommGraph& g) {
  const std::size_t n = g.n_nodes();
  constexpr std::size_t inf = std::numeric_limits<std::size_t>::max() / 4;
  std::vector<std::vector<std::size_t>> d(n, std::vector<std::size_t>(n, inf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
  }
  for (const Edge& e : g.edges()) {
    d[e.u][e.v] = 1;
    d[e.v][e.u] = 1;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
      }
    }
  }
  return d;
}

CentralCostOracle central_cost(const CommGraph& g, std::size_t n_signals, bool full_broadcast) {
  const auto d = all_pairs_hops(g);
  const std::size_t n = g.n_nodes();
  CentralCostOracle best{0, 0, 0};
  std::size_t best_ecc = std::numeric_limits<std::size_t>::max();
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t ecc = *std::max_element(d[c].begin(), d[c].end());
    if (ecc < best_ecc) {
      best_ecc = ecc;
      best.center = static_cast<NodeId>(c);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t hops = d[best.center][i];
    best.up += hops * n_signals;
    best.down += hops * (full_broadcast ? g.edge_count() : g.degree(static_cast<NodeId>(i)));
  }
  return best;
}

SignalMatrix random_signals(std::size_t n, std::size_t m, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  SignalMatrix x(n, m);
  std::vector<double> values(n * m);
  for (double& v : values) {
    v = nd(rng);
  }
  return SignalMatrix(n, m, std::move(values));
}

double squared_difference(const SignalMatrix& x, NodeId i, NodeId j) {
  const NodeId lo = std::min(i, j);
  const NodeId hi = std::max(i, j);
  const auto a = x.row(lo);
  const auto b = x.row(hi);
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

Eigen::MatrixXd dense_laplacian(const UpperWeights& w) {
  const std::size_t n = w.n_nodes();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) {
        continue;
      }
      const double wij = w(static_cast<NodeId>(i), static_cast<NodeId>(j));
      l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = -wij;
      l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += wij;
    }
  }
  return l;
}

double dense_trace_smoothness(const UpperWeights& w, const SignalMatrix& x) {
  const Eigen::MatrixXd l = dense_laplacian(w);
  const Eigen::MatrixXd xm = x.to_eigen();
  return (xm.transpose() * l * xm).trace();
}

double dense_frobenius(const UpperWeights& a, const UpperWeights& b) {
  return (a.to_dense() - b.to_dense()).norm();
}

std::vector<double> finite_difference(const std::function<double(std::span<const double>)>& f,
                                      std::vector<double> x, double h) {
  std::vector<double> g(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double orig = x[k];
    x[k] = orig + h;
    const double up = f(x);
    x[k] = orig - h;
    const double down = f(x);
    x[k] = orig;
    g[k] = (up - down) / (2.0 * h);
  }
  return g;
}

std::vector<double> grid_minimize(const std::function<double(std::span<const double>)>& f,
                                  std::size_t dims, double lo, double hi, double resolution) {
  if (dims == 0 || dims > 3) {
    throw std::invalid_argument("grid_minimize: 1 to 3 dimensions");
  }
  constexpr int kPoints = 40;
  std::vector<double> best(dims, lo);
  double spacing = (hi - lo) / kPoints;
  std::vector<double> box_lo(dims, lo);
  std::vector<double> x(dims);
  for (;;) {
    double best_val = std::numeric_limits<double>::infinity();
    std::vector<double> incumbent = best;
    const int n1 = kPoints + 1;
    const int total = dims == 1 ? n1 : dims == 2 ? n1 * n1 : n1 * n1 * n1;
    for (int idx = 0; idx < total; ++idx) {
      int rest = idx;
      bool inside = true;
      for (std::size_t d = 0; d < dims; ++d) {
        x[d] = box_lo[d] + spacing * (rest % n1);
        rest /= n1;
        if (x[d] < lo - 1e-15 || x[d] > hi + 1e-15) {
          inside = false;
        }
      }
      if (!inside) {
        continue;
      }
      const double v = f(x);
      if (v < best_val) {
        best_val = v;
        incumbent = x;
      }
    }
    best = incumbent;
    if (spacing <= resolution) {
      return best;
    }
    const double next = std::max(spacing / 10.0, resolution);
    for (std::size_t d = 0; d < dims; ++d) {
      box_lo[d] = best[d] - next * (kPoints / 2);
    }
    spacing = next;
  }
}

UpperWeights degree_preserving_rewire(const UpperWeights& w, std::size_t swaps,
                                      std::mt19937_64& rng) {
  const std::size_t n = w.n_nodes();
  struct WE {
    NodeId a, b;
    double w;
  };
  std::vector<WE> edges;
  std::set<std::pair<NodeId, NodeId>> present;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      if (w(i, j) > 0.0) {
        edges.push_back({i, j, w(i, j)});
        present.insert({i, j});
      }
    }
  }
  if (edges.size() < 2) {
    return w;
  }
  std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
  auto key = [](NodeId a, NodeId b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
  for (std::size_t s = 0; s < swaps; ++s) {
    WE& e1 = edges[pick(rng)];
    WE& e2 = edges[pick(rng)];
    if (&e1 == &e2) {
      continue;
    }
    if (rng() & 1U) {
      std::swap(e2.a, e2.b);
    }
    const NodeId a = e1.a, b = e1.b, c = e2.a, d = e2.b;
    if (a == d || c == b || present.contains(key(a, d)) || present.contains(key(c, b))) {
      continue;
    }
    present.erase(key(a, b));
    present.erase(key(c, d));
    present.insert(key(a, d));
    present.insert(key(c, b));
    e1.b = d;
    e2.b = b;
  }
  UpperWeights out(n);
  for (const WE& e : edges) {
    out.set(e.a, e.b, e.w);
  }
  return out;
}

double local_objective(std::span<const double> w, std::span<const double> z, double eta,
                       double normalizer) {
  double data = 0.0;
  double d = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    data += w[k] * z[k];
    d += w[k];
  }
  const double gap = eta > d ? eta - d : 0.0;
  return data / normalizer + gap * gap;
}

} // namespace dgl::oracle
