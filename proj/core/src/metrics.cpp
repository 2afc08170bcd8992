#include "dgl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dgl {
namespace {

void check_same_size(const UpperWeights& a, const UpperWeights& b) {
  if (a.n_nodes() != b.n_nodes()) {
    throw std::invalid_argument("metrics: weight matrices have different node counts");
  }
}

double upper_norm_sq(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) {
    s += x * x;
  }
  return s;
}

} // namespace

double frobenius_error(const UpperWeights& a, const UpperWeights& b) {
  check_same_size(a, b);
  const auto va = a.values();
  const auto vb = b.values();
  double s = 0.0;
  for (std::size_t k = 0; k < va.size(); ++k) {
    const double d = va[k] - vb[k];
    s += d * d;
  }
  // Each off-diagonal pair appears twice in the full matrix.
  return std::sqrt(2.0 * s);
}

std::optional<double> normalized_frobenius_error(const UpperWeights& a, const UpperWeights& b) {
  check_same_size(a, b);
  const auto va = a.values();
  const auto vb = b.values();
  const double na = std::sqrt(2.0 * upper_norm_sq(va));
  const double nb = std::sqrt(2.0 * upper_norm_sq(vb));
  if (na == 0.0 || nb == 0.0) {
    return std::nullopt;
  }
  double s = 0.0;
  for (std::size_t k = 0; k < va.size(); ++k) {
    const double d = va[k] / na - vb[k] / nb;
    s += d * d;
  }
  return std::sqrt(2.0 * s);
}

std::optional<double> wasserstein2_1d(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) {
    return std::nullopt;
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a.size() == b.size()) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double d = a[k] - b[k];
      s += d * d;
    }
    return std::sqrt(s / static_cast<double>(a.size()));
  }
  // Integrate (F^-1(t) - G^-1(t))^2 over the merged quantile breakpoints.
  // Breakpoints are k/na and l/nb; compare with cross-multiplied integers to
  // avoid rounding in the ordering.
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  std::size_t i = 0;
  std::size_t j = 0;
  double t_prev = 0.0;
  double s = 0.0;
  while (i < na && j < nb) {
    const std::size_t next_a = (i + 1) * nb;
    const std::size_t next_b = (j + 1) * na;
    const std::size_t next = std::min(next_a, next_b);
    const double t = static_cast<double>(next) / static_cast<double>(na * nb);
    const double d = a[i] - b[j];
    s += (t - t_prev) * d * d;
    t_prev = t;
    if (next_a == next) {
      ++i;
    }
    if (next_b == next) {
      ++j;
    }
  }
  return std::sqrt(s);
}

double wasserstein_distance(const UpperWeights& a, const UpperWeights& b, const CommGraph& support) {
  check_same_size(a, b);
  if (support.n_nodes() != a.n_nodes()) {
    throw std::invalid_argument("wasserstein_distance: support graph has a different node count");
  }
  std::vector<double> va;
  std::vector<double> vb;
  va.reserve(support.edge_count());
  vb.reserve(support.edge_count());
  for (const Edge& e : support.edges()) {
    va.push_back(a(e.u, e.v));
    vb.push_back(b(e.u, e.v));
  }
  return wasserstein2_1d(std::move(va), std::move(vb)).value_or(0.0);
}

std::optional<double> wasserstein_nonzero(const UpperWeights& a, const UpperWeights& b) {
  check_same_size(a, b);
  std::vector<double> va;
  std::vector<double> vb;
  for (double v : a.values()) {
    if (v > 0.0) {
      va.push_back(v);
    }
  }
  for (double v : b.values()) {
    if (v > 0.0) {
      vb.push_back(v);
    }
  }
  return wasserstein2_1d(std::move(va), std::move(vb));
}

MetricsReport make_report(const UpperWeights& learned, const UpperWeights& truth,
                          const CommGraph& support, const MessageLedger& ledger) {
  MetricsReport r;
  r.frobenius = frobenius_error(learned, truth);
  r.normalized_frobenius = normalized_frobenius_error(learned, truth);
  r.wasserstein = wasserstein_distance(learned, truth, support);
  r.wasserstein_nonzero = wasserstein_nonzero(learned, truth);
  r.total_messages = ledger.total();
  r.phases = ledger;
  return r;
}

} // namespace dgl
