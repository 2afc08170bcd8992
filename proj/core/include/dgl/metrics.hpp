#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dgl/graph_model.hpp"
#include "dgl/ledger.hpp"

namespace dgl {

/// ||A - B||_F over the full symmetric matrices.
double frobenius_error(const UpperWeights& a, const UpperWeights& b);

/// || A/||A||_F - B/||B||_F ||_F. Empty when either matrix is zero, since the
/// normalization is undefined there.
std::optional<double> normalized_frobenius_error(const UpperWeights& a, const UpperWeights& b);

/// Order-2 Wasserstein distance between two empirical distributions on the
/// real line. Sizes may differ; equal sizes reduce to the RMS difference of
/// the sorted samples. Empty when either sample is empty.
std::optional<double> wasserstein2_1d(std::vector<double> a, std::vector<double> b);

/// W2 between the multisets of weights on the communication edges, with
/// structural zeros inside that support included.
double wasserstein_distance(const UpperWeights& a, const UpperWeights& b, const CommGraph& support);

/// W2 between the strictly positive weights of each matrix only. Empty when
/// either matrix has no positive weight.
std::optional<double> wasserstein_nonzero(const UpperWeights& a, const UpperWeights& b);

struct MetricsReport {
  double frobenius = 0.0;
  std::optional<double> normalized_frobenius;
  double wasserstein = 0.0;
  std::optional<double> wasserstein_nonzero;
  std::uint64_t total_messages = 0;
  MessageLedger phases;
};

MetricsReport make_report(const UpperWeights& learned, const UpperWeights& truth,
                          const CommGraph& support, const MessageLedger& ledger);

} // namespace dgl
