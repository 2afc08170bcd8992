#include "dgl/ledger.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace dgl {

std::string_view phase_name(Phase p) {
  switch (p) {
  case Phase::InitSignals:
    return "init_signals";
  case Phase::InitResults:
    return "init_results";
  case Phase::WeightExchange:
    return "weight_exchange";
  case Phase::CentralUp:
    return "central_up";
  case Phase::CentralDown:
    return "central_down";
  }
  return "unknown";
}

std::optional<Phase> phase_from_name(std::string_view name) {
  for (Phase p : kAllPhases) {
    if (phase_name(p) == name) {
      return p;
    }
  }
  return std::nullopt;
}

std::uint64_t MessageLedger::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

void MessageLedger::write_csv(std::ostream& os) const {
  os << "phase,count\n";
  for (Phase p : kAllPhases) {
    os << phase_name(p) << ',' << count(p) << '\n';
  }
}

MessageLedger& MessageLedger::operator+=(const MessageLedger& other) {
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    counts_[k] += other.counts_[k];
  }
  return *this;
}

Transport::Transport(const CommGraph& g) : graph_(&g), inboxes_(g.n_nodes()) {}

void Transport::send(NodeId to, Message msg) {
  if (!graph_->has_edge(msg.from, to)) {
    throw std::logic_error("Transport: " + std::to_string(msg.from) + " -> " + std::to_string(to) +
                           " is not a communication edge");
  }
  recount_.charge(msg.phase, msg.payload.size());
  inboxes_[to].push_back(std::move(msg));
}

std::vector<Message> Transport::drain(NodeId node) {
  std::vector<Message> out;
  out.swap(inboxes_.at(node));
  return out;
}

bool Transport::idle() const {
  return std::all_of(inboxes_.begin(), inboxes_.end(), [](const auto& q) { return q.empty(); });
}

} // namespace dgl
