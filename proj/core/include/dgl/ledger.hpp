#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "dgl/graph_model.hpp"

namespace dgl {

enum class Phase : std::uint8_t {
  InitSignals,
  InitResults,
  WeightExchange,
  CentralUp,
  CentralDown,
};

inline constexpr std::array<Phase, 5> kAllPhases = {
    Phase::InitSignals, Phase::InitResults, Phase::WeightExchange, Phase::CentralUp,
    Phase::CentralDown};

std::string_view phase_name(Phase p);
std::optional<Phase> phase_from_name(std::string_view name);

/// Per-phase scalar-message counters. One transmitted scalar over one
/// communication edge is one message.
class MessageLedger {
public:
  void charge(Phase p, std::uint64_t messages) { counts_[index(p)] += messages; }
  std::uint64_t count(Phase p) const { return counts_[index(p)]; }
  std::uint64_t total() const;

  /// "phase,count" header then one line per phase, in kAllPhases order.
  void write_csv(std::ostream& os) const;

  MessageLedger& operator+=(const MessageLedger& other);
  friend bool operator==(const MessageLedger&, const MessageLedger&) = default;

private:
  static std::size_t index(Phase p) { return static_cast<std::size_t>(p); }
  std::array<std::uint64_t, kAllPhases.size()> counts_{};
};

/// A message in flight. `a` and `b` are routing/identification header fields
/// (which signal, which pair) and are not charged; only payload scalars are.
struct Message {
  NodeId from = 0;
  Phase phase = Phase::InitSignals;
  NodeId a = 0;
  NodeId b = 0;
  std::vector<double> payload;
};

/// Ideal synchronous channel restricted to 1-hop neighbors of the
/// communication graph. Keeps its own per-phase recount of delivered scalars,
/// independent of whatever the algorithms charge to their ledgers.
class Transport {
public:
  explicit Transport(const CommGraph& g);

  /// Throws std::logic_error when from/to are not communication neighbors.
  void send(NodeId to, Message msg);

  /// Removes and returns everything queued for `node`, in arrival order.
  std::vector<Message> drain(NodeId node);

  bool idle() const;
  const MessageLedger& recount() const noexcept { return recount_; }

private:
  const CommGraph* graph_;
  std::vector<std::vector<Message>> inboxes_;
  MessageLedger recount_;
};

} // namespace dgl
