#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>

namespace scfto {

using NodeId = std::uint32_t;

struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

/// Malicious tier k scales the base attack probabilities by k.
enum class Role : std::uint8_t {
  Normal = 0,
  Generic = 1,
  Advanced = 2,
  Super = 3,
};

constexpr bool is_malicious(Role r) { return r != Role::Normal; }
constexpr int tier(Role r) { return static_cast<int>(r); }

/// One entry of a node's cluster-head history: the head it joined and the
/// trust it held in that head when it made the choice.
struct HeadRecord {
  NodeId head = 0;
  double trust_at_selection = 0.0;
};

struct NodeState {
  NodeId id = 0;
  Position position;
  double energy_j = 0.0;
  Role role = Role::Normal;
  std::deque<HeadRecord> head_history;
  std::optional<std::uint64_t> last_head_round;
  bool alive = true;
  double p_ch = 0.0;

  /// Rounds elapsed since this node last served as head, or nullopt if never.
  std::optional<std::uint64_t> rounds_since_head(std::uint64_t round) const {
    if (!last_head_round) return std::nullopt;
    return round - *last_head_round;
  }

  void remember_head(NodeId head, double trust, std::size_t capacity) {
    head_history.push_back({head, trust});
    while (head_history.size() > capacity) head_history.pop_front();
  }
};

}  // namespace scfto
