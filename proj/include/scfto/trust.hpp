#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "scfto/fuzzy.hpp"
#include "scfto/node.hpp"

namespace scfto {

/// What an observer concluded about one forwarding obligation of its head.
enum class ForwardingOutcome : std::uint8_t { Forwarded, ForwardedDelayed, Dropped };

struct EvidenceCounters {
  std::uint64_t total_forwarding = 0;
  std::uint64_t successes = 0;
  std::uint64_t delayed = 0;

  friend bool operator==(const EvidenceCounters&, const EvidenceCounters&) = default;
};

/// Forwarding rate and forwarding-delay ratio derived from counters.
struct Evidence {
  double dfr = 0.0;
  double dfd = 0.0;
};

class NoEvidenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void count_outcome(EvidenceCounters& c, ForwardingOutcome outcome) {
  ++c.total_forwarding;
  if (outcome != ForwardingOutcome::Dropped) ++c.successes;
  if (outcome == ForwardingOutcome::ForwardedDelayed) ++c.delayed;
}

inline Evidence evidence(const EvidenceCounters& c) {
  if (c.total_forwarding == 0) throw NoEvidenceError("no forwarding observed");
  Evidence e;
  e.dfr = static_cast<double>(c.successes) / static_cast<double>(c.total_forwarding);
  // With no successes the DFR is 0 and the bypass rule pins trust to 0.
  e.dfd = c.successes > 0 ? static_cast<double>(c.delayed) / static_cast<double>(c.successes) : 0.0;
  return e;
}

/// An observer's view of one other node. An entry stays Unknown until it is
/// written by inference or by a recommendation from a positively trusted head.
struct TrustEntry {
  std::optional<double> value;
  EvidenceCounters counters;
  std::uint64_t last_update_round = 0;

  bool known() const { return value.has_value(); }
};

/// Recommendation merge. `via` is the observer's trust in the recommending
/// head, `recommended` the head's trust in the subject. Returns false (and
/// leaves the entry untouched) when the head is not positively trusted.
inline bool merge_recommendation(TrustEntry& subject, std::optional<double> via,
                                 double recommended, std::uint64_t round) {
  if (!via || *via <= 0.0) return false;
  if (recommended < 0.0 || recommended > 1.0)
    throw std::invalid_argument("recommended trust outside [0, 1]");
  const double t_ij = *via;
  double merged;
  if (subject.value && *subject.value > 0.0)
    merged = (*subject.value + t_ij * recommended) / (1.0 + t_ij);
  else
    merged = t_ij * recommended;
  if (merged < 0.0 || merged > 1.0) throw std::logic_error("merged trust left [0, 1]");
  subject.value = merged;
  subject.last_update_round = round;
  return true;
}

/// One node's trust in every other node, indexed by node id.
class TrustTable {
 public:
  TrustTable() = default;
  TrustTable(NodeId owner, std::size_t node_count) : owner_(owner), entries_(node_count) {}

  NodeId owner() const { return owner_; }
  std::size_t size() const { return entries_.size(); }

  const TrustEntry& at(NodeId id) const { return entries_.at(id); }
  TrustEntry& at(NodeId id) { return entries_.at(id); }

  void record_event(NodeId observed, ForwardingOutcome outcome) {
    if (observed == owner_) throw std::invalid_argument("a node cannot observe itself");
    count_outcome(entries_.at(observed).counters, outcome);
  }

  /// Re-evaluates direct trust in `head` from its accumulated counters.
  /// Returns nullopt (and changes nothing) while there is no evidence.
  std::optional<double> update_direct_trust(NodeId head, const fuzzy::TrustFlc& flc,
                                            std::uint64_t round) {
    TrustEntry& e = entries_.at(head);
    if (e.counters.total_forwarding == 0) return std::nullopt;
    const Evidence ev = evidence(e.counters);
    e.value = flc.evaluate(ev.dfd, ev.dfr);
    e.last_update_round = round;
    return e.value;
  }

  /// Every Known entry as (id, value), in ascending id order.
  std::vector<std::pair<NodeId, double>> known_entries() const {
    std::vector<std::pair<NodeId, double>> out;
    for (std::size_t i = 0; i < entries_.size(); ++i)
      if (entries_[i].value) out.emplace_back(static_cast<NodeId>(i), *entries_[i].value);
    return out;
  }

  std::vector<double> known_values() const {
    std::vector<double> out;
    for (const auto& e : entries_)
      if (e.value) out.push_back(*e.value);
    return out;
  }

  /// Merges a head's recommendations. Entries about the owner itself and the
  /// recommending head are ignored. Returns the number of entries written.
  std::size_t merge_from(NodeId head, const std::vector<std::pair<NodeId, double>>& recs,
                         std::uint64_t round) {
    const std::optional<double> via = entries_.at(head).value;
    std::size_t written = 0;
    for (const auto& [subject, value] : recs) {
      if (subject == owner_ || subject == head) continue;
      if (merge_recommendation(entries_.at(subject), via, value, round)) ++written;
    }
    return written;
  }

 private:
  NodeId owner_ = 0;
  std::vector<TrustEntry> entries_;
};

}  // namespace scfto
