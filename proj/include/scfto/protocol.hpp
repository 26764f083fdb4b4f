#pragma once

// The clustering round engine: election, joining, slot assignment, data
// collection under attack and channel effects, and the trust/threshold
// updates that feed the next round's choices.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "scfto/config.hpp"
#include "scfto/fuzzy.hpp"
#include "scfto/network.hpp"
#include "scfto/outlier.hpp"
#include "scfto/phy.hpp"
#include "scfto/rng.hpp"
#include "scfto/trust.hpp"

namespace scfto {

// ---------------------------------------------------------------------------
// Election

/// Maximum election probability for the bracket a mean head trust falls in.
inline double bracket_probability(double mean_trust, const ElectionParams& p,
                                  const std::array<fuzzy::T1TrustSet, 7>& sets) {
  using fuzzy::TrustLabel;
  switch (fuzzy::classify_trust(mean_trust, sets)) {
    case TrustLabel::CompleteTrust: return p.p_ct;
    case TrustLabel::Trust: return p.p_t;
    case TrustLabel::MediumTrust: return p.p_mt;
    default: return p.p_dt;
  }
}

/// Cluster-head probability of a normal node from its recent heads' trust
/// and its residual energy relative to the last acceptance's extremes.
inline double election_probability(const NodeState& node, std::optional<EnergyHint> hint,
                                   const ElectionParams& p,
                                   const std::array<fuzzy::T1TrustSet, 7>& sets) {
  if (node.head_history.empty()) return p.p0_init;
  double sum = 0.0;
  for (const auto& h : node.head_history) sum += h.trust_at_selection;
  const double mean = sum / static_cast<double>(node.head_history.size());
  double energy_term = 1.0;
  if (hint && hint->e_max > hint->e_min) {
    const double frac =
        std::clamp((hint->e_max - node.energy_j) / (hint->e_max - hint->e_min), 0.0, 1.0);
    energy_term = 1.0 - p.eta * frac;
  }
  return energy_term * bracket_probability(mean, p, sets);
}

inline std::uint64_t eligibility_window(double p_ch) {
  return static_cast<std::uint64_t>(std::ceil(1.0 / p_ch));
}

/// True when the node has not served as head within its ceil(1/p) window.
inline bool election_eligible(const NodeState& node, double p_ch, std::uint64_t round) {
  const auto since = node.rounds_since_head(round);
  return !since || *since >= eligibility_window(p_ch);
}

/// Rotation threshold, with a real-valued modulo since 1/p is rarely integral.
inline double election_threshold(double p_ch, std::uint64_t round) {
  const double period = 1.0 / p_ch;
  return p_ch / (1.0 - p_ch * std::fmod(static_cast<double>(round), period));
}

inline bool should_elect(const NodeState& node, double p_ch, std::uint64_t round, Stream& rng) {
  if (!election_eligible(node, p_ch, round)) return false;
  return rng.uniform() < election_threshold(p_ch, round);
}

/// Probability a node actually uses in the election this round.
inline double effective_p_ch(const NodeState& node, const ElectionParams& p) {
  if (!is_malicious(node.role)) return node.p_ch;
  return p.malicious == MaliciousElection::Aggressive ? p.p_dt : p.p0_init;
}

// ---------------------------------------------------------------------------
// Joining

struct Candidate {
  NodeId id = 0;
  double distance = 0.0;
};

struct JoinHead {
  NodeId head = 0;
  friend bool operator==(const JoinHead&, const JoinHead&) = default;
};
struct SelfDeclare {
  friend bool operator==(const SelfDeclare&, const SelfDeclare&) = default;
};
struct StayIdle {
  friend bool operator==(const StayIdle&, const StayIdle&) = default;
};
using JoinDecision = std::variant<JoinHead, SelfDeclare, StayIdle>;

/// The n nearest heads, ties broken by smaller id.
inline std::vector<Candidate> nearest_candidates(std::vector<Candidate> heads, std::size_t n) {
  std::sort(heads.begin(), heads.end(), [](const Candidate& a, const Candidate& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.id < b.id;
  });
  if (heads.size() > n) heads.resize(n);
  return heads;
}

/// Picks a head among distance-sorted candidates.
///
/// Before the threshold converges, never-observed heads come first (nearest
/// wins), then the most trusted known head. Afterwards, the nearest head at
/// or above the threshold wins, then the nearest never-observed one. With
/// nothing selectable the node declares itself head when eligible. A node
/// that heard no head at all idles.
inline JoinDecision choose_head(std::span<const Candidate> candidates, const TrustTable& table,
                                bool converged, std::optional<double> t_th, bool eligible) {
  if (candidates.empty()) return StayIdle{};
  auto fallback = [eligible]() -> JoinDecision {
    if (eligible) return SelfDeclare{};
    return StayIdle{};
  };
  for (const auto& c : candidates)
    if (!table.at(c.id).known() && !converged) return JoinHead{c.id};

  if (!converged) {
    std::optional<Candidate> best;
    double best_trust = -1.0;
    for (const auto& c : candidates) {
      const double t = *table.at(c.id).value;
      if (t > best_trust) {
        best_trust = t;
        best = c;
      }
    }
    if (best) return JoinHead{best->id};
    return fallback();
  }

  for (const auto& c : candidates) {
    const auto& v = table.at(c.id).value;
    if (v && t_th && *v >= *t_th) return JoinHead{c.id};
  }
  for (const auto& c : candidates)
    if (!table.at(c.id).known()) return JoinHead{c.id};
  return fallback();
}

// ---------------------------------------------------------------------------
// Data phase

struct Forward {
  friend bool operator==(const Forward&, const Forward&) = default;
};
struct Drop {
  friend bool operator==(const Drop&, const Drop&) = default;
};
struct Delay {
  double seconds = 0.0;
  friend bool operator==(const Delay&, const Delay&) = default;
};
using HeadAction = std::variant<Forward, Drop, Delay>;

/// What a head does with one member packet. A tier-k head drops with
/// probability k*p_sf and delays with unconditional probability k*p_df.
inline HeadAction head_action(Role role, const AttackParams& attack, double d_m_s, Stream& rng) {
  if (!is_malicious(role)) return Forward{};
  const double k = tier(role);
  const double p_drop = k * attack.p_sf;
  if (rng.uniform() < p_drop) return Drop{};
  const double p_delay = k * attack.p_df / (1.0 - p_drop);
  if (rng.uniform() < p_delay) return Delay{rng.uniform_open_closed(d_m_s)};
  return Forward{};
}

struct Observation {
  ForwardingOutcome outcome = ForwardingOutcome::Forwarded;
  double duration_s = 0.0;
};

/// A member's overhearing of its head's forward.
///
/// Drops time out at D_m. Under a bad channel the first copy of a prompt
/// forward is lost and the retransmission at 0.5*D_m may go unheard (p_no)
/// or be captured as delayed (p_cd). Deliberate delays are always delayed
/// evidence when heard.
inline Observation observe_forwarding(const HeadAction& action, ChannelState channel,
                                      const ChannelEffects& fx, double d_m_s, Stream& rng) {
  const Observation timeout{ForwardingOutcome::Dropped, d_m_s};
  if (std::holds_alternative<Drop>(action)) return timeout;
  if (const auto* delay = std::get_if<Delay>(&action)) {
    if (channel == ChannelState::Bad && rng.uniform() < fx.p_no) return timeout;
    return {ForwardingOutcome::ForwardedDelayed, delay->seconds};
  }
  if (channel == ChannelState::Good) return {ForwardingOutcome::Forwarded, 0.0};
  if (rng.uniform() < fx.p_no) return timeout;
  const auto outcome =
      rng.uniform() < fx.p_cd ? ForwardingOutcome::ForwardedDelayed : ForwardingOutcome::Forwarded;
  return {outcome, 0.5 * d_m_s};
}

// ---------------------------------------------------------------------------
// Round engine

struct ClusterReport {
  NodeId head = 0;
  Role head_role = Role::Normal;
  bool self_declared = false;
  std::vector<NodeId> members;  // slot order
};

struct RoundReport {
  std::uint64_t round = 0;
  ChannelState channel = ChannelState::Good;
  std::size_t alive_at_start = 0;
  std::size_t alive_at_end = 0;
  std::vector<ClusterReport> clusters;  // every head of the round, ascending id
  std::size_t idle = 0;
  std::uint64_t packets_sent = 0;      // member packets that left the member
  std::uint64_t packets_at_head = 0;   // packets a live head chose to forward
  std::uint64_t packets_delivered = 0; // packets the base station received
  std::uint64_t drop_attacks = 0;
  std::uint64_t delay_attacks = 0;
  std::uint64_t observed_forwarded = 0;
  std::uint64_t observed_delayed = 0;
  std::uint64_t observed_dropped = 0;
  double energy_spent_j = 0.0;
  std::vector<NodeId> deaths;

  /// Heads that ended the round with at least one member.
  std::size_t clusters_formed() const {
    return static_cast<std::size_t>(std::count_if(clusters.begin(), clusters.end(),
                                                  [](const auto& c) { return !c.members.empty(); }));
  }

  std::size_t malicious_clusters() const {
    return static_cast<std::size_t>(
        std::count_if(clusters.begin(), clusters.end(), [](const ClusterReport& c) {
          return !c.members.empty() && is_malicious(c.head_role);
        }));
  }
};

/// Owns one run. Each call to step() executes the next round.
class Simulation {
 public:
  explicit Simulation(const SimConfig& config)
      : state_(init_network(config)), flc_(config.trust_flc) {}

  const SimState& state() const { return state_; }
  SimState& mutable_state() { return state_; }
  const fuzzy::TrustFlc& flc() const { return flc_; }

  bool finished() const {
    return state_.round >= state_.config.rounds || state_.alive_count() == 0;
  }

  RoundReport step() {
    if (state_.alive_count() == 0) throw std::logic_error("no node is alive");
    return run_round(state_.round + 1);
  }

 private:
  struct PendingCluster {
    NodeId head = 0;
    bool self_declared = false;
    std::vector<std::pair<NodeId, double>> requests;  // (member, reported energy)
    std::vector<NodeId> members;
  };

  bool pay(NodeId id, double joules, std::uint64_t r) {
    return debit(state_.nodes[id], joules, r, state_.ledger);
  }

  bool alive(NodeId id) const { return state_.nodes[id].alive; }

  ChannelState sample_channel(std::uint64_t r) const {
    switch (state_.config.channel_force) {
      case ChannelForce::Good: return ChannelState::Good;
      case ChannelForce::Bad: return ChannelState::Bad;
      default: {
        Stream rng(state_.config.seed, kNetworkStream, Subsystem::Channel, r);
        return sample_channel_state(state_.config.channel, rng);
      }
    }
  }

  RoundReport run_round(std::uint64_t r);

  SimState state_;
  fuzzy::TrustFlc flc_;
};

inline RoundReport Simulation::run_round(std::uint64_t r) {
  const SimConfig& cfg = state_.config;
  const RadioParams& radio = cfg.radio;
  auto& nodes = state_.nodes;
  const auto n = static_cast<NodeId>(nodes.size());
  const double energy_before = state_.ledger.applied.value();
  const std::size_t deaths_before = state_.ledger.deaths.size();

  RoundReport report;
  report.round = r;
  report.alive_at_start = state_.alive_count();

  // 1. Channel state, shared by every node for the whole round.
  report.channel = sample_channel(r);

  // 2. Election and broadcast.
  std::vector<NodeId> elected;
  for (NodeId id = 0; id < n; ++id) {
    if (!alive(id)) continue;
    Stream rng(cfg.seed, id, Subsystem::Election, r);
    if (should_elect(nodes[id], effective_p_ch(nodes[id], cfg.election), r, rng)) {
      elected.push_back(id);
      nodes[id].last_head_round = r;
    }
  }
  const double broadcast = tx_energy(radio, cfg.control_packet_bits, cfg.field_diagonal_m());
  const double control_rx = rx_energy(radio, cfg.control_packet_bits, false);
  std::vector<NodeId> announced;
  for (NodeId h : elected) {
    if (!alive(h) || !pay(h, broadcast, r)) continue;
    announced.push_back(h);
    for (NodeId id = 0; id < n; ++id)
      if (id != h && alive(id)) pay(id, control_rx, r);
  }

  std::vector<bool> is_head(n, false);
  std::vector<PendingCluster> clusters;
  for (NodeId h : announced) {
    if (!alive(h)) continue;
    is_head[h] = true;
    clusters.push_back({h, false, {}, {}});
  }
  auto cluster_of = [&clusters](NodeId h) -> PendingCluster& {
    return *std::find_if(clusters.begin(), clusters.end(),
                         [h](const PendingCluster& c) { return c.head == h; });
  };

  // 3. Joining.
  std::vector<NodeId> self_declared;
  for (NodeId id = 0; id < n; ++id) {
    if (!alive(id) || is_head[id]) continue;
    std::vector<Candidate> heads;
    for (const auto& c : clusters)
      if (!c.self_declared && alive(c.head)) heads.push_back({c.head, distance(state_, id, c.head)});
    const auto candidates = nearest_candidates(std::move(heads), cfg.join.n_nch);
    const ConvergenceTracker& tracker = state_.trackers[id];
    const double p_ch = effective_p_ch(nodes[id], cfg.election);
    const JoinDecision decision =
        choose_head(candidates, state_.trust[id], tracker.converged, tracker.last_t_th,
                    election_eligible(nodes[id], p_ch, r));

    if (const auto* join = std::get_if<JoinHead>(&decision)) {
      const NodeId h = join->head;
      const auto& entry = state_.trust[id].at(h);
      nodes[id].remember_head(h, entry.value.value_or(0.0), cfg.election.n_lch);
      if (!pay(id, tx_energy(radio, cfg.control_packet_bits, distance(state_, id, h)), r)) continue;
      if (!pay(h, control_rx, r)) continue;
      cluster_of(h).requests.emplace_back(id, nodes[id].energy_j);
    } else if (std::holds_alternative<SelfDeclare>(decision)) {
      self_declared.push_back(id);
      nodes[id].last_head_round = r;
    } else {
      ++report.idle;
    }
  }
  for (NodeId id : self_declared) {
    is_head[id] = true;
    clusters.push_back({id, true, {}, {}});
  }
  std::sort(clusters.begin(), clusters.end(),
            [](const PendingCluster& a, const PendingCluster& b) { return a.head < b.head; });

  // 4. Slot assignment and acceptances carrying energy extremes and
  // recommendations. Slots follow ascending member id.
  for (auto& c : clusters) {
    if (c.requests.empty() || !alive(c.head)) continue;
    std::sort(c.requests.begin(), c.requests.end());
    EnergyHint hint{c.requests.front().second, c.requests.front().second};
    for (const auto& [member, energy] : c.requests) {
      hint.e_max = std::max(hint.e_max, energy);
      hint.e_min = std::min(hint.e_min, energy);
    }
    const auto recommendations = state_.trust[c.head].known_entries();
    for (const auto& [member, energy] : c.requests) {
      if (!alive(member)) continue;
      const double d = distance(state_, c.head, member);
      if (!pay(c.head, tx_energy(radio, cfg.control_packet_bits, d), r)) break;
      if (!pay(member, control_rx, r)) continue;
      state_.energy_hints[member] = hint;
      state_.trust[member].merge_from(c.head, recommendations, r);
      c.members.push_back(member);
    }
  }

  // 5. Data collection with overhearing.
  std::vector<NodeId> observers;
  for (auto& c : clusters) {
    if (c.members.empty()) continue;
    const NodeId h = c.head;
    Stream head_rng(cfg.seed, h, Subsystem::HeadAction, r);
    const double to_bs = distance(state_, h, kBaseStation);
    for (NodeId m : c.members) {
      if (!alive(m)) continue;
      if (!pay(m, tx_energy(radio, cfg.data_packet_bits, distance(state_, m, h)), r)) continue;
      ++report.packets_sent;
      // A dead head loses the packet; death is not evidence of malice.
      if (!alive(h) || !pay(h, rx_energy(radio, cfg.data_packet_bits, true), r)) continue;

      const HeadAction action = head_action(nodes[h].role, cfg.attack, radio.d_m_s, head_rng);
      if (std::holds_alternative<Drop>(action)) {
        ++report.drop_attacks;
      } else {
        if (std::holds_alternative<Delay>(action)) ++report.delay_attacks;
        ++report.packets_at_head;
        if (!pay(h, tx_energy(radio, cfg.data_packet_bits, to_bs), r)) continue;
        ++report.packets_delivered;
      }

      Stream obs_rng(cfg.seed, m, Subsystem::Observation, r);
      const Observation obs = observe_forwarding(action, report.channel, cfg.effects, radio.d_m_s, obs_rng);
      const bool heard = obs.outcome != ForwardingOutcome::Dropped;
      if (!pay(m, overhear_energy(radio, obs.duration_s, cfg.data_packet_bits, heard), r)) continue;
      state_.trust[m].record_event(h, obs.outcome);
      switch (obs.outcome) {
        case ForwardingOutcome::Forwarded: ++report.observed_forwarded; break;
        case ForwardingOutcome::ForwardedDelayed: ++report.observed_delayed; break;
        case ForwardingOutcome::Dropped: ++report.observed_dropped; break;
      }
    }
    for (NodeId m : c.members) observers.push_back(m);
  }

  // 6. Direct trust, adaptive threshold, and next-round probabilities.
  std::sort(observers.begin(), observers.end());
  for (NodeId m : observers) {
    if (!alive(m)) continue;
    const NodeId h = nodes[m].head_history.back().head;
    state_.trust[m].update_direct_trust(h, flc_, r);
    const std::vector<double> values = state_.trust[m].known_values();
    if (const auto t_th = detect_threshold(values, cfg.outlier))
      state_.trackers[m].update(*t_th, cfg.outlier);
  }
  for (NodeId id = 0; id < n; ++id) {
    if (!alive(id) || is_malicious(nodes[id].role)) continue;
    nodes[id].p_ch = election_probability(nodes[id], state_.energy_hints[id], cfg.election,
                                          cfg.trust_flc.trust);
  }

  // 7. Bookkeeping.
  for (const auto& c : clusters) {
    ClusterReport cr;
    cr.head = c.head;
    cr.head_role = nodes[c.head].role;
    cr.self_declared = c.self_declared;
    cr.members = c.members;
    report.clusters.push_back(std::move(cr));
  }
  for (std::size_t i = deaths_before; i < state_.ledger.deaths.size(); ++i)
    report.deaths.push_back(state_.ledger.deaths[i].node);
  report.energy_spent_j = state_.ledger.applied.value() - energy_before;
  report.alive_at_end = state_.alive_count();
  state_.round = r;
  return report;
}

}  // namespace scfto
