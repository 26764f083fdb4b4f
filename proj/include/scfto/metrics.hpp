#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "scfto/phy.hpp"
#include "scfto/protocol.hpp"

namespace scfto {

/// Running totals over a run's round reports.
class MetricsAccumulator {
 public:
  explicit MetricsAccumulator(std::uint64_t cycle_len_rounds) : cycle_len_(cycle_len_rounds) {
    if (cycle_len_ == 0) throw std::invalid_argument("cycle length must be positive");
  }

  void accumulate(const RoundReport& r, double residual_energy_j) {
    if (r.round != rounds_ + 1)
      throw std::logic_error("round " + std::to_string(r.round) + " out of order after " +
                             std::to_string(rounds_));
    rounds_ = r.round;
    const std::size_t malicious = r.malicious_clusters();
    if (malicious > r.clusters_formed()) throw std::logic_error("more malicious clusters than clusters");

    const std::size_t cycle = static_cast<std::size_t>((r.round - 1) / cycle_len_);
    if (cycle_sums_.size() <= cycle) {
      cycle_sums_.resize(cycle + 1, 0);
      cycle_rounds_.resize(cycle + 1, 0);
    }
    cycle_sums_[cycle] += malicious;
    ++cycle_rounds_[cycle];

    drop_attacks_ += r.drop_attacks;
    delay_attacks_ += r.delay_attacks;
    delivered_ += r.packets_delivered;
    sent_ += r.packets_sent;
    energy_.add(r.energy_spent_j);
    if (!r.deaths.empty() && !first_death_) first_death_ = r.round;
    if (r.alive_at_end == 0 && !all_dead_) all_dead_ = r.round;
    residual_j_ = residual_energy_j;
  }

  std::uint64_t rounds() const { return rounds_; }
  std::uint64_t drop_attacks() const { return drop_attacks_; }
  std::uint64_t delay_attacks() const { return delay_attacks_; }
  std::uint64_t total_attacks() const { return drop_attacks_ + delay_attacks_; }
  std::uint64_t delivered() const { return delivered_; }
  std::uint64_t packets_sent() const { return sent_; }
  double energy_spent_j() const { return energy_.value(); }
  double residual_energy_j() const { return residual_j_; }
  std::optional<std::uint64_t> first_death_round() const { return first_death_; }
  std::optional<std::uint64_t> all_dead_round() const { return all_dead_; }

  /// Per-round average of malicious clusters within each cycle. A trailing
  /// partial cycle averages over the rounds it has.
  std::vector<double> cycle_malicious_avg() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < cycle_sums_.size(); ++i)
      out.push_back(static_cast<double>(cycle_sums_[i]) / static_cast<double>(cycle_rounds_[i]));
    return out;
  }

 private:
  std::uint64_t cycle_len_;
  std::uint64_t rounds_ = 0;
  std::vector<std::uint64_t> cycle_sums_;
  std::vector<std::uint64_t> cycle_rounds_;
  std::uint64_t drop_attacks_ = 0;
  std::uint64_t delay_attacks_ = 0;
  std::uint64_t delivered_ = 0;
  std::uint64_t sent_ = 0;
  CompensatedSum energy_;
  double residual_j_ = 0.0;
  std::optional<std::uint64_t> first_death_;
  std::optional<std::uint64_t> all_dead_;
};

inline std::string format_g9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::string format_round_opt(const std::optional<std::uint64_t>& r) {
  return r ? std::to_string(*r) : std::string("none");
}

inline constexpr const char* kRoundsHeader =
    "round,channel,alive,heads,clusters,malicious_clusters,idle,packets_sent,packets_at_head,"
    "packets_delivered,drop_attacks,delay_attacks,cum_drop_attacks,cum_delay_attacks,"
    "cum_delivered,energy_spent_j,residual_energy_j,deaths";

/// One rounds.csv line; call after accumulating `r` into `acc`.
inline std::string format_round_row(const RoundReport& r, const MetricsAccumulator& acc) {
  std::string s;
  auto field = [&s](const std::string& v) {
    if (!s.empty()) s += ',';
    s += v;
  };
  field(std::to_string(r.round));
  field(to_string(r.channel));
  field(std::to_string(r.alive_at_end));
  field(std::to_string(r.clusters.size()));
  field(std::to_string(r.clusters_formed()));
  field(std::to_string(r.malicious_clusters()));
  field(std::to_string(r.idle));
  field(std::to_string(r.packets_sent));
  field(std::to_string(r.packets_at_head));
  field(std::to_string(r.packets_delivered));
  field(std::to_string(r.drop_attacks));
  field(std::to_string(r.delay_attacks));
  field(std::to_string(acc.drop_attacks()));
  field(std::to_string(acc.delay_attacks()));
  field(std::to_string(acc.delivered()));
  field(format_g9(r.energy_spent_j));
  field(format_g9(acc.residual_energy_j()));
  field(std::to_string(r.deaths.size()));
  return s;
}

inline constexpr const char* kSummaryHeader =
    "sweep_axis,sweep_value,seed,rounds_run,first_death_round,all_dead_round,total_drop_attacks,"
    "total_delay_attacks,total_attacks,throughput,packets_sent,total_energy_j,"
    "final_malicious_cycle_avg,cycle_malicious_avg";

struct RunLabel {
  std::string sweep_axis = "none";
  std::string sweep_value = "none";
  std::uint64_t seed = 0;
};

inline std::string format_summary_row(const RunLabel& label, const MetricsAccumulator& acc) {
  const auto cycles = acc.cycle_malicious_avg();
  std::string joined;
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    if (i) joined += ';';
    joined += format_g9(cycles[i]);
  }
  std::string s = label.sweep_axis + ',' + label.sweep_value + ',' + std::to_string(label.seed);
  s += ',' + std::to_string(acc.rounds());
  s += ',' + format_round_opt(acc.first_death_round());
  s += ',' + format_round_opt(acc.all_dead_round());
  s += ',' + std::to_string(acc.drop_attacks());
  s += ',' + std::to_string(acc.delay_attacks());
  s += ',' + std::to_string(acc.total_attacks());
  s += ',' + std::to_string(acc.delivered());
  s += ',' + std::to_string(acc.packets_sent());
  s += ',' + format_g9(acc.energy_spent_j());
  s += ',' + (cycles.empty() ? std::string("none") : format_g9(cycles.back()));
  s += ',' + joined;
  return s;
}

}  // namespace scfto
