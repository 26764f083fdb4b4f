#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "scfto/node.hpp"
#include "scfto/rng.hpp"

namespace scfto {

/// First-order radio constants. All energies in joules, D_m in seconds.
struct RadioParams {
  double e_elec = 50e-9;      // J/bit, transmitter/receiver electronics
  double eps_fs = 10e-12;     // J/bit/m^2, free-space amplifier
  double eps_amp = 0.0013e-12;  // J/bit/m^4, two-ray amplifier
  double e_da = 5e-9;         // J/bit, aggregation on reception
  double e_h = 5e-9;          // J/bit, extra cost of an overheard packet
  double e_m = 10e-9;         // J/s, listening
  double d_m_s = 10.0;        // maximum overhearing duration

  /// Crossover distance between the free-space and two-ray regimes.
  double d0() const { return std::sqrt(eps_fs / eps_amp); }
};

/// Rates of the bad and good states of the two-state channel.
struct ChannelParams {
  double alpha_0 = 3.0;
  double alpha_1 = 7.0;

  double p_bad() const { return alpha_0 / (alpha_0 + alpha_1); }
  double p_good() const { return alpha_1 / (alpha_0 + alpha_1); }
};

struct ChannelEffects {
  double p_cd = 0.2;  // retransmission captured as delayed forwarding
  double p_no = 0.2;  // forwarded packet not overheard under a bad channel
};

enum class ChannelState : std::uint8_t { Good, Bad };

inline const char* to_string(ChannelState s) {
  return s == ChannelState::Good ? "good" : "bad";
}

/// One draw per round from the stationary distribution of the chain.
inline ChannelState sample_channel_state(const ChannelParams& ch, Stream& rng) {
  return rng.uniform() < ch.p_bad() ? ChannelState::Bad : ChannelState::Good;
}

inline double tx_energy(const RadioParams& r, double bits, double d) {
  if (d < r.d0()) return bits * r.e_elec + bits * r.eps_fs * d * d;
  const double d2 = d * d;
  return bits * r.e_elec + bits * r.eps_amp * d2 * d2;
}

/// Reception cost. Aggregation energy is only paid by cluster heads.
inline double rx_energy(const RadioParams& r, double bits, bool aggregate = true) {
  return bits * r.e_elec + (aggregate ? bits * r.e_da : 0.0);
}

/// Listening cost of one forwarding observation. A failed observation
/// listens for the full D_m regardless of duration.
inline double overhear_energy(const RadioParams& r, double duration_s, double bits,
                              bool success) {
  if (duration_s < 0.0 || duration_s > r.d_m_s)
    throw std::invalid_argument("overhear duration outside [0, D_m]");
  if (!success) return r.d_m_s * r.e_m;
  return duration_s * r.e_m + bits * r.e_h;
}

struct DeathEvent {
  NodeId node = 0;
  std::uint64_t round = 0;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Run-wide record of every energy debit.
struct EnergyLedger {
  CompensatedSum applied;    // energy actually removed from batteries
  CompensatedSum truncated;  // requested beyond what a dying node had left
  std::vector<DeathEvent> deaths;
};

/// Removes `amount` from the node's battery. Returns false when the node
/// could not afford it; the node is then drained to zero and marked dead.
inline bool debit(NodeState& node, double amount, std::uint64_t round,
                  EnergyLedger& ledger) {
  if (amount < 0.0) throw std::invalid_argument("negative energy debit");
  if (!node.alive) return false;
  if (amount < node.energy_j) {
    node.energy_j -= amount;
    ledger.applied.add(amount);
    return true;
  }
  ledger.applied.add(node.energy_j);
  ledger.truncated.add(amount - node.energy_j);
  const bool afforded = amount == node.energy_j;
  node.energy_j = 0.0;
  node.alive = false;
  ledger.deaths.push_back({node.id, round});
  return afforded;
}

}  // namespace scfto
