#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "scfto/config.hpp"
#include "scfto/node.hpp"
#include "scfto/outlier.hpp"
#include "scfto/phy.hpp"
#include "scfto/rng.hpp"
#include "scfto/trust.hpp"

namespace scfto {

/// Endpoint id that designates the base station.
inline constexpr NodeId kBaseStation = std::numeric_limits<NodeId>::max();

/// Residual-energy extremes a node last heard in an acceptance message.
struct EnergyHint {
  double e_max = 0.0;
  double e_min = 0.0;
};

/// Everything that evolves during a run.
struct SimState {
  SimConfig config;
  std::vector<NodeState> nodes;
  std::vector<TrustTable> trust;
  std::vector<ConvergenceTracker> trackers;
  std::vector<std::optional<EnergyHint>> energy_hints;
  EnergyLedger ledger;
  std::uint64_t round = 0;  // last completed round; rounds are numbered from 1

  std::size_t alive_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [](const NodeState& n) { return n.alive; }));
  }

  double residual_energy() const {
    CompensatedSum s;
    for (const auto& n : nodes) s.add(n.energy_j);
    return s.value();
  }
};

/// Splits `total` into integer counts proportional to `weights` (which sum
/// to 1): floors first, then leftover units to the largest remainders, ties
/// to the lower index.
template <std::size_t N>
std::array<std::uint64_t, N> largest_remainder(std::uint64_t total,
                                               const std::array<double, N>& weights) {
  std::array<std::uint64_t, N> counts{};
  std::array<double, N> remainders{};
  std::uint64_t assigned = 0;
  for (std::size_t k = 0; k < N; ++k) {
    const double quota = static_cast<double>(total) * weights[k];
    counts[k] = static_cast<std::uint64_t>(std::floor(quota));
    remainders[k] = quota - std::floor(quota);
    assigned += counts[k];
  }
  std::array<std::size_t, N> order{};
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::size_t i = 0; assigned < total; i = (i + 1) % N, ++assigned) ++counts[order[i]];
  return counts;
}

inline std::uint64_t malicious_count(const SimConfig& c) {
  return static_cast<std::uint64_t>(
      std::llround(static_cast<double>(c.node_count) * c.malicious_fraction));
}

/// Places nodes uniformly in the field and assigns malicious roles.
/// Malicious nodes are the ones with the smallest per-node role keys; tiers
/// are handed out in generic, advanced, super order along that ranking.
inline SimState init_network(const SimConfig& config) {
  config.validate();
  SimState s;
  s.config = config;
  const auto n = static_cast<NodeId>(config.node_count);
  s.nodes.resize(n);
  s.trust.reserve(n);
  for (NodeId id = 0; id < n; ++id) {
    Stream placement(config.seed, id, Subsystem::Placement, 0);
    NodeState& node = s.nodes[id];
    node.id = id;
    node.position.x = placement.uniform() * config.field_width_m;
    node.position.y = placement.uniform() * config.field_height_m;
    node.energy_j = config.initial_energy_j;
    node.p_ch = config.election.p0_init;
    s.trust.emplace_back(id, n);
  }
  s.trackers.resize(n);
  s.energy_hints.resize(n);

  std::vector<std::pair<std::uint64_t, NodeId>> keys;
  keys.reserve(n);
  for (NodeId id = 0; id < n; ++id)
    keys.emplace_back(Stream(config.seed, id, Subsystem::Roles, 0).bits(), id);
  std::sort(keys.begin(), keys.end());
  const auto tiers = largest_remainder(malicious_count(config), config.tier_mix);
  std::size_t next = 0;
  for (std::size_t k = 0; k < tiers.size(); ++k)
    for (std::uint64_t i = 0; i < tiers[k]; ++i)
      s.nodes[keys[next++].second].role = static_cast<Role>(k + 1);
  return s;
}

inline Position endpoint_position(const SimState& s, NodeId id) {
  if (id == kBaseStation) return s.config.bs_position;
  if (id >= s.nodes.size()) throw std::out_of_range("unknown node id " + std::to_string(id));
  return s.nodes[id].position;
}

/// Euclidean distance between two nodes or a node and the base station.
inline double distance(const SimState& s, NodeId a, NodeId b) {
  const Position pa = endpoint_position(s, a);
  const Position pb = endpoint_position(s, b);
  if (a == b) return 0.0;
  return std::hypot(pa.x - pb.x, pa.y - pb.y);
}

}  // namespace scfto
