#pragma once

#include <cstdint>

namespace scfto {

/// Which election probability malicious nodes use.
enum class MaliciousElection : std::uint8_t { Initial, Aggressive };

struct ElectionParams {
  double p0_init = 0.07;
  double p_ct = 0.08;
  double p_t = 0.10;
  double p_mt = 0.12;
  double p_dt = 0.14;
  double eta = 0.4;
  std::uint64_t n_lch = 10;
  MaliciousElection malicious = MaliciousElection::Initial;
};

struct JoinParams {
  std::uint64_t n_nch = 2;
};

/// Base attack probabilities; a tier-k node uses k times each.
struct AttackParams {
  double p_sf = 0.1;
  double p_df = 0.1;
};

}  // namespace scfto
