#pragma once

// Simulation configuration and its flat `key = value` file format.
//
// Every field has exactly one key. Protocol symbols keep their usual names
// (p_sf, d_m_s, alpha_0, ...). Lines starting with '#' are comments.
// Unknown keys and malformed values are errors that name the key.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scfto/fuzzy.hpp"
#include "scfto/node.hpp"
#include "scfto/outlier.hpp"
#include "scfto/phy.hpp"
#include "scfto/protocol_params.hpp"

namespace scfto {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(field) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class ChannelForce : std::uint8_t { None, Good, Bad };

struct SimConfig {
  double field_width_m = 100.0;
  double field_height_m = 100.0;
  Position bs_position{150.0, 50.0};
  std::uint64_t node_count = 100;
  double malicious_fraction = 0.3;
  std::array<double, 3> tier_mix{0.3, 0.4, 0.3};  // generic, advanced, super
  double data_packet_bits = 3000.0;
  double control_packet_bits = 300.0;
  double initial_energy_j = 1.5;
  RadioParams radio;
  ChannelParams channel;
  ChannelEffects effects;
  AttackParams attack;
  ElectionParams election;
  JoinParams join;
  OutlierParams outlier;
  fuzzy::FlcConfig trust_flc = fuzzy::default_flc();
  std::uint64_t rounds = 1500;
  std::uint64_t cycle_len_rounds = 50;
  std::uint64_t seed = 1;
  ChannelForce channel_force = ChannelForce::None;

  /// Interval at which a normal head retransmits a lost forward.
  double retransmit_interval_s() const { return 0.5 * radio.d_m_s; }

  double field_diagonal_m() const { return std::hypot(field_width_m, field_height_m); }

  void validate() const;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ConfigError(key, "expected a number, got '" + text + "'");
  return v;
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw ConfigError(key, "expected a non-negative integer, got '" + text + "'");
  return v;
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::vector<double> parse_list(const std::string& key, const std::string& text,
                                      std::size_t expected) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(parse_double(key, part));
  if (expected != 0 && out.size() != expected)
    throw ConfigError(key, "expected " + std::to_string(expected) + " comma-separated values");
  return out;
}

/// Breakpoint lists are written `x:grade, x:grade, ...`.
inline fuzzy::PiecewiseLinearMF parse_mf(const std::string& key, const std::string& text) {
  std::vector<fuzzy::Breakpoint> pts;
  for (const auto& part : split(text, ',')) {
    const auto xy = split(part, ':');
    if (xy.size() != 2) throw ConfigError(key, "breakpoints are written x:grade");
    pts.push_back({parse_double(key, xy[0]), parse_double(key, xy[1])});
  }
  try {
    return fuzzy::PiecewiseLinearMF(std::move(pts));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, e.what());
  }
}

inline std::string format_mf(const fuzzy::PiecewiseLinearMF& mf) {
  std::string out;
  for (const auto& p : mf.points()) {
    if (!out.empty()) out += ", ";
    out += format_double(p.x) + ":" + format_double(p.grade);
  }
  return out;
}

struct Field {
  std::string key;
  std::function<std::string(const SimConfig&)> get;
  std::function<void(SimConfig&, const std::string&)> set;
};

template <typename Member>
Field real_field(std::string key, Member member) {
  return {key, [member](const SimConfig& c) { return format_double(member(const_cast<SimConfig&>(c))); },
          [member, key](SimConfig& c, const std::string& v) { member(c) = parse_double(key, v); }};
}

template <typename Member>
Field uint_field(std::string key, Member member) {
  return {key, [member](const SimConfig& c) { return std::to_string(member(const_cast<SimConfig&>(c))); },
          [member, key](SimConfig& c, const std::string& v) { member(c) = parse_uint(key, v); }};
}

inline const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
#define SCFTO_REAL(key, expr) f.push_back(real_field(key, [](SimConfig& c) -> double& { return expr; }))
#define SCFTO_UINT(key, expr) \
  f.push_back(uint_field(key, [](SimConfig& c) -> std::uint64_t& { return expr; }))
    SCFTO_REAL("field_width_m", c.field_width_m);
    SCFTO_REAL("field_height_m", c.field_height_m);
    SCFTO_REAL("bs_x", c.bs_position.x);
    SCFTO_REAL("bs_y", c.bs_position.y);
    SCFTO_UINT("node_count", c.node_count);
    SCFTO_REAL("malicious_fraction", c.malicious_fraction);
    f.push_back({"tier_mix",
                 [](const SimConfig& c) {
                   return format_double(c.tier_mix[0]) + ", " + format_double(c.tier_mix[1]) + ", " +
                          format_double(c.tier_mix[2]);
                 },
                 [](SimConfig& c, const std::string& v) {
                   const auto xs = parse_list("tier_mix", v, 3);
                   c.tier_mix = {xs[0], xs[1], xs[2]};
                 }});
    SCFTO_REAL("data_packet_bits", c.data_packet_bits);
    SCFTO_REAL("control_packet_bits", c.control_packet_bits);
    SCFTO_REAL("initial_energy_j", c.initial_energy_j);
    SCFTO_REAL("e_elec", c.radio.e_elec);
    SCFTO_REAL("eps_fs", c.radio.eps_fs);
    SCFTO_REAL("eps_amp", c.radio.eps_amp);
    SCFTO_REAL("e_da", c.radio.e_da);
    SCFTO_REAL("e_h", c.radio.e_h);
    SCFTO_REAL("e_m", c.radio.e_m);
    SCFTO_REAL("d_m_s", c.radio.d_m_s);
    SCFTO_REAL("alpha_0", c.channel.alpha_0);
    SCFTO_REAL("alpha_1", c.channel.alpha_1);
    SCFTO_REAL("p_cd", c.effects.p_cd);
    SCFTO_REAL("p_no", c.effects.p_no);
    SCFTO_REAL("p_sf", c.attack.p_sf);
    SCFTO_REAL("p_df", c.attack.p_df);
    SCFTO_REAL("p0_init", c.election.p0_init);
    SCFTO_REAL("p_ct", c.election.p_ct);
    SCFTO_REAL("p_t", c.election.p_t);
    SCFTO_REAL("p_mt", c.election.p_mt);
    SCFTO_REAL("p_dt", c.election.p_dt);
    SCFTO_REAL("eta", c.election.eta);
    SCFTO_UINT("n_lch", c.election.n_lch);
    f.push_back({"malicious_election",
                 [](const SimConfig& c) {
                   return std::string(c.election.malicious == MaliciousElection::Initial ? "p0_init"
                                                                                         : "p_dt");
                 },
                 [](SimConfig& c, const std::string& v) {
                   if (v == "p0_init")
                     c.election.malicious = MaliciousElection::Initial;
                   else if (v == "p_dt")
                     c.election.malicious = MaliciousElection::Aggressive;
                   else
                     throw ConfigError("malicious_election", "expected p0_init or p_dt");
                 }});
    SCFTO_UINT("n_nch", c.join.n_nch);
    SCFTO_REAL("t_nbr", c.outlier.t_nbr);
    SCFTO_REAL("core_fraction", c.outlier.core_fraction);
    SCFTO_REAL("th_d", c.outlier.th_d);
    SCFTO_UINT("n_s", c.outlier.n_s);
    SCFTO_UINT("rounds", c.rounds);
    SCFTO_UINT("cycle_len_rounds", c.cycle_len_rounds);
    SCFTO_UINT("seed", c.seed);
    f.push_back({"channel_force",
                 [](const SimConfig& c) {
                   switch (c.channel_force) {
                     case ChannelForce::Good: return std::string("good");
                     case ChannelForce::Bad: return std::string("bad");
                     default: return std::string("none");
                   }
                 },
                 [](SimConfig& c, const std::string& v) {
                   if (v == "none")
                     c.channel_force = ChannelForce::None;
                   else if (v == "good")
                     c.channel_force = ChannelForce::Good;
                   else if (v == "bad")
                     c.channel_force = ChannelForce::Bad;
                   else
                     throw ConfigError("channel_force", "expected none, good or bad");
                 }});
    SCFTO_REAL("flc.bypass_dfr", c.trust_flc.bypass_dfr);
#undef SCFTO_REAL
#undef SCFTO_UINT

    static constexpr std::array<const char*, 3> kLevels = {"low", "medium", "high"};
    for (int input = 0; input < 2; ++input) {
      const std::string var = input == 0 ? "dfd" : "dfr";
      for (int lvl = 0; lvl < 3; ++lvl) {
        for (int upper = 0; upper < 2; ++upper) {
          const std::string key =
              "flc." + var + "." + kLevels[lvl] + (upper ? ".umf" : ".lmf");
          auto ref = [input, lvl, upper](SimConfig& c) -> fuzzy::PiecewiseLinearMF& {
            auto& set = input == 0 ? c.trust_flc.dfd[lvl] : c.trust_flc.dfr[lvl];
            return upper ? set.umf : set.lmf;
          };
          f.push_back({key, [ref](const SimConfig& c) { return format_mf(ref(const_cast<SimConfig&>(c))); },
                       [ref, key](SimConfig& c, const std::string& v) { ref(c) = parse_mf(key, v); }});
        }
      }
    }
    for (int k = 0; k < 7; ++k) {
      const std::string key = std::string("flc.trust.") + fuzzy::kTrustLabelNames[k];
      f.push_back({key,
                   [k](const SimConfig& c) {
                     const auto& s = c.trust_flc.trust[k];
                     return format_double(s.a) + ", " + format_double(s.c) + ", " + format_double(s.b);
                   },
                   [k, key](SimConfig& c, const std::string& v) {
                     const auto xs = parse_list(key, v, 3);
                     c.trust_flc.trust[k] = {static_cast<fuzzy::TrustLabel>(k), xs[0], xs[1], xs[2]};
                   }});
    }
    return f;
  }();
  return table;
}

}  // namespace detail

/// Applies one `key = value` assignment.
inline void set_config_value(SimConfig& config, const std::string& key, const std::string& value) {
  for (const auto& f : detail::fields()) {
    if (f.key == key) {
      f.set(config, value);
      return;
    }
  }
  throw ConfigError(key, "unknown configuration key");
}

/// All keys with their current values, in canonical order.
inline std::vector<std::pair<std::string, std::string>> config_entries(const SimConfig& config) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : detail::fields()) out.emplace_back(f.key, f.get(config));
  return out;
}

inline std::string format_config(const SimConfig& config) {
  std::string out;
  for (const auto& [k, v] : config_entries(config)) out += k + " = " + v + "\n";
  return out;
}

/// Parses `key = value` lines on top of `base`. Later assignments win.
inline SimConfig parse_config(std::istream& in, SimConfig base = {}) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno), "expected key = value");
    set_config_value(base, detail::trim(body.substr(0, eq)), detail::trim(body.substr(eq + 1)));
  }
  base.validate();
  return base;
}

inline SimConfig parse_config_string(const std::string& text, SimConfig base = {}) {
  std::istringstream in(text);
  return parse_config(in, std::move(base));
}

inline SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open configuration file");
  return parse_config(in);
}

inline void SimConfig::validate() const {
  auto positive = [](const char* key, double v) {
    if (!(v > 0.0)) throw ConfigError(key, "must be strictly positive");
  };
  auto probability = [](const char* key, double v) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(key, "must lie in [0, 1]");
  };
  auto open_probability = [](const char* key, double v) {
    if (!(v > 0.0 && v < 1.0)) throw ConfigError(key, "must lie in (0, 1)");
  };
  positive("field_width_m", field_width_m);
  positive("field_height_m", field_height_m);
  if (node_count == 0) throw ConfigError("node_count", "must be at least 1");
  probability("malicious_fraction", malicious_fraction);
  for (double t : tier_mix)
    if (!(t >= 0.0)) throw ConfigError("tier_mix", "ratios must be non-negative");
  if (std::abs(tier_mix[0] + tier_mix[1] + tier_mix[2] - 1.0) > 1e-9)
    throw ConfigError("tier_mix", "ratios must sum to 1");
  positive("data_packet_bits", data_packet_bits);
  positive("control_packet_bits", control_packet_bits);
  positive("initial_energy_j", initial_energy_j);
  positive("e_elec", radio.e_elec);
  positive("eps_fs", radio.eps_fs);
  positive("eps_amp", radio.eps_amp);
  positive("e_da", radio.e_da);
  positive("e_h", radio.e_h);
  positive("e_m", radio.e_m);
  positive("d_m_s", radio.d_m_s);
  positive("alpha_0", channel.alpha_0);
  positive("alpha_1", channel.alpha_1);
  probability("p_cd", effects.p_cd);
  probability("p_no", effects.p_no);
  probability("p_sf", attack.p_sf);
  probability("p_df", attack.p_df);
  if (3.0 * attack.p_sf + 3.0 * attack.p_df > 1.0 + 1e-12)
    throw ConfigError("p_sf", "3*p_sf + 3*p_df must not exceed 1");
  open_probability("p0_init", election.p0_init);
  open_probability("p_ct", election.p_ct);
  open_probability("p_t", election.p_t);
  open_probability("p_mt", election.p_mt);
  open_probability("p_dt", election.p_dt);
  if (!(election.p_ct < election.p_t && election.p_t < election.p_mt &&
        election.p_mt < election.p_dt))
    throw ConfigError("p_ct", "requires p_ct < p_t < p_mt < p_dt");
  probability("eta", election.eta);
  if (election.eta >= 1.0) throw ConfigError("eta", "must be below 1 to keep p_CH positive");
  if (election.n_lch == 0) throw ConfigError("n_lch", "must be at least 1");
  if (join.n_nch == 0) throw ConfigError("n_nch", "must be at least 1");
  positive("t_nbr", outlier.t_nbr);
  open_probability("core_fraction", outlier.core_fraction);
  positive("th_d", outlier.th_d);
  if (rounds == 0) throw ConfigError("rounds", "must be at least 1");
  if (cycle_len_rounds == 0) throw ConfigError("cycle_len_rounds", "must be at least 1");
  if (!std::isfinite(bs_position.x)) throw ConfigError("bs_x", "must be finite");
  if (!std::isfinite(bs_position.y)) throw ConfigError("bs_y", "must be finite");
  try {
    trust_flc.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("flc", e.what());
  }
}

}  // namespace scfto
