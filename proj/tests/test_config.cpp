#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "scfto/config.hpp"

using namespace scfto;

namespace {
std::string error_field(const std::string& text) {
  try {
    parse_config_string(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}
}  // namespace

TEST(Config, DefaultsValidate) { EXPECT_NO_THROW(SimConfig{}.validate()); }

TEST(Config, DefaultValues) {
  const SimConfig c;
  EXPECT_EQ(c.node_count, 100u);
  EXPECT_EQ(c.initial_energy_j, 1.5);
  EXPECT_EQ(c.bs_position.x, 150.0);
  EXPECT_EQ(c.bs_position.y, 50.0);
  EXPECT_EQ(c.rounds, 1500u);
  EXPECT_EQ(c.cycle_len_rounds, 50u);
  EXPECT_EQ(c.election.n_lch, 10u);
  EXPECT_EQ(c.join.n_nch, 2u);
  EXPECT_EQ(c.outlier.n_s, 60u);
  EXPECT_DOUBLE_EQ(c.retransmit_interval_s(), 5.0);
  EXPECT_NEAR(c.field_diagonal_m(), 141.42135623730951, 1e-12);
}

TEST(Config, ParsesAssignmentsAndComments) {
  const SimConfig c = parse_config_string(
      "# header\n"
      "node_count = 40   # trailing comment\n"
      "\n"
      "malicious_fraction=0.2\n"
      "tier_mix = 0.5, 0.25, 0.25\n"
      "channel_force = bad\n"
      "malicious_election = p_dt\n");
  EXPECT_EQ(c.node_count, 40u);
  EXPECT_DOUBLE_EQ(c.malicious_fraction, 0.2);
  EXPECT_EQ(c.tier_mix[0], 0.5);
  EXPECT_EQ(c.channel_force, ChannelForce::Bad);
  EXPECT_EQ(c.election.malicious, MaliciousElection::Aggressive);
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_EQ(error_field("no_such_key = 1\n"), "no_such_key");
  EXPECT_EQ(error_field("node_count = -3\n"), "node_count");
  EXPECT_EQ(error_field("p_sf = abc\n"), "p_sf");
  EXPECT_EQ(error_field("p_sf = 0.2\np_df = 0.2\n"), "p_sf");
  EXPECT_EQ(error_field("tier_mix = 0.5, 0.5\n"), "tier_mix");
  EXPECT_EQ(error_field("tier_mix = 0.5, 0.5, 0.5\n"), "tier_mix");
  EXPECT_EQ(error_field("p_t = 0.5\n"), "p_ct");
  EXPECT_EQ(error_field("channel_force = sunny\n"), "channel_force");
  EXPECT_EQ(error_field("initial_energy_j = 0\n"), "initial_energy_j");
  EXPECT_EQ(error_field("just text\n"), "line 1");
}

TEST(Config, RejectsInvertedFootprint) {
  EXPECT_EQ(error_field("flc.dfd.medium.lmf = 0.1:0, 0.5:1, 0.9:0\n"), "flc");
}

TEST(Config, RoundTripIsExact) {
  SimConfig c;
  c.seed = 99;
  c.malicious_fraction = 0.1 + 0.2;
  c.trust_flc.trust[3].c = 0.49;
  c.channel_force = ChannelForce::Good;
  const SimConfig back = parse_config_string(format_config(c));
  EXPECT_EQ(format_config(back), format_config(c));
  EXPECT_EQ(back.malicious_fraction, c.malicious_fraction);
  EXPECT_EQ(back.trust_flc.trust[3].c, 0.49);
}

TEST(Config, EveryKeyIsSettable) {
  const SimConfig base;
  for (const auto& [key, value] : config_entries(base)) {
    SimConfig c;
    EXPECT_NO_THROW(set_config_value(c, key, value)) << key;
  }
}

TEST(Config, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "scfto_config_test.cfg";
  {
    std::ofstream out(path);
    out << "rounds = 12\nseed = 5\n";
  }
  const SimConfig c = load_config(path.string());
  EXPECT_EQ(c.rounds, 12u);
  EXPECT_EQ(c.seed, 5u);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config("/nonexistent/dir/x.cfg"), ConfigError);
}
