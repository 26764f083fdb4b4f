#include <gtest/gtest.h>

#include <cmath>

#include "scfto/phy.hpp"

using namespace scfto;

TEST(Radio, CrossoverDistance) {
  const RadioParams r;
  EXPECT_NEAR(r.d0(), 87.706, 1e-3);
  EXPECT_NEAR(r.d0(), std::sqrt(10.0 / 0.0013), 1e-9);
}

TEST(Radio, TransmitFreeSpace) {
  const RadioParams r;
  EXPECT_DOUBLE_EQ(tx_energy(r, 3000, 0.0), 1.5e-4);
  EXPECT_NEAR(tx_energy(r, 3000, 50.0), 2.25e-4, 1e-18);
}

TEST(Radio, TransmitTwoRay) {
  const RadioParams r;
  const double d = 120.0;
  EXPECT_NEAR(tx_energy(r, 300, d), 300 * 50e-9 + 300 * 0.0013e-12 * std::pow(d, 4), 1e-18);
}

TEST(Radio, RegimesMeetAtCrossover) {
  const RadioParams r;
  const double d0 = r.d0();
  EXPECT_NEAR(tx_energy(r, 3000, d0 - 1e-9), tx_energy(r, 3000, d0), 1e-12);
}

TEST(Radio, Receive) {
  const RadioParams r;
  EXPECT_NEAR(rx_energy(r, 3000), 1.65e-4, 1e-18);
  EXPECT_NEAR(rx_energy(r, 1), 55e-9, 1e-20);
  EXPECT_NEAR(rx_energy(r, 300, false), 1.5e-5, 1e-18);
}

TEST(Radio, Overhear) {
  const RadioParams r;
  EXPECT_NEAR(overhear_energy(r, 2.0, 3000, true), 1.502e-5, 1e-18);
  EXPECT_NEAR(overhear_energy(r, 10.0, 3000, false), 1.0e-7, 1e-20);
  EXPECT_NEAR(overhear_energy(r, 3.0, 3000, false), 1.0e-7, 1e-20);
  EXPECT_NEAR(overhear_energy(r, 0.0, 3000, true), 1.5e-5, 1e-18);
  EXPECT_THROW(overhear_energy(r, 10.5, 3000, true), std::invalid_argument);
  EXPECT_THROW(overhear_energy(r, -1.0, 3000, true), std::invalid_argument);
}

TEST(Channel, StationaryProbability) {
  EXPECT_DOUBLE_EQ(ChannelParams{}.p_bad(), 0.3);
  EXPECT_DOUBLE_EQ((ChannelParams{2.0, 2.0}.p_bad()), 0.5);
}

TEST(Channel, SampledFrequency) {
  const ChannelParams ch;
  int bad = 0;
  const int n = 100000;
  for (int r = 1; r <= n; ++r) {
    Stream s(5, ~0ULL, Subsystem::Channel, static_cast<std::uint64_t>(r));
    bad += sample_channel_state(ch, s) == ChannelState::Bad;
  }
  EXPECT_NEAR(static_cast<double>(bad) / n, 0.3, 0.01);
}

TEST(Debit, ExactBalanceKillsButIsAfforded) {
  NodeState n;
  n.energy_j = 1.5;
  EnergyLedger ledger;
  EXPECT_TRUE(debit(n, 1.5, 4, ledger));
  EXPECT_FALSE(n.alive);
  EXPECT_EQ(n.energy_j, 0.0);
  ASSERT_EQ(ledger.deaths.size(), 1u);
  EXPECT_EQ(ledger.deaths[0].round, 4u);
}

TEST(Debit, ZeroIsIdentity) {
  NodeState n;
  n.energy_j = 0.7;
  EnergyLedger ledger;
  EXPECT_TRUE(debit(n, 0.0, 1, ledger));
  EXPECT_EQ(n.energy_j, 0.7);
  EXPECT_TRUE(n.alive);
}

TEST(Debit, ShortfallDrainsAndFails) {
  NodeState n;
  n.energy_j = 1e-7;
  EnergyLedger ledger;
  EXPECT_FALSE(debit(n, 2.25e-4, 2, ledger));
  EXPECT_FALSE(n.alive);
  EXPECT_EQ(n.energy_j, 0.0);
  EXPECT_DOUBLE_EQ(ledger.applied.value(), 1e-7);
  EXPECT_DOUBLE_EQ(ledger.truncated.value(), 2.25e-4 - 1e-7);
}

TEST(Debit, DeadNodesPayNothing) {
  NodeState n;
  n.alive = false;
  EnergyLedger ledger;
  EXPECT_FALSE(debit(n, 1.0, 1, ledger));
  EXPECT_EQ(ledger.applied.value(), 0.0);
  EXPECT_TRUE(ledger.deaths.empty());
  EXPECT_THROW(debit(n, -1.0, 1, ledger), std::invalid_argument);
}

TEST(CompensatedSum, KeepsSmallTerms) {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000000; ++i) s.add(1e-16);
  EXPECT_NEAR(s.value(), 1.0 + 1e-10, 1e-15);
}
