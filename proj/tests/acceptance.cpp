// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "scfto/scfto.hpp"

using namespace scfto;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(const char* id, bool ok, const std::string& detail) {
  std::printf("[%s] %s %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

std::vector<oracle::BoxPoint> as_boxes(const std::vector<fuzzy::WeightedEndpoint>& pts) {
  std::vector<oracle::BoxPoint> out;
  for (const auto& p : pts)
    out.push_back({p.value, std::min(p.grades.lo, p.grades.hi), std::max(p.grades.lo, p.grades.hi)});
  return out;
}

void ac1_type_reduction() {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> len(9, 16);
  std::vector<fuzzy::WeightedEndpointList> lists;
  for (int i = 0; i < 1000; ++i) {
    std::vector<fuzzy::ConsequentEntry> entries(static_cast<std::size_t>(len(gen)));
    for (auto& e : entries) {
      double a = u(gen), b = u(gen), g1 = u(gen), g2 = u(gen);
      if (a > b) std::swap(a, b);
      if (g1 > g2) std::swap(g1, g2);
      e = {{a, b}, {g1, g2}};
    }
    lists.push_back(fuzzy::make_endpoint_list(entries));
  }
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<fuzzy::Interval> reduced;
  for (const auto& l : lists) reduced.push_back(fuzzy::type_reduce(l));
  const double elapsed = seconds_since(t0);
  double worst = 0.0;
  for (std::size_t i = 0; i < lists.size(); ++i) {
    const double left = oracle::switch_point_extremes(as_boxes(lists[i].left)).first;
    const double right = oracle::switch_point_extremes(as_boxes(lists[i].right)).second;
    worst = std::max({worst, std::abs(reduced[i].lo - left), std::abs(reduced[i].hi - right)});
  }
  report("AC1", worst <= 1e-9 && elapsed < 5.0,
         fmt("type reduction vs switch-point search: 1000 lists, max |diff| %.3g, %.3f s", worst,
             elapsed));
}

void ac2_rule_one() {
  const fuzzy::TrustFlc flc;
  std::size_t nonzero = 0, checked = 0;
  for (int j = 0; j < 200; ++j)
    for (int i = 0; i <= 1000; ++i, ++checked)
      nonzero += flc.evaluate(i / 1000.0, j / 1000.0) != 0.0;
  report("AC2", nonzero == 0,
         fmt("dfr < 0.2 forces zero trust: %zu grid points, %zu nonzero", checked, nonzero));
}

void ac3_monotone() {
  const fuzzy::TrustFlc flc;
  std::vector<std::vector<double>> t(101, std::vector<double>(101, 0.0));
  for (int i = 0; i <= 100; ++i)
    for (int j = 20; j <= 100; ++j) t[i][j] = flc.evaluate(i / 100.0, j / 100.0);
  double worst = 0.0;
  for (int i = 0; i <= 100; ++i)
    for (int j = 20; j <= 100; ++j) {
      if (i < 100) worst = std::max(worst, t[i + 1][j] - t[i][j]);
      if (j < 100) worst = std::max(worst, t[i][j] - t[i][j + 1]);
    }
  report("AC3", worst <= 1e-9,
         fmt("nonincreasing in dfd, nondecreasing in dfr on 0.01 grid: max violation %.3g", worst));
}

void ac4_channel() {
  const ChannelParams ch;
  const int n = 100000;
  int bad = 0;
  for (int r = 1; r <= n; ++r) {
    Stream s(1, kNetworkStream, Subsystem::Channel, static_cast<std::uint64_t>(r));
    bad += sample_channel_state(ch, s) == ChannelState::Bad;
  }
  const double freq = static_cast<double>(bad) / n;
  report("AC4", std::abs(freq - 0.3) <= 0.02,
         fmt("bad-state frequency over %d rounds: %.4f (target 0.3 +- 0.02)", n, freq));
}

void ac5_energy() {
  SimConfig c;
  c.rounds = 500;
  Simulation sim(c);
  CompensatedSum per_round;
  while (!sim.finished()) per_round.add(sim.step().energy_spent_j);
  const auto& s = sim.state();
  const double initial = c.initial_energy_j * static_cast<double>(c.node_count);
  const double rel = std::abs(initial - (s.ledger.applied.value() + s.residual_energy())) / initial;
  const double rel_rounds = std::abs(per_round.value() - s.ledger.applied.value()) / initial;
  const double d0 = c.radio.d0();
  report("AC5", rel <= 1e-12 && rel_rounds <= 1e-12 && std::abs(d0 - 87.706) <= 1e-3,
         fmt("ledger over %llu rounds: relative error %.3g (per-round sum %.3g), d0 = %.4f m",
             static_cast<unsigned long long>(s.round), rel, rel_rounds, d0));
}

void ac6_outlier() {
  const OutlierParams p;
  const std::vector<double> a{0.9, 0.905, 0.91, 0.2};
  const std::vector<double> b{0.80, 0.802, 0.804, 0.806, 0.808, 0.10, 0.102, 0.104, 0.106, 0.108};
  const auto ta = detect_threshold(a, p);
  const auto tb = detect_threshold(b, p);
  report("AC6", ta == 0.9 && tb == 0.80,
         fmt("hand-traced fixtures: tight clump %.3f (want 0.9), bimodal %.3f (want 0.8)",
             ta.value_or(-1.0), tb.value_or(-1.0)));
}

void ac7_malicious_clusters() {
  int hits = 0;
  double worst_time = 0.0;
  double late_clusters = 0.0, late_idle = 0.0, late_alive = 0.0;
  std::string misses;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SimConfig c;
    c.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    Simulation sim(c);
    MetricsAccumulator acc(c.cycle_len_rounds);
    while (!sim.finished()) {
      const RoundReport r = sim.step();
      acc.accumulate(r, 0.0);
      if (r.round > c.rounds - 5 * c.cycle_len_rounds) {
        late_clusters += static_cast<double>(r.clusters_formed());
        late_idle += static_cast<double>(r.idle);
        late_alive += static_cast<double>(r.alive_at_end);
      }
    }
    worst_time = std::max(worst_time, seconds_since(t0));
    const auto cycles = acc.cycle_malicious_avg();
    bool zero = cycles.size() == 30;
    for (std::size_t i = cycles.size() >= 5 ? cycles.size() - 5 : 0; i < cycles.size(); ++i)
      zero = zero && cycles[i] == 0.0;
    hits += zero;
    if (!zero) misses += " " + std::to_string(seed);
  }
  const double late_rounds = 20.0 * 5 * 50;
  report("AC7", hits >= 16 && worst_time < 60.0,
         fmt("last 5 cycles free of malicious clusters in %d/20 seeds (need 16), slowest seed "
             "%.2f s, misses:%s",
             hits, worst_time, misses.empty() ? " none" : misses.c_str()));
  std::printf("      note: over those last 250 rounds a round averages %.2f member-bearing "
              "clusters, %.1f idle of %.1f alive nodes\n",
              late_clusters / late_rounds, late_idle / late_rounds, late_alive / late_rounds);
}

void ac8_attack_trend() {
  const std::vector<double> fractions{0.1, 0.2, 0.3, 0.4, 0.5};
  std::vector<MeanSe> drops, delays;
  for (double f : fractions) {
    std::vector<double> d, y;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      SimConfig c;
      c.seed = seed;
      c.malicious_fraction = f;
      const RunResult r = run_single(c, {});
      d.push_back(static_cast<double>(r.metrics.drop_attacks()));
      y.push_back(static_cast<double>(r.metrics.delay_attacks()));
    }
    drops.push_back(mean_se(d));
    delays.push_back(mean_se(y));
  }
  bool ok = true;
  for (std::size_t i = 0; i + 1 < fractions.size(); ++i) {
    ok = ok && drops[i + 1].mean >= drops[i].mean - std::min(drops[i].se, drops[i + 1].se);
    ok = ok && delays[i + 1].mean >= delays[i].mean - std::min(delays[i].se, delays[i + 1].se);
  }
  std::string detail = "mean totals over 10 seeds, drop / delay:";
  for (std::size_t i = 0; i < fractions.size(); ++i)
    detail += fmt(" %.1f: %.1f/%.1f", fractions[i], drops[i].mean, delays[i].mean);
  report("AC8", ok, detail);
}

void ac9_attack_frequencies() {
  const AttackParams attack;
  double worst = 0.0;
  for (Role role : {Role::Generic, Role::Advanced, Role::Super}) {
    const double k = tier(role);
    Stream rng(99, static_cast<std::uint64_t>(role), Subsystem::HeadAction, 0);
    const int n = 100000;
    int drop = 0, delay = 0;
    for (int i = 0; i < n; ++i) {
      const HeadAction a = head_action(role, attack, 10.0, rng);
      drop += std::holds_alternative<Drop>(a);
      delay += std::holds_alternative<Delay>(a);
    }
    worst = std::max({worst, std::abs(drop / double(n) - k * attack.p_sf),
                      std::abs(delay / double(n) - k * attack.p_df)});
  }
  report("AC9", worst <= 0.01,
         fmt("per-tier drop/delay frequencies over 1e5 actions: max deviation %.4f", worst));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void ac10_replay() {
  const fs::path root = fs::temp_directory_path() / "scfto_acceptance_replay";
  fs::remove_all(root);
  ScenarioSpec spec;
  spec.seeds = {3, 4};
  spec.sweep_axis = "malicious_fraction";
  spec.sweep_values = {"0.2", "0.4"};
  spec.output_dir = (root / "a").string();
  run_scenario(spec, 1);
  spec.output_dir = (root / "b").string();
  run_scenario(spec, 2);
  std::size_t files = 0, differing = 0;
  for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename();
    if (name != "rounds.csv" && name != "summary.csv") continue;
    ++files;
    const fs::path twin = root / "b" / fs::relative(entry.path(), root / "a");
    differing += slurp(entry.path()) != slurp(twin);
  }
  fs::remove_all(root);
  report("AC10", files == 9 && differing == 0,
         fmt("replayed 4 full runs: %zu csv files compared, %zu differ", files, differing));
}

}  // namespace

int main() {
  ac1_type_reduction();
  ac2_rule_one();
  ac3_monotone();
  ac4_channel();
  ac5_energy();
  ac6_outlier();
  ac7_malicious_clusters();
  ac8_attack_trend();
  ac9_attack_frequencies();
  ac10_replay();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
