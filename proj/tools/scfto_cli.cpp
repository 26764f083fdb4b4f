// Command-line front end: single runs, scenario sweeps, and a quick
// self-check of the numerical building blocks.

#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scfto/scfto.hpp"

namespace {

using namespace scfto;

struct RunOptions {
  std::string config;
  std::string seeds = "1";
  std::string out = "out";
  std::uint64_t rounds = 0;
  std::string channel;
};

struct SweepOptions {
  std::string spec;
  std::string out;
  std::uint64_t rounds = 0;
  unsigned jobs = 1;
};

int do_run(const RunOptions& o) {
  ScenarioSpec spec;
  spec.config_path = o.config;
  spec.seeds = parse_seed_list(o.seeds);
  spec.output_dir = o.out;
  if (o.rounds) spec.rounds = o.rounds;
  auto runs = expand_scenario(spec);
  const std::filesystem::path out(spec.output_dir);
  std::filesystem::create_directories(out);
  std::string summary = std::string(kSummaryHeader) + "\n";
  for (auto& [label, config] : runs) {
    // Channel forcing is applied after the file so it always wins.
    if (!o.channel.empty()) set_config_value(config, "channel_force", o.channel);
    const RunResult res = run_single(config, label);
    write_run(out, res);
    summary += res.summary_row + "\n";
    std::printf("seed %llu: %llu rounds, first death %s, attacks %llu, delivered %llu\n",
                static_cast<unsigned long long>(label.seed),
                static_cast<unsigned long long>(res.metrics.rounds()),
                format_round_opt(res.metrics.first_death_round()).c_str(),
                static_cast<unsigned long long>(res.metrics.total_attacks()),
                static_cast<unsigned long long>(res.metrics.delivered()));
  }
  write_file(out / "summary.csv", summary);
  return 0;
}

int do_sweep(const SweepOptions& o) {
  ScenarioSpec spec = load_scenario(o.spec);
  if (!o.out.empty()) spec.output_dir = o.out;
  if (o.rounds) spec.rounds = o.rounds;
  const auto results = run_scenario(spec, o.jobs);
  std::printf("%zu runs written to %s\n", results.size(), spec.output_dir.c_str());
  return 0;
}

int selftest() {
  int failures = 0;
  auto check = [&failures](const char* what, bool ok) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what);
    if (!ok) ++failures;
  };
  auto near = [](double a, double b, double tol) { return std::fabs(a - b) <= tol; };

  const RadioParams radio;
  check("crossover distance 87.706 m", near(radio.d0(), 87.706, 1e-3));
  check("tx 3000 bits at 50 m", near(tx_energy(radio, 3000, 50), 2.25e-4, 1e-15));
  check("rx with aggregation 3000 bits", near(rx_energy(radio, 3000), 1.65e-4, 1e-15));

  const fuzzy::TrustFlc flc(fuzzy::default_flc());
  check("low forwarding ratio forces zero trust", flc.evaluate(0.5, 0.1) == 0.0);
  check("perfect forwarding gives full trust", near(flc.evaluate(0.0, 1.0), 1.0, 1e-12));
  check("trust nonincreasing in delay ratio",
        flc.evaluate(0.2, 0.7) >= flc.evaluate(0.6, 0.7) - 1e-9);

  TrustEntry e;
  merge_recommendation(e, 0.8, 0.5, 1);
  check("recommendation into unknown entry", e.value && near(*e.value, 0.4, 1e-12));

  const std::vector<double> values{0.9, 0.905, 0.91, 0.2};
  const auto t_th = detect_threshold(values, OutlierParams{});
  check("outlier threshold fixture", t_th && *t_th == 0.9);

  check("rotation threshold p=0.07 r=7", near(election_threshold(0.07, 7), 0.07 / 0.51, 1e-12));

  SimConfig small;
  small.rounds = 30;
  const RunResult a = run_single(small, {});
  const RunResult b = run_single(small, {});
  check("replay determinism", a.rounds_csv == b.rounds_csv && a.summary_row == b.summary_row);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secure clustering simulator for wireless sensor networks"};
  app.set_version_flag("--version", std::string(scfto::kVersion));
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run one configuration for one or more seeds");
  run_cmd->add_option("--config", run.config, "Configuration file (defaults when omitted)")
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--seeds,--seed", run.seeds, "Seeds, e.g. 1,2,3 or 1-10");
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--rounds", run.rounds, "Round budget override");
  run_cmd->add_option("--channel", run.channel, "Force the channel state")
      ->check(CLI::IsMember({"good", "bad", "none"}));

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario file");
  sweep_cmd->add_option("--spec", sweep.spec, "Scenario file")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--out", sweep.out, "Output directory override");
  sweep_cmd->add_option("--rounds", sweep.rounds, "Round budget override");
  sweep_cmd->add_option("--jobs", sweep.jobs, "Concurrent runs")->check(CLI::PositiveNumber);

  app.add_subcommand("selftest", "Check numerical building blocks against known values");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run_cmd) return do_run(run);
    if (*sweep_cmd) return do_sweep(sweep);
    return selftest();
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  }
}
