#pragma once

// Single runs and seed/parameter sweeps, with their on-disk layout:
//
//   <out>/summary.csv                          one row per (value, seed)
//   <out>/<axis>_<value>/seed_<s>/rounds.csv   one row per round
//   <out>/<axis>_<value>/seed_<s>/summary.csv  that run's summary row
//   <out>/<axis>_<value>/seed_<s>/manifest.txt config echo, loadable again
//
// A run without a sweep axis writes into <out>/seed_<s>/.

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "scfto/config.hpp"
#include "scfto/metrics.hpp"
#include "scfto/protocol.hpp"
#include "scfto/version.hpp"

namespace scfto {

struct RunResult {
  RunLabel label;
  SimConfig config;
  std::string rounds_csv;
  std::string summary_row;
  MetricsAccumulator metrics{1};
};

/// Folds rounds.csv back into totals and compares them with the accumulator.
inline void check_consistency(const std::string& rounds_csv, const MetricsAccumulator& acc) {
  std::istringstream in(rounds_csv);
  std::string line;
  std::getline(in, line);
  std::uint64_t rows = 0, drops = 0, delays = 0, delivered = 0, sent = 0;
  while (std::getline(in, line)) {
    const auto cols = detail::split(line, ',');
    if (cols.size() != 18) throw std::logic_error("rounds.csv row has wrong column count");
    ++rows;
    sent += std::stoull(cols[7]);
    delivered += std::stoull(cols[9]);
    drops += std::stoull(cols[10]);
    delays += std::stoull(cols[11]);
    if (std::stoull(cols[12]) != drops || std::stoull(cols[13]) != delays ||
        std::stoull(cols[14]) != delivered)
      throw std::logic_error("cumulative columns disagree with per-round columns");
  }
  if (rows != acc.rounds() || drops != acc.drop_attacks() || delays != acc.delay_attacks() ||
      delivered != acc.delivered() || sent != acc.packets_sent())
    throw std::logic_error("summary totals disagree with rounds.csv");
}

inline std::string manifest_text(const RunLabel& label, const SimConfig& config) {
  std::string s = std::string("# scfto ") + kVersion + "\n";
  s += "# sweep_axis " + label.sweep_axis + " = " + label.sweep_value + "\n";
  return s + format_config(config);
}

/// Runs one simulation to its round budget or until every node is dead.
inline RunResult run_single(const SimConfig& config, RunLabel label) {
  RunResult res;
  res.label = std::move(label);
  res.config = config;
  res.metrics = MetricsAccumulator(config.cycle_len_rounds);
  Simulation sim(config);
  std::string csv = std::string(kRoundsHeader) + "\n";
  while (!sim.finished()) {
    const RoundReport r = sim.step();
    res.metrics.accumulate(r, sim.state().residual_energy());
    csv += format_round_row(r, res.metrics);
    csv += '\n';
  }
  check_consistency(csv, res.metrics);
  res.rounds_csv = std::move(csv);
  res.summary_row = format_summary_row(res.label, res.metrics);
  return res;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

inline std::filesystem::path run_dir(const std::filesystem::path& out, const RunLabel& label) {
  std::filesystem::path dir = out;
  if (label.sweep_axis != "none") dir /= label.sweep_axis + "_" + label.sweep_value;
  return dir / ("seed_" + std::to_string(label.seed));
}

inline void write_run(const std::filesystem::path& out, const RunResult& res) {
  const auto dir = run_dir(out, res.label);
  std::filesystem::create_directories(dir);
  write_file(dir / "rounds.csv", res.rounds_csv);
  write_file(dir / "summary.csv", std::string(kSummaryHeader) + "\n" + res.summary_row + "\n");
  write_file(dir / "manifest.txt", manifest_text(res.label, res.config));
}

struct ScenarioSpec {
  std::string config_path;  // empty means built-in defaults
  std::vector<std::uint64_t> seeds;
  std::string sweep_axis;   // empty means no sweep
  std::vector<std::string> sweep_values;
  std::string output_dir;
  std::optional<std::uint64_t> rounds;
};

/// Accepts "1,2,3", "1-10", or a mix such as "1-3,7".
inline std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& part : detail::split(text, ',')) {
    if (part.empty()) continue;
    const auto dash = part.find('-');
    if (dash == std::string::npos) {
      out.push_back(detail::parse_uint("seeds", part));
      continue;
    }
    const auto lo = detail::parse_uint("seeds", detail::trim(part.substr(0, dash)));
    const auto hi = detail::parse_uint("seeds", detail::trim(part.substr(dash + 1)));
    if (hi < lo) throw ConfigError("seeds", "descending range '" + part + "'");
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
  }
  if (out.empty()) throw ConfigError("seeds", "seed list is empty");
  return out;
}

/// Reads a scenario file of `key = value` lines. A relative config path is
/// resolved against the scenario file's directory.
inline ScenarioSpec parse_scenario(std::istream& in, const std::filesystem::path& base_dir = {}) {
  ScenarioSpec spec;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(body, "expected key = value");
    const std::string key = detail::trim(body.substr(0, eq));
    const std::string value = detail::trim(body.substr(eq + 1));
    if (key == "config") {
      const std::filesystem::path p(value);
      spec.config_path = (p.is_relative() && !base_dir.empty() ? base_dir / p : p).string();
    } else if (key == "seeds") {
      spec.seeds = parse_seed_list(value);
    } else if (key == "sweep_axis") {
      spec.sweep_axis = value;
    } else if (key == "sweep_values") {
      spec.sweep_values.clear();
      for (const auto& v : detail::split(value, ','))
        if (!v.empty()) spec.sweep_values.push_back(v);
    } else if (key == "output_dir") {
      spec.output_dir = value;
    } else if (key == "rounds") {
      spec.rounds = detail::parse_uint(key, value);
    } else {
      throw ConfigError(key, "unknown scenario key");
    }
  }
  if (spec.seeds.empty()) throw ConfigError("seeds", "seed list is empty");
  if (spec.sweep_axis.empty() != spec.sweep_values.empty())
    throw ConfigError("sweep_axis", "sweep_axis and sweep_values go together");
  return spec;
}

inline ScenarioSpec load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open scenario file");
  return parse_scenario(in, std::filesystem::path(path).parent_path());
}

/// Expands a scenario into the configurations of its runs, in output order
/// (sweep value major, seed minor).
inline std::vector<std::pair<RunLabel, SimConfig>> expand_scenario(const ScenarioSpec& spec) {
  SimConfig base = spec.config_path.empty() ? SimConfig{} : load_config(spec.config_path);
  if (spec.rounds) base.rounds = *spec.rounds;
  std::vector<std::string> values = spec.sweep_values;
  if (spec.sweep_axis.empty()) values = {"none"};
  std::vector<std::pair<RunLabel, SimConfig>> runs;
  for (const auto& v : values) {
    for (std::uint64_t seed : spec.seeds) {
      SimConfig c = base;
      RunLabel label;
      if (!spec.sweep_axis.empty()) {
        set_config_value(c, spec.sweep_axis, v);
        label.sweep_axis = spec.sweep_axis;
        label.sweep_value = v;
      }
      c.seed = seed;
      label.seed = seed;
      c.validate();
      runs.emplace_back(label, c);
    }
  }
  return runs;
}

/// Runs every (value, seed) pair, writes per-run files and the aggregated
/// summary, and returns the results in output order. Runs are independent,
/// so `jobs` > 1 only changes wall time.
inline std::vector<RunResult> run_scenario(const ScenarioSpec& spec, unsigned jobs = 1) {
  if (spec.output_dir.empty()) throw ConfigError("output_dir", "no output directory given");
  const std::filesystem::path out(spec.output_dir);
  std::filesystem::create_directories(out);
  const auto runs = expand_scenario(spec);
  std::vector<RunResult> results(runs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      results[i] = run_single(runs[i].second, runs[i].first);
      write_run(out, results[i]);
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  std::string summary = std::string(kSummaryHeader) + "\n";
  for (const auto& r : results) summary += r.summary_row + "\n";
  write_file(out / "summary.csv", summary);
  return results;
}

}  // namespace scfto
