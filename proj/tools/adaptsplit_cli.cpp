// Command-line front end: run, sweep and solve scenario documents.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "adaptsplit/config_loader.hpp"
#include "adaptsplit/errors.hpp"
#include "adaptsplit/placement_solver.hpp"
#include "adaptsplit/report.hpp"
#include "adaptsplit/simulator.hpp"

namespace {

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  std::optional<std::string> mode;
  std::optional<double> l_max_ms;
  std::optional<double> u_max;
  std::optional<double> b_min_mbps;
  std::optional<double> t_cool_s;
  std::optional<std::size_t> max_segments;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("config", o.config, "Scenario JSON document")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Override the scenario seed");
  cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
  cmd->add_option("--mode", o.mode, "static or adaptive")->check(CLI::IsMember({"static", "adaptive"}));
  cmd->add_option("--l-max-ms", o.l_max_ms, "EWMA latency threshold (ms)");
  cmd->add_option("--u-max", o.u_max, "Node utilization threshold");
  cmd->add_option("--b-min-mbps", o.b_min_mbps, "Minimum link bandwidth (Mb/s)");
  cmd->add_option("--t-cool-s", o.t_cool_s, "Reconfiguration cool-down (s)");
  cmd->add_option("--max-segments", o.max_segments, "Largest segment count for split revision");
}

adaptsplit::ScenarioConfig load(const CommonOptions& o) {
  adaptsplit::ScenarioConfig c = adaptsplit::load_config(o.config);
  if (o.seed) c.seed = *o.seed;
  if (o.mode) c.mode = *o.mode == "static" ? adaptsplit::Mode::static_split : adaptsplit::Mode::adaptive;
  if (o.l_max_ms) c.thresholds.l_max_ms = *o.l_max_ms;
  if (o.u_max) c.thresholds.u_max = *o.u_max;
  if (o.b_min_mbps) c.thresholds.b_min_mbps = *o.b_min_mbps;
  if (o.t_cool_s) c.thresholds.t_cool_s = *o.t_cool_s;
  if (o.max_segments) c.max_segments = *o.max_segments;
  adaptsplit::validate(c);
  return c;
}

std::vector<double> parse_bandwidths(const std::string& list) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const std::size_t comma = list.find(',', pos);
    const std::string item = list.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !(v > 0.0)) {
      throw adaptsplit::ConfigError("--bandwidths", "expected positive Mb/s values, got '" + item + "'");
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive split-inference orchestration simulator"};
  app.require_subcommand(1);

  CommonOptions run_opts, sweep_opts, solve_opts;
  std::string bandwidths = "20,50,100,200";

  CLI::App* run = app.add_subcommand("run", "Simulate one scenario");
  add_common(run, run_opts);
  CLI::App* sweep = app.add_subcommand("sweep", "Compare static and adaptive modes across backhaul bandwidths");
  add_common(sweep, sweep_opts);
  sweep->add_option("--bandwidths", bandwidths, "Comma-separated Mb/s values")->capture_default_str();
  CLI::App* solve = app.add_subcommand("solve", "Print the joint optimal split and placement at t = 0");
  add_common(solve, solve_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto cfg = load(run_opts);
      const auto result = adaptsplit::run_scenario(cfg);
      adaptsplit::write_run_outputs(result, cfg.topology, run_opts.out);
      std::cout << fmt::format(
          "{}: {} requests ({} completed), steady-state mean latency {:.1f} ms, {} reconfigurations\n",
          cfg.name, result.requests.size(),
          std::count_if(result.requests.begin(), result.requests.end(),
                        [](const auto& r) { return r.completed; }),
          result.steady.mean_latency_ms, result.applied_reconfigurations);
    } else if (*sweep) {
      const auto cfg = load(sweep_opts);
      const auto result = adaptsplit::compare_static_adaptive(cfg, parse_bandwidths(bandwidths));
      adaptsplit::write_sweep_outputs(result, cfg.topology, sweep_opts.out);
      std::cout << fmt::format("{:>10} {:>12} {:>14} {:>9} {:>11} {:>9} {:>9}\n", "Mb/s", "static ms",
                               "adaptive ms", "delta %", "throughput", "max util", "reconfigs");
      for (const auto& r : result.rows) {
        std::cout << fmt::format("{:>10g} {:>12.1f} {:>14.1f} {:>9.1f} {:>10.2f}x {:>9.2f} {:>9}\n",
                                 r.bandwidth_mbps, r.static_latency_ms, r.adaptive_latency_ms,
                                 r.delta_pct, r.throughput_ratio, r.max_gpu_util, r.reconfig_count);
      }
    } else if (*solve) {
      const auto cfg = load(solve_opts);
      const auto state = adaptsplit::system_state(cfg.topology, 0.0, cfg.arrival_rate_per_s, 1.0, cfg.cost);
      const auto solution = adaptsplit::split_revision(cfg.model, cfg.max_segments, state, cfg.weights,
                                                       cfg.topology.trusted_set());
      std::cout << adaptsplit::to_json(solution, cfg.topology).dump(2) << "\n";
    }
  } catch (const adaptsplit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
