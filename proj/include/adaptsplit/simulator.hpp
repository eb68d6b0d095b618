#pragma once

// Fixed-timestep scenario engine and static-vs-adaptive comparisons.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "adaptsplit/orchestrator.hpp"
#include "adaptsplit/scenario_config.hpp"

namespace adaptsplit {

struct RequestRecord {
  std::uint64_t id = 0;
  double arrival_s = 0.0;
  double workload = 1.0;
  /// False when admission dropped the request.
  bool completed = false;
  double latency_ms = 0.0;
  std::size_t epoch = 0;
  bool penalized_by_migration = false;
};

/// Aggregates over requests arriving in [start_s, end_s).
struct KpiWindow {
  double start_s = 0.0;
  double end_s = 0.0;
  std::size_t arrivals = 0;
  std::size_t completed = 0;
  double mean_latency_ms = 0.0;
  double p95_latency_ms = 0.0;
  std::optional<double> ewma_latency_ms;
  double throughput_rps = 0.0;
  std::optional<double> throughput_ratio;
  double max_utilization = 0.0;
  double mean_utilization = 0.0;
  std::size_t reconfig_count = 0;
};

/// A configuration in force from start_s until the next epoch.
struct Epoch {
  std::size_t id = 0;
  double start_s = 0.0;
  std::vector<std::size_t> boundaries;
  Placement placement;
};

/// Environment as observed at one monitoring cycle.
struct MonitorSample {
  double t = 0.0;
  std::optional<double> ewma_latency_ms;
  double max_utilization = 0.0;
  double mean_utilization = 0.0;
};

struct SteadyState {
  std::size_t arrivals = 0;
  std::size_t completed = 0;
  double mean_latency_ms = 0.0;
  double throughput_rps = 0.0;
  /// Mean over cycles of the busiest edge node's utilization.
  double max_utilization = 0.0;
};

struct ScenarioResult {
  std::vector<RequestRecord> requests;
  std::vector<KpiWindow> windows;
  std::vector<ReconfigEvent> events;
  std::vector<Epoch> epochs;
  std::vector<MonitorSample> samples;
  SteadyState steady;
  std::size_t applied_reconfigurations = 0;
  double orchestration_overhead_ms = 0.0;
};

/// Deterministic in (config, config.seed). Throws ConfigError or
/// NoFeasiblePlacement (baseline infeasible at t = 0).
ScenarioResult run_scenario(const ScenarioConfig& config);

/// Nearest-rank percentile of an unsorted sample (q in (0, 1]).
double percentile(std::vector<double> values, double q);

/// Window-by-window KPIs from records, samples and events. run_scenario uses
/// this; exposed so results can be re-aggregated.
std::vector<KpiWindow> aggregate_windows(const std::vector<RequestRecord>& requests,
                                         const std::vector<MonitorSample>& samples,
                                         const std::vector<ReconfigEvent>& events,
                                         double duration_s, double window_s);

SteadyState steady_state(const std::vector<RequestRecord>& requests,
                         const std::vector<MonitorSample>& samples, double warmup_s,
                         double duration_s);

struct ComparisonRow {
  double bandwidth_mbps = 0.0;
  double static_latency_ms = 0.0;
  double adaptive_latency_ms = 0.0;
  double delta_pct = 0.0;
  double throughput_ratio = 0.0;
  double max_gpu_util = 0.0;
  std::size_t reconfig_count = 0;
};

struct SweepCell {
  double bandwidth_mbps = 0.0;
  ScenarioResult static_run;
  ScenarioResult adaptive_run;
};

struct SweepResult {
  std::vector<ComparisonRow> rows;
  std::vector<SweepCell> cells;
};

/// Runs both modes with the same seed for each backhaul bandwidth; cells run
/// concurrently and are assembled in sweep order.
SweepResult compare_static_adaptive(const ScenarioConfig& config, const std::vector<double>& sweep);

}  // namespace adaptsplit
