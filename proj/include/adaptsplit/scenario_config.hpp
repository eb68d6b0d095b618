#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adaptsplit/cost_model.hpp"
#include "adaptsplit/infrastructure.hpp"
#include "adaptsplit/model_graph.hpp"
#include "adaptsplit/monitor.hpp"
#include "adaptsplit/orchestrator.hpp"
#include "adaptsplit/placement.hpp"

namespace adaptsplit {

struct SimulationSettings {
  double tick_s = 0.1;
  double monitor_interval_s = 2.0;
  double ewma_smoothing = 0.2;
  double kpi_window_s = 10.0;
  double warmup_s = 20.0;
  /// A request is dropped when any resource it needs is backlogged longer.
  double admission_backlog_s = 0.5;
  double orchestration_overhead_ms = 10.0;
  double monitoring_overhead_ms = 10.0;
  /// Weight pull rate for migrations; unset means the slowest involved link.
  std::optional<double> weight_transfer_mbps;
};

struct ScenarioConfig {
  std::string name;
  ModelProfile model;
  Topology topology;
  CostWeights weights;
  TriggerThresholds thresholds;
  CostParams cost;
  SimulationSettings sim;
  double arrival_rate_per_s = 0.0;
  /// Per-request workload multiplier is drawn uniformly from 1 +/- jitter.
  double workload_jitter = 0.0;
  double duration_s = 120.0;
  std::uint64_t seed = 1;
  Mode mode = Mode::adaptive;
  std::size_t max_segments = 4;
  std::vector<std::size_t> baseline_boundaries;
  Placement baseline_placement;
};

/// Cross-field checks shared by the loader and programmatic builders.
/// Throws ConfigError.
void validate(const ScenarioConfig& config);

}  // namespace adaptsplit
