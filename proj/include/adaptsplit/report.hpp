#pragma once

// Result serialization: CSV tables, JSON-lines event audit and the SVG chart.
//
// requests.csv: request_id,arrival_s,workload,completed,latency_ms,epoch,penalized_by_migration
// kpi.csv:      window_start_s,window_end_s,arrivals,completed,mean_latency_ms,p95_latency_ms,
//               ewma_latency_ms,throughput_rps,throughput_ratio,max_utilization,
//               mean_utilization,reconfig_count
// summary.csv:  bandwidth_mbps,static_latency_ms,adaptive_latency_ms,delta_pct,
//               throughput_ratio,max_gpu_util,reconfig_count
//
// Reals are written with six decimals; missing values are left empty.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "adaptsplit/infrastructure.hpp"
#include "adaptsplit/placement_solver.hpp"
#include "adaptsplit/simulator.hpp"

namespace adaptsplit {

std::string requests_csv(const std::vector<RequestRecord>& records);
std::string kpi_csv(const std::vector<KpiWindow>& windows);
std::string events_jsonl(const std::vector<ReconfigEvent>& events, const Topology& topology);
std::string summary_csv(const std::vector<ComparisonRow>& rows);

/// Inverse of summary_csv. Throws ConfigError on malformed input.
std::vector<ComparisonRow> parse_summary_csv(std::string_view text);

/// Latency-vs-bandwidth line chart of both modes.
std::string latency_svg(const std::vector<ComparisonRow>& rows);

nlohmann::json to_json(const ReconfigEvent& event, const Topology& topology);
nlohmann::json to_json(const JointSolution& solution, const Topology& topology);

/// Writes requests.csv, kpi.csv and events.jsonl into `dir` (created if needed).
void write_run_outputs(const ScenarioResult& result, const Topology& topology,
                       const std::filesystem::path& dir);

/// Writes per-cell run outputs under bw_<mbps>/{static,adaptive}/, then
/// summary.csv and latency_vs_bandwidth.svg rendered from summary.csv.
void write_sweep_outputs(const SweepResult& sweep, const Topology& topology,
                         const std::filesystem::path& dir);

}  // namespace adaptsplit
