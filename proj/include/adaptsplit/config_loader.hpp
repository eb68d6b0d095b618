#pragma once

// JSON scenario documents.
//
//   {
//     "name": "...",
//     "model": { "name": "...", "layers": [ { "compute_flops": 1e9, "weight_bytes": 1e6,
//                "activation_bits": 8e5, "privacy_critical": false, "repeat": 1 }, ... ] },
//     "topology": {
//       "nodes": [ { "id": "e0", "cloud": false, "trusted": true, "compute_flops_per_s": 5e13,
//                    "mem_bytes": 4e10, "utilization": 0.3 | [[t, rho], ...] }, ... ],
//       "links": [ { "endpoints": ["e0", "cloud"], "bandwidth_mbps": 100 | [[t, mbps], ...],
//                    "propagation_ms": 2, "backhaul": true }, ... ] },
//     "weights":     { "alpha": 1, "beta": 0, "gamma": 1e6 },
//     "thresholds":  { "l_max_ms": 150, "u_max": 0.85, "b_min_mbps": 50, "t_cool_s": 30 },
//     "calibration": { "q_scale_ms", "rho_cap", "overload_penalty", "ewma_smoothing",
//                      "monitor_interval_s", "tick_s", "orchestration_overhead_ms",
//                      "monitoring_overhead_ms", "admission_backlog_s", "kpi_window_s",
//                      "warmup_s", "weight_transfer_mbps" },
//     "workload":    { "arrival_rate_per_s": 8, "jitter": 0 },
//     "duration_s": 120, "seed": 1, "mode": "adaptive" | "static", "max_segments": 4,
//     "baseline":    { "boundaries": [1, 31], "placement": ["e0", "cloud", "e0"] }
//   }
//
// Everything except model, topology and baseline has a default; max_segments
// defaults to 4, or the layer count if smaller.

#include <filesystem>
#include <string_view>

#include "adaptsplit/scenario_config.hpp"

namespace adaptsplit {

/// Throws ConfigError naming the offending field path.
ScenarioConfig load_config(const std::filesystem::path& path);
ScenarioConfig parse_config(std::string_view json_text);

}  // namespace adaptsplit
