#pragma once

// Environment metrics and the reconfiguration trigger.

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace adaptsplit {

struct TriggerThresholds {
  double l_max_ms = 150.0;
  double u_max = 0.85;
  double b_min_mbps = 50.0;
  double t_cool_s = 30.0;
};

/// Never-reconfigured sentinel for t_last.
inline constexpr double kNever = -std::numeric_limits<double>::infinity();

struct EnvironmentState {
  double t = 0.0;
  /// Empty until the first latency sample arrives.
  std::optional<double> ewma_latency_ms;
  /// Utilization of each edge (non-cloud) node, capped at rho_cap.
  std::vector<double> node_utilization;
  std::vector<double> link_bandwidth_mbps;
  double window_s = 2.0;
};

enum class TriggerCause { latency, utilization, bandwidth };

const char* to_string(TriggerCause c);

struct TriggerReport {
  bool fired = false;
  std::vector<TriggerCause> causes;  // in latency, utilization, bandwidth order
  bool suppressed_by_cooldown = false;

  bool has(TriggerCause c) const;
};

/// smoothing * sample + (1 - smoothing) * prev; the first sample seeds the
/// average. Smoothing must lie in (0, 1].
double update_ewma(std::optional<double> prev, double sample, double smoothing);

/// Pure trigger evaluation with strict comparisons and cool-down against
/// t_last (use kNever before the first reconfiguration).
TriggerReport should_reconfigure(const EnvironmentState& env, const TriggerThresholds& thresholds,
                                 double t, double t_last);

}  // namespace adaptsplit
