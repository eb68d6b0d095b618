#include "adaptsplit/monitor.hpp"

#include <algorithm>

#include "adaptsplit/errors.hpp"

namespace adaptsplit {

const char* to_string(TriggerCause c) {
  switch (c) {
    case TriggerCause::latency: return "latency";
    case TriggerCause::utilization: return "utilization";
    case TriggerCause::bandwidth: return "bandwidth";
  }
  return "?";
}

bool TriggerReport::has(TriggerCause c) const {
  return std::find(causes.begin(), causes.end(), c) != causes.end();
}

double update_ewma(std::optional<double> prev, double sample, double smoothing) {
  if (!(smoothing > 0.0 && smoothing <= 1.0)) throw PreconditionError("EWMA smoothing must lie in (0, 1]");
  if (!prev) return sample;
  return smoothing * sample + (1.0 - smoothing) * *prev;
}

TriggerReport should_reconfigure(const EnvironmentState& env, const TriggerThresholds& thresholds,
                                 double t, double t_last) {
  if (t < t_last) throw PreconditionError("trigger evaluated before the last reconfiguration");
  TriggerReport r;
  if (env.ewma_latency_ms && *env.ewma_latency_ms > thresholds.l_max_ms) {
    r.causes.push_back(TriggerCause::latency);
  }
  if (!env.node_utilization.empty() &&
      *std::max_element(env.node_utilization.begin(), env.node_utilization.end()) > thresholds.u_max) {
    r.causes.push_back(TriggerCause::utilization);
  }
  if (!env.link_bandwidth_mbps.empty() &&
      *std::min_element(env.link_bandwidth_mbps.begin(), env.link_bandwidth_mbps.end()) <
          thresholds.b_min_mbps) {
    r.causes.push_back(TriggerCause::bandwidth);
  }
  if (r.causes.empty()) return r;
  if (t - t_last >= thresholds.t_cool_s) {
    r.fired = true;
  } else {
    r.suppressed_by_cooldown = true;
  }
  return r;
}

}  // namespace adaptsplit
