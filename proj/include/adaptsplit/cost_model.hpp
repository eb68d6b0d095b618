#pragma once

// Latency / utilization / privacy cost of running a split scheme under a
// placement, and the weighted objective built from them.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "adaptsplit/infrastructure.hpp"
#include "adaptsplit/model_graph.hpp"
#include "adaptsplit/placement.hpp"

namespace adaptsplit {

struct CostWeights {
  double alpha = 1.0;  // latency (per ms)
  double beta = 0.0;   // utilization imbalance / overload
  double gamma = 0.0;  // privacy violations (per violating segment)
};

/// Tunables of the queueing and overload terms.
struct CostParams {
  double q_scale_ms = 20.0;
  double rho_cap = 0.99;
  double overload_penalty = 10.0;
};

/// Snapshot of the world at time t, as seen by the cost model.
struct SystemState {
  double t = 0.0;
  std::vector<CapacitySnapshot> capacity;  // per node
  std::vector<double> compute_rate;        // per node, nominal FLOP/s
  std::vector<bool> is_cloud;
  std::vector<double> bandwidth_mbps;  // n*n, 0 where no link
  std::vector<double> propagation_ms;  // n*n
  double request_rate = 0.0;           // requests/s driving induced load
  double workload = 1.0;               // W_r multiplier of per-request compute
  CostParams params;

  std::size_t size() const noexcept { return capacity.size(); }
  bool linked(NodeIndex a, NodeIndex b) const { return bandwidth_mbps[a * size() + b] > 0.0; }
  double bandwidth(NodeIndex a, NodeIndex b) const { return bandwidth_mbps[a * size() + b]; }
  double propagation(NodeIndex a, NodeIndex b) const { return propagation_ms[a * size() + b]; }
};

SystemState system_state(const Topology& topology, double t, double request_rate,
                         double workload = 1.0, CostParams params = {});

struct LatencyBreakdown {
  double total_ms = 0.0;
  double processing_ms = 0.0;
  double queueing_ms = 0.0;
  double transfer_ms = 0.0;
  std::vector<double> segment_proc_ms;                     // one per segment
  std::vector<double> boundary_tx_ms;                      // one per boundary j -> j+1
  std::vector<std::pair<NodeIndex, double>> node_queue_ms;  // distinct hosts, ascending
  /// Some host needed rho >= rho_cap; its queue term was evaluated at the cap.
  bool queue_capped = false;
};

struct CostBreakdown {
  double latency_ms = 0.0;
  double utilization_term = 0.0;
  double privacy_violations = 0.0;
  double total = 0.0;
  bool queue_capped = false;
};

/// Processing + queueing + transfer time of one request. Throws NoLink when
/// consecutive segments sit on unlinked nodes.
LatencyBreakdown latency(const SplitScheme& scheme, const Placement& placement,
                         const SystemState& state);

/// Per-node utilization including the load induced by hosted segments;
/// not capped, so values above 1 signal overload.
std::vector<double> node_utilization(const SplitScheme& scheme, const Placement& placement,
                                     const SystemState& state);

/// Population stddev of node utilizations plus the overload hinge.
double utilization_term(const SplitScheme& scheme, const Placement& placement,
                        const SystemState& state);

std::size_t privacy_violations(const SplitScheme& scheme, const Placement& placement,
                               const TrustedSet& trusted);

CostBreakdown total_cost(const SplitScheme& scheme, const Placement& placement,
                         const SystemState& state, const CostWeights& weights,
                         const TrustedSet& trusted);

namespace detail {

/// Cost of the first assignment.size() segments only; the remaining segments
/// are treated as not yet placed. Used for partial assignments in search.
CostBreakdown prefix_cost(const SplitScheme& scheme, std::span<const NodeIndex> assignment,
                          const SystemState& state, const CostWeights& weights,
                          const TrustedSet& trusted);

LatencyBreakdown prefix_latency(const SplitScheme& scheme, std::span<const NodeIndex> assignment,
                                const SystemState& state);

std::vector<double> prefix_utilization(const SplitScheme& scheme,
                                       std::span<const NodeIndex> assignment,
                                       const SystemState& state);

/// Utilization a segment induces on `host` (offered compute over nominal rate).
double induced_utilization(const Segment& segment, NodeIndex host, const SystemState& state);

}  // namespace detail

}  // namespace adaptsplit
