#include "adaptsplit/cost_model.hpp"

#include <algorithm>
#include <cmath>

#include "adaptsplit/errors.hpp"

namespace adaptsplit {

std::vector<std::vector<std::uint8_t>> Placement::matrix(std::size_t node_count) const {
  std::vector<std::vector<std::uint8_t>> x(node_count, std::vector<std::uint8_t>(assignment.size(), 0));
  for (std::size_t j = 0; j < assignment.size(); ++j) {
    if (assignment[j] >= node_count) throw UnknownNode("placement refers to node " + std::to_string(assignment[j]));
    x[assignment[j]][j] = 1;
  }
  return x;
}

std::vector<std::string> node_ids(const Placement& p, const Topology& topology) {
  std::vector<std::string> out;
  out.reserve(p.size());
  for (NodeIndex n : p.assignment) out.push_back(topology.node(n).id);
  return out;
}

SystemState system_state(const Topology& topology, double t, double request_rate, double workload,
                         CostParams params) {
  if (!(t >= 0.0)) throw PreconditionError("system state requested before t = 0");
  const std::size_t n = topology.size();
  SystemState s;
  s.t = t;
  s.request_rate = request_rate;
  s.workload = workload;
  s.params = params;
  s.capacity.reserve(n);
  for (NodeIndex i = 0; i < n; ++i) {
    s.capacity.push_back(topology.capacity_at(i, t));
    s.compute_rate.push_back(topology.node(i).compute_rate);
    s.is_cloud.push_back(topology.node(i).is_cloud);
  }
  s.bandwidth_mbps.assign(n * n, 0.0);
  s.propagation_ms.assign(n * n, 0.0);
  for (const Link& l : topology.links()) {
    const double bw = l.bandwidth_mbps.value_at(t);
    s.bandwidth_mbps[l.a * n + l.b] = s.bandwidth_mbps[l.b * n + l.a] = bw;
    s.propagation_ms[l.a * n + l.b] = s.propagation_ms[l.b * n + l.a] = l.propagation_ms;
  }
  return s;
}

namespace detail {

double induced_utilization(const Segment& segment, NodeIndex host, const SystemState& state) {
  return state.request_rate * state.workload * segment.load_compute / state.compute_rate[host];
}

std::vector<double> prefix_utilization(const SplitScheme& scheme,
                                       std::span<const NodeIndex> assignment,
                                       const SystemState& state) {
  std::vector<double> rho(state.size());
  for (NodeIndex i = 0; i < state.size(); ++i) rho[i] = state.capacity[i].utilization;
  for (std::size_t j = 0; j < assignment.size(); ++j) {
    rho[assignment[j]] += induced_utilization(scheme[j], assignment[j], state);
  }
  return rho;
}

LatencyBreakdown prefix_latency(const SplitScheme& scheme, std::span<const NodeIndex> assignment,
                                const SystemState& state) {
  LatencyBreakdown out;
  const std::size_t p = assignment.size();
  out.segment_proc_ms.reserve(p);
  for (std::size_t j = 0; j < p; ++j) {
    const NodeIndex host = assignment[j];
    const double ms = state.workload * scheme[j].load_compute / state.capacity[host].compute_rate_free * 1e3;
    out.segment_proc_ms.push_back(ms);
    out.processing_ms += ms;
  }

  if (p > 1) out.boundary_tx_ms.reserve(p - 1);
  for (std::size_t j = 0; j + 1 < p; ++j) {
    const NodeIndex a = assignment[j];
    const NodeIndex b = assignment[j + 1];
    double ms = 0.0;
    if (a != b) {
      if (!state.linked(a, b)) {
        throw NoLink("segments " + std::to_string(j) + " and " + std::to_string(j + 1) +
                     " sit on unlinked nodes " + std::to_string(a) + " and " + std::to_string(b));
      }
      ms = scheme[j].boundary_activation_bits / (state.bandwidth(a, b) * 1e6) * 1e3 +
           state.propagation(a, b);
    }
    out.boundary_tx_ms.push_back(ms);
    out.transfer_ms += ms;
  }

  const std::vector<double> rho = prefix_utilization(scheme, assignment, state);
  std::vector<NodeIndex> hosts(assignment.begin(), assignment.end());
  std::sort(hosts.begin(), hosts.end());
  hosts.erase(std::unique(hosts.begin(), hosts.end()), hosts.end());
  const double cap = state.params.rho_cap;
  for (NodeIndex h : hosts) {
    double r = rho[h];
    if (r >= cap) {
      out.queue_capped = true;
      r = cap;
    }
    const double ms = state.params.q_scale_ms * r / (1.0 - r);
    out.node_queue_ms.emplace_back(h, ms);
    out.queueing_ms += ms;
  }

  out.total_ms = out.processing_ms + out.queueing_ms + out.transfer_ms;
  return out;
}

namespace {

double utilization_from(const std::vector<double>& rho, double overload_penalty) {
  const double n = static_cast<double>(rho.size());
  double mean = 0.0;
  for (double r : rho) mean += r;
  mean /= n;
  double var = 0.0;
  double overload = 0.0;
  for (double r : rho) {
    var += (r - mean) * (r - mean);
    overload += std::max(0.0, r - 1.0);
  }
  return std::sqrt(var / n) + overload_penalty * overload;
}

std::size_t violations_of(const SplitScheme& scheme, std::span<const NodeIndex> assignment,
                          const TrustedSet& trusted) {
  std::size_t count = 0;
  for (std::size_t j = 0; j < assignment.size(); ++j) {
    if (scheme[j].privacy_critical && !trusted.at(assignment[j])) ++count;
  }
  return count;
}

}  // namespace

CostBreakdown prefix_cost(const SplitScheme& scheme, std::span<const NodeIndex> assignment,
                          const SystemState& state, const CostWeights& weights,
                          const TrustedSet& trusted) {
  const LatencyBreakdown lat = prefix_latency(scheme, assignment, state);
  CostBreakdown c;
  c.latency_ms = lat.total_ms;
  c.queue_capped = lat.queue_capped;
  c.utilization_term = utilization_from(prefix_utilization(scheme, assignment, state),
                                        state.params.overload_penalty);
  c.privacy_violations = static_cast<double>(violations_of(scheme, assignment, trusted));
  c.total = weights.alpha * c.latency_ms + weights.beta * c.utilization_term +
            weights.gamma * c.privacy_violations;
  return c;
}

}  // namespace detail

namespace {

void require_shape(const SplitScheme& scheme, const Placement& placement, std::size_t nodes) {
  if (placement.size() != scheme.size()) {
    throw PreconditionError("placement has " + std::to_string(placement.size()) +
                            " entries for " + std::to_string(scheme.size()) + " segments");
  }
  for (NodeIndex n : placement.assignment) {
    if (n >= nodes) throw UnknownNode("placement refers to node " + std::to_string(n));
  }
}

}  // namespace

LatencyBreakdown latency(const SplitScheme& scheme, const Placement& placement,
                         const SystemState& state) {
  require_shape(scheme, placement, state.size());
  return detail::prefix_latency(scheme, placement.assignment, state);
}

std::vector<double> node_utilization(const SplitScheme& scheme, const Placement& placement,
                                     const SystemState& state) {
  require_shape(scheme, placement, state.size());
  return detail::prefix_utilization(scheme, placement.assignment, state);
}

double utilization_term(const SplitScheme& scheme, const Placement& placement,
                        const SystemState& state) {
  return detail::utilization_from(node_utilization(scheme, placement, state),
                                  state.params.overload_penalty);
}

std::size_t privacy_violations(const SplitScheme& scheme, const Placement& placement,
                               const TrustedSet& trusted) {
  if (placement.size() != scheme.size()) throw PreconditionError("placement / scheme size mismatch");
  return detail::violations_of(scheme, placement.assignment, trusted);
}

CostBreakdown total_cost(const SplitScheme& scheme, const Placement& placement,
                         const SystemState& state, const CostWeights& weights,
                         const TrustedSet& trusted) {
  require_shape(scheme, placement, state.size());
  return detail::prefix_cost(scheme, placement.assignment, state, weights, trusted);
}

}  // namespace adaptsplit
