#include "adaptsplit/orchestrator.hpp"

#include <algorithm>
#include <limits>

#include "adaptsplit/errors.hpp"
#include "adaptsplit/placement_solver.hpp"

namespace adaptsplit {

const char* to_string(Mode m) {
  return m == Mode::adaptive ? "adaptive" : "static";
}

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::no_op: return "no-op";
    case EventKind::suppressed: return "suppressed";
    case EventKind::migration: return "migration";
    case EventKind::resplit: return "resplit";
    case EventKind::failed: return "failed";
  }
  return "?";
}

OrchestratorState initial_deployment(const ModelProfile& profile,
                                     std::vector<std::size_t> boundaries, Placement placement,
                                     const SystemState& initial, const TrustedSet& trusted,
                                     Mode mode) {
  SplitScheme scheme = make_split(profile, std::move(boundaries));
  const FeasibilityReport report = check_feasible(scheme, placement, initial, trusted);
  if (!report.feasible) {
    std::string msg = "baseline deployment is infeasible:";
    for (const auto& v : report.violated) msg += std::string(" [") + to_string(v.constraint) + "] " + v.detail;
    throw NoFeasiblePlacement(msg);
  }
  return OrchestratorState{std::move(scheme), std::move(placement), kNever, mode, {}};
}

MigrationCost migration_cost(const SplitScheme& old_scheme, const Placement& old_placement,
                             const SplitScheme& new_scheme, const Placement& new_placement,
                             const SystemState& world, double overhead_ms,
                             std::optional<double> transfer_mbps) {
  MigrationCost cost;
  double slowest = std::numeric_limits<double>::infinity();
  auto involve = [&](NodeIndex from, NodeIndex to) {
    if (from == to) return;
    // Unlinked pairs fall back to the slowest link in the system.
    double bw = world.linked(from, to) ? world.bandwidth(from, to) : 0.0;
    if (bw <= 0.0) {
      for (double b : world.bandwidth_mbps) {
        if (b > 0.0) bw = bw <= 0.0 ? b : std::min(bw, b);
      }
    }
    if (bw > 0.0) slowest = std::min(slowest, bw);
  };

  for (std::size_t j = 0; j < new_scheme.size(); ++j) {
    const Segment& seg = new_scheme[j];
    const NodeIndex host = new_placement[j];
    const std::size_t old_j = old_scheme.segment_of(seg.layers.begin);
    if (old_scheme[old_j].layers == seg.layers) {
      if (old_placement[old_j] != host) {
        cost.bytes += seg.load_mem;
        involve(old_placement[old_j], host);
      }
      continue;
    }
    // Boundaries changed: the whole segment is re-staged from wherever its
    // layers used to live.
    cost.bytes += seg.load_mem;
    for (std::size_t l = seg.layers.begin; l < seg.layers.end; ++l) {
      involve(old_placement[old_scheme.segment_of(l)], host);
    }
  }

  if (transfer_mbps) slowest = *transfer_mbps;
  cost.delay_ms = overhead_ms;
  if (cost.bytes > 0.0 && slowest < std::numeric_limits<double>::infinity()) {
    cost.delay_ms += cost.bytes * 8.0 / (slowest * 1e6) * 1e3;
  }
  return cost;
}

namespace {

CandidateEvaluation evaluate(const SplitScheme& scheme, const Placement& placement,
                             const CostBreakdown& cost, const SystemState& world,
                             const TriggerReport& report, const TriggerThresholds& th) {
  CandidateEvaluation c;
  c.boundaries = scheme.boundaries();
  c.placement = placement;
  c.cost = cost;
  c.predicted_latency_ms = cost.latency_ms;
  const std::vector<double> rho = node_utilization(scheme, placement, world);
  for (NodeIndex i = 0; i < world.size(); ++i) {
    if (!world.is_cloud[i]) c.predicted_max_utilization = std::max(c.predicted_max_utilization, rho[i]);
  }

  c.cleared = true;
  if (report.has(TriggerCause::latency) && !(c.predicted_latency_ms <= th.l_max_ms)) c.cleared = false;
  if (report.has(TriggerCause::utilization) && !(c.predicted_max_utilization <= th.u_max)) c.cleared = false;
  if (report.has(TriggerCause::bandwidth)) {
    for (std::size_t j = 0; j + 1 < scheme.size(); ++j) {
      const NodeIndex a = placement[j], b = placement[j + 1];
      if (a != b && world.bandwidth(a, b) < th.b_min_mbps) c.cleared = false;
    }
  }
  return c;
}

}  // namespace

StepOutcome orchestration_step(OrchestratorState state, const EnvironmentState& env,
                               const SystemState& world, const TrustedSet& trusted,
                               const OrchestratorSettings& settings) {
  ReconfigEvent event;
  event.t = env.t;
  event.old_boundaries = state.scheme.boundaries();
  event.old_placement = state.placement;
  event.new_boundaries = event.old_boundaries;
  event.new_placement = event.old_placement;

  if (state.mode == Mode::static_split) return {std::move(state), std::move(event)};

  const TriggerReport report = should_reconfigure(env, settings.thresholds, env.t, state.t_last);
  event.causes = report.causes;
  if (!report.fired) {
    if (report.suppressed_by_cooldown) {
      event.kind = EventKind::suppressed;
      state.log.push_back(event);
    }
    return {std::move(state), std::move(event)};
  }

  std::optional<SplitScheme> target_scheme;
  Placement target_placement;
  try {
    PlacementSolution moved = solve_placement(state.scheme, world, settings.weights, trusted);
    event.migration_candidate =
        evaluate(state.scheme, moved.placement, moved.cost, world, report, settings.thresholds);
    if (event.migration_candidate->cleared) {
      event.kind = EventKind::migration;
      target_scheme = state.scheme;
      target_placement = std::move(moved.placement);
    }
  } catch (const NoFeasiblePlacement& e) {
    event.detail = std::string("placement of current scheme infeasible: ") + e.what();
  }

  if (!target_scheme) {
    try {
      JointSolution revised = split_revision(state.scheme.profile(), settings.max_segments, world,
                                             settings.weights, trusted);
      event.resplit_candidate =
          evaluate(revised.scheme, revised.placement, revised.cost, world, report, settings.thresholds);
      event.kind = revised.scheme == state.scheme ? EventKind::migration : EventKind::resplit;
      target_scheme = std::move(revised.scheme);
      target_placement = std::move(revised.placement);
    } catch (const NoFeasiblePlacement& e) {
      event.kind = EventKind::failed;
      if (!event.detail.empty()) event.detail += "; ";
      event.detail += std::string("split revision infeasible: ") + e.what();
      state.log.push_back(event);
      return {std::move(state), std::move(event)};
    }
  }

  event.new_boundaries = target_scheme->boundaries();
  event.new_placement = target_placement;
  if (*target_scheme == state.scheme && target_placement == state.placement) {
    event.kind = EventKind::no_op;
    event.detail = "current configuration is already optimal";
    state.log.push_back(event);
    return {std::move(state), std::move(event)};
  }

  const MigrationCost mc = migration_cost(state.scheme, state.placement, *target_scheme,
                                          target_placement, world, settings.orchestration_overhead_ms,
                                          settings.weight_transfer_mbps);
  event.migration_bytes = mc.bytes;
  event.migration_delay_ms = mc.delay_ms;
  event.applied = true;
  state.scheme = std::move(*target_scheme);
  state.placement = std::move(target_placement);
  state.t_last = env.t;
  state.log.push_back(event);
  return {std::move(state), std::move(event)};
}

}  // namespace adaptsplit
