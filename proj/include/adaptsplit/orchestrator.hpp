#pragma once

// The monitoring-cycle control loop: keep, migrate or re-split.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "adaptsplit/cost_model.hpp"
#include "adaptsplit/model_graph.hpp"
#include "adaptsplit/monitor.hpp"
#include "adaptsplit/placement.hpp"

namespace adaptsplit {

enum class Mode { static_split, adaptive };

const char* to_string(Mode m);

enum class EventKind { no_op, suppressed, migration, resplit, failed };

const char* to_string(EventKind k);

/// One solver candidate and how it fares against the thresholds.
struct CandidateEvaluation {
  std::vector<std::size_t> boundaries;
  Placement placement;
  CostBreakdown cost;
  double predicted_latency_ms = 0.0;
  double predicted_max_utilization = 0.0;
  bool cleared = false;
};

struct ReconfigEvent {
  double t = 0.0;
  EventKind kind = EventKind::no_op;
  bool applied = false;
  std::vector<TriggerCause> causes;
  std::vector<std::size_t> old_boundaries;
  std::vector<std::size_t> new_boundaries;
  Placement old_placement;
  Placement new_placement;
  double migration_bytes = 0.0;
  double migration_delay_ms = 0.0;
  std::optional<CandidateEvaluation> migration_candidate;
  std::optional<CandidateEvaluation> resplit_candidate;
  std::string detail;
};

struct OrchestratorSettings {
  CostWeights weights;
  TriggerThresholds thresholds;
  std::size_t max_segments = 4;
  double orchestration_overhead_ms = 10.0;
  std::optional<double> weight_transfer_mbps;
};

struct OrchestratorState {
  SplitScheme scheme;
  Placement placement;
  double t_last = kNever;
  Mode mode = Mode::adaptive;
  /// Every event except untriggered no-ops.
  std::vector<ReconfigEvent> log;
};

struct StepOutcome {
  OrchestratorState state;
  ReconfigEvent event;
};

/// Deploys the baseline split. Throws NoFeasiblePlacement (with the violated
/// constraints in the message) if it is not feasible in `initial`.
OrchestratorState initial_deployment(const ModelProfile& profile,
                                     std::vector<std::size_t> boundaries, Placement placement,
                                     const SystemState& initial, const TrustedSet& trusted,
                                     Mode mode);

/// One monitoring cycle at env.t. On a fired trigger, first re-solves the
/// placement of the current scheme and keeps it if its predicted metrics clear
/// every fired condition; otherwise runs the joint split revision. A changed
/// configuration is applied immediately and t_last advances. Static mode and
/// untriggered cycles leave the state untouched.
StepOutcome orchestration_step(OrchestratorState state, const EnvironmentState& env,
                               const SystemState& world, const TrustedSet& trusted,
                               const OrchestratorSettings& settings);

/// Bytes to re-stage when moving from (old scheme, old placement) to the new
/// pair, and the resulting delay over the slowest involved link. A fixed
/// `transfer_mbps` replaces the link rate when weights come from a registry.
struct MigrationCost {
  double bytes = 0.0;
  double delay_ms = 0.0;
};

MigrationCost migration_cost(const SplitScheme& old_scheme, const Placement& old_placement,
                             const SplitScheme& new_scheme, const Placement& new_placement,
                             const SystemState& world, double overhead_ms,
                             std::optional<double> transfer_mbps = std::nullopt);

}  // namespace adaptsplit
