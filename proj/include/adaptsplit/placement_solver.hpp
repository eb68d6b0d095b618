#pragma once

// Feasibility of placements and the solvers that search over them.

#include <cstddef>
#include <string>
#include <vector>

#include "adaptsplit/cost_model.hpp"
#include "adaptsplit/model_graph.hpp"
#include "adaptsplit/placement.hpp"

namespace adaptsplit {

enum class Constraint { unique, capacity, privacy, connectivity };

const char* to_string(Constraint c);

struct Violation {
  Constraint constraint;
  std::string detail;
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<Violation> violated;

  bool has(Constraint c) const;
};

/// Checks one-host-per-segment, memory and compute capacity of every host,
/// trusted hosting of privacy-critical segments and links between
/// consecutive hosts. Reports instead of throwing.
FeasibilityReport check_feasible(const SplitScheme& scheme, const Placement& placement,
                                 const SystemState& state, const TrustedSet& trusted);

struct PlacementSolution {
  Placement placement;
  CostBreakdown cost;
};

struct JointSolution {
  SplitScheme scheme;
  Placement placement;
  CostBreakdown cost;
};

/// Exact minimizer of the objective over all (n)^k assignments of the
/// scheme's segments, depth-first with pruning of partial assignments that
/// already break capacity, privacy or connectivity. Ties go to the
/// lexicographically smallest assignment. Throws NoFeasiblePlacement.
PlacementSolution solve_placement(const SplitScheme& scheme, const SystemState& state,
                                  const CostWeights& weights, const TrustedSet& trusted);

/// Reference enumeration of every assignment without pruning, for testing.
PlacementSolution brute_force_oracle(const SplitScheme& scheme, const SystemState& state,
                                     const CostWeights& weights, const TrustedSet& trusted);

/// Places segments in order, each on the feasible node with the smallest
/// prefix objective. Throws GreedyDeadEnd if some segment has no feasible node.
PlacementSolution greedy_placement(const SplitScheme& scheme, const SystemState& state,
                                   const CostWeights& weights, const TrustedSet& trusted);

/// Joint minimization over every contiguous scheme with at most
/// `max_segments` segments and every feasible placement of it. Ties prefer
/// fewer segments, then smaller boundary lists, then smaller placements.
/// Objectives within kTieTolerance (relative) count as ties, so a scheme that
/// only adds cuts between co-located segments never displaces the coarser one.
inline constexpr double kTieTolerance = 1e-9;

/// True when `candidate` beats `incumbent` by more than kTieTolerance.
bool improves_on(double candidate, double incumbent);

JointSolution split_revision(const ModelProfile& profile, std::size_t max_segments,
                             const SystemState& state, const CostWeights& weights,
                             const TrustedSet& trusted);

}  // namespace adaptsplit
