#include "adaptsplit/placement_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "adaptsplit/errors.hpp"

namespace adaptsplit {

const char* to_string(Constraint c) {
  switch (c) {
    case Constraint::unique: return "unique";
    case Constraint::capacity: return "capacity";
    case Constraint::privacy: return "privacy";
    case Constraint::connectivity: return "connectivity";
  }
  return "?";
}

bool FeasibilityReport::has(Constraint c) const {
  return std::any_of(violated.begin(), violated.end(),
                     [c](const Violation& v) { return v.constraint == c; });
}

FeasibilityReport check_feasible(const SplitScheme& scheme, const Placement& placement,
                                 const SystemState& state, const TrustedSet& trusted) {
  FeasibilityReport report;
  auto fail = [&](Constraint c, std::string detail) {
    report.feasible = false;
    report.violated.push_back({c, std::move(detail)});
  };

  const std::size_t n = state.size();
  if (placement.size() != scheme.size()) {
    fail(Constraint::unique, "placement has " + std::to_string(placement.size()) +
                                 " hosts for " + std::to_string(scheme.size()) + " segments");
    return report;
  }
  for (std::size_t j = 0; j < placement.size(); ++j) {
    if (placement[j] >= n) {
      fail(Constraint::unique, "segment " + std::to_string(j) + " names no valid node");
      return report;
    }
  }

  std::vector<double> mem(n, 0.0);
  for (std::size_t j = 0; j < scheme.size(); ++j) mem[placement[j]] += scheme[j].load_mem;
  const std::vector<double> rho = detail::prefix_utilization(scheme, placement.assignment, state);
  std::vector<bool> hosts(n, false);
  for (NodeIndex h : placement.assignment) hosts[h] = true;
  for (NodeIndex i = 0; i < n; ++i) {
    if (!hosts[i]) continue;
    if (mem[i] > state.capacity[i].mem_free) {
      fail(Constraint::capacity, "node " + std::to_string(i) + " memory " + std::to_string(mem[i]) +
                                     " > " + std::to_string(state.capacity[i].mem_free));
    }
    if (!(rho[i] < 1.0)) {
      fail(Constraint::capacity, "node " + std::to_string(i) + " utilization " +
                                     std::to_string(rho[i]) + " >= 1");
    }
  }

  for (std::size_t j = 0; j < scheme.size(); ++j) {
    if (scheme[j].privacy_critical && !trusted.at(placement[j])) {
      fail(Constraint::privacy, "privacy-critical segment " + std::to_string(j) +
                                    " on untrusted node " + std::to_string(placement[j]));
    }
  }
  for (std::size_t j = 0; j + 1 < scheme.size(); ++j) {
    const NodeIndex a = placement[j], b = placement[j + 1];
    if (a != b && !state.linked(a, b)) {
      fail(Constraint::connectivity, "segments " + std::to_string(j) + "/" + std::to_string(j + 1) +
                                         " on unlinked nodes");
    }
  }
  return report;
}

namespace {

/// Incremental capacity/privacy/connectivity bookkeeping for partial
/// assignments. The running sums add segments in index order, matching
/// check_feasible bit for bit.
class PartialAssignment {
 public:
  PartialAssignment(const SplitScheme& scheme, const SystemState& state, const TrustedSet& trusted)
      : scheme_(scheme), state_(state), trusted_(trusted), mem_(state.size(), 0.0), rho_(state.size()) {
    for (NodeIndex i = 0; i < state.size(); ++i) rho_[i] = state.capacity[i].utilization;
    assignment_.reserve(scheme.size());
  }

  bool can_push(NodeIndex host) const {
    const std::size_t j = assignment_.size();
    const Segment& seg = scheme_[j];
    if (seg.privacy_critical && !trusted_.at(host)) return false;
    if (j > 0 && assignment_.back() != host && !state_.linked(assignment_.back(), host)) return false;
    if (mem_[host] + seg.load_mem > state_.capacity[host].mem_free) return false;
    if (!(rho_[host] + detail::induced_utilization(seg, host, state_) < 1.0)) return false;
    return true;
  }

  void push(NodeIndex host) {
    const Segment& seg = scheme_[assignment_.size()];
    saved_.push_back({mem_[host], rho_[host]});
    mem_[host] += seg.load_mem;
    rho_[host] += detail::induced_utilization(seg, host, state_);
    assignment_.push_back(host);
  }

  void pop() {
    const NodeIndex host = assignment_.back();
    mem_[host] = saved_.back().first;
    rho_[host] = saved_.back().second;
    saved_.pop_back();
    assignment_.pop_back();
  }

  const std::vector<NodeIndex>& assignment() const { return assignment_; }
  bool complete() const { return assignment_.size() == scheme_.size(); }

 private:
  const SplitScheme& scheme_;
  const SystemState& state_;
  const TrustedSet& trusted_;
  std::vector<double> mem_;
  std::vector<double> rho_;
  std::vector<NodeIndex> assignment_;
  std::vector<std::pair<double, double>> saved_;
};

struct Best {
  std::optional<PlacementSolution> solution;

  void offer(const std::vector<NodeIndex>& assignment, const CostBreakdown& cost) {
    if (!solution || cost.total < solution->cost.total) {
      solution = PlacementSolution{Placement{assignment}, cost};
    }
  }
};

void search(PartialAssignment& partial, const SplitScheme& scheme, const SystemState& state,
            const CostWeights& weights, const TrustedSet& trusted, Best& best) {
  if (partial.complete()) {
    best.offer(partial.assignment(),
               detail::prefix_cost(scheme, partial.assignment(), state, weights, trusted));
    return;
  }
  for (NodeIndex host = 0; host < state.size(); ++host) {
    if (!partial.can_push(host)) continue;
    partial.push(host);
    search(partial, scheme, state, weights, trusted, best);
    partial.pop();
  }
}

void require_trusted_size(const TrustedSet& trusted, const SystemState& state) {
  if (trusted.size() != state.size()) throw PreconditionError("trusted set size does not match node count");
}

}  // namespace

PlacementSolution solve_placement(const SplitScheme& scheme, const SystemState& state,
                                  const CostWeights& weights, const TrustedSet& trusted) {
  require_trusted_size(trusted, state);
  PartialAssignment partial(scheme, state, trusted);
  Best best;
  search(partial, scheme, state, weights, trusted, best);
  if (!best.solution) {
    throw NoFeasiblePlacement("no feasible placement for a " + std::to_string(scheme.size()) +
                              "-segment scheme");
  }
  return *std::move(best.solution);
}

PlacementSolution brute_force_oracle(const SplitScheme& scheme, const SystemState& state,
                                     const CostWeights& weights, const TrustedSet& trusted) {
  require_trusted_size(trusted, state);
  const std::size_t n = state.size();
  const std::size_t k = scheme.size();
  Placement candidate{std::vector<NodeIndex>(k, 0)};
  Best best;
  // Odometer over every assignment, most significant digit first so that the
  // visiting order is lexicographic.
  while (true) {
    if (check_feasible(scheme, candidate, state, trusted).feasible) {
      best.offer(candidate.assignment, total_cost(scheme, candidate, state, weights, trusted));
    }
    bool wrapped = true;
    for (std::size_t digit = k; digit-- > 0;) {
      if (++candidate.assignment[digit] < n) {
        wrapped = false;
        break;
      }
      candidate.assignment[digit] = 0;
    }
    if (wrapped) break;
  }
  if (!best.solution) throw NoFeasiblePlacement("no feasible placement (exhaustive)");
  return *std::move(best.solution);
}

PlacementSolution greedy_placement(const SplitScheme& scheme, const SystemState& state,
                                   const CostWeights& weights, const TrustedSet& trusted) {
  require_trusted_size(trusted, state);
  PartialAssignment partial(scheme, state, trusted);
  while (!partial.complete()) {
    std::optional<NodeIndex> choice;
    double choice_total = std::numeric_limits<double>::infinity();
    for (NodeIndex host = 0; host < state.size(); ++host) {
      if (!partial.can_push(host)) continue;
      partial.push(host);
      const double total =
          detail::prefix_cost(scheme, partial.assignment(), state, weights, trusted).total;
      partial.pop();
      if (!choice || total < choice_total) {
        choice = host;
        choice_total = total;
      }
    }
    if (!choice) {
      throw GreedyDeadEnd("greedy placement found no feasible host for segment " +
                          std::to_string(partial.assignment().size()));
    }
    partial.push(*choice);
  }
  Placement placement{partial.assignment()};
  return {placement, total_cost(scheme, placement, state, weights, trusted)};
}

bool improves_on(double candidate, double incumbent) {
  return candidate < incumbent - kTieTolerance * std::max(1.0, std::abs(incumbent));
}

JointSolution split_revision(const ModelProfile& profile, std::size_t max_segments,
                             const SystemState& state, const CostWeights& weights,
                             const TrustedSet& trusted) {
  std::vector<SplitScheme> schemes = enumerate_splits(profile, max_segments);
  std::stable_sort(schemes.begin(), schemes.end(),
                   [](const SplitScheme& a, const SplitScheme& b) { return a.size() < b.size(); });

  std::optional<JointSolution> best;
  for (const SplitScheme& scheme : schemes) {
    try {
      PlacementSolution s = solve_placement(scheme, state, weights, trusted);
      if (!best || improves_on(s.cost.total, best->cost.total)) {
        best = JointSolution{scheme, std::move(s.placement), s.cost};
      }
    } catch (const NoFeasiblePlacement&) {
    }
  }
  if (!best) throw NoFeasiblePlacement("no feasible (scheme, placement) pair");
  return *std::move(best);
}

}  // namespace adaptsplit
