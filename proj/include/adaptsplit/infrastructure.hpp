#pragma once

// Compute nodes, links and their time-varying capacities.

#include <cstddef>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace adaptsplit {

using NodeIndex = std::size_t;

/// Piecewise-constant, right-continuous function of time (seconds). The first
/// breakpoint sits at t = 0 and times are strictly increasing.
class Trace {
 public:
  struct Breakpoint {
    double t = 0.0;
    double value = 0.0;
    friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
  };

  Trace() : Trace(0.0) {}
  explicit Trace(double constant);
  explicit Trace(std::vector<Breakpoint> breakpoints);

  /// Throws PreconditionError for t < 0.
  double value_at(double t) const;
  const std::vector<Breakpoint>& breakpoints() const noexcept { return points_; }
  double min_value() const;
  double max_value() const;

 private:
  std::vector<Breakpoint> points_;
};

struct Node {
  std::string id;
  bool is_cloud = false;
  bool trusted = false;
  double compute_rate = 0.0;   // FLOP/s
  double mem_capacity = 0.0;   // bytes
  Trace utilization;           // exogenous load in [0, 1)
};

struct Link {
  NodeIndex a = 0;
  NodeIndex b = 0;
  Trace bandwidth_mbps;
  double propagation_ms = 0.0;  // one-way
  /// Swept by bandwidth comparisons.
  bool backhaul = false;
};

struct CapacitySnapshot {
  double compute_rate_free = 0.0;
  double mem_free = 0.0;
  double utilization = 0.0;  // exogenous share
};

/// Trusted[n] is true iff node n may host privacy-critical segments.
using TrustedSet = std::vector<bool>;

class Topology {
 public:
  Topology() = default;
  /// Validates unique ids, at most one cloud node, trace ranges, link
  /// endpoints, no duplicate links and connectivity. Throws PreconditionError.
  Topology(std::vector<Node> nodes, std::vector<Link> links);

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<Link>& links() const noexcept { return links_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  const Node& node(NodeIndex n) const;

  /// Throws UnknownNode.
  NodeIndex index_of(const std::string& id) const;
  bool contains(const std::string& id) const { return by_id_.count(id) != 0; }

  /// nullptr when a and b are not directly linked (or a == b).
  const Link* find_link(NodeIndex a, NodeIndex b) const;

  CapacitySnapshot capacity_at(NodeIndex n, double t) const;
  /// Symmetric in (a, b). Throws NoLink for a == b or unlinked pairs.
  double bandwidth_at(NodeIndex a, NodeIndex b, double t) const;

  TrustedSet trusted_set() const;

  /// Copy with every backhaul link pinned to a constant bandwidth.
  Topology with_backhaul_bandwidth(double mbps) const;

 private:
  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::unordered_map<std::string, NodeIndex> by_id_;
  std::vector<int> link_of_;  // n*n matrix of link indices, -1 when absent
};

}  // namespace adaptsplit
