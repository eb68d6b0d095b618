#include "adaptsplit/infrastructure.hpp"

#include <algorithm>
#include <cmath>

#include "adaptsplit/errors.hpp"

namespace adaptsplit {

Trace::Trace(double constant) : points_{{0.0, constant}} {}

Trace::Trace(std::vector<Breakpoint> breakpoints) : points_(std::move(breakpoints)) {
  if (points_.empty()) throw PreconditionError("trace has no breakpoints");
  if (points_.front().t != 0.0) throw PreconditionError("trace must start at t = 0");
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i].t > points_[i - 1].t)) {
      throw PreconditionError("trace times must be strictly increasing");
    }
  }
}

double Trace::value_at(double t) const {
  if (!(t >= 0.0)) throw PreconditionError("trace queried before t = 0");
  auto it = std::upper_bound(points_.begin(), points_.end(), t,
                             [](double x, const Breakpoint& p) { return x < p.t; });
  return std::prev(it)->value;
}

double Trace::min_value() const {
  return std::min_element(points_.begin(), points_.end(),
                          [](auto& a, auto& b) { return a.value < b.value; })
      ->value;
}

double Trace::max_value() const {
  return std::max_element(points_.begin(), points_.end(),
                          [](auto& a, auto& b) { return a.value < b.value; })
      ->value;
}

Topology::Topology(std::vector<Node> nodes, std::vector<Link> links)
    : nodes_(std::move(nodes)), links_(std::move(links)) {
  const std::size_t n = nodes_.size();
  if (n == 0) throw PreconditionError("topology has no nodes");
  std::size_t clouds = 0;
  for (NodeIndex i = 0; i < n; ++i) {
    const Node& node = nodes_[i];
    if (!by_id_.emplace(node.id, i).second) {
      throw PreconditionError("duplicate node id '" + node.id + "'");
    }
    if (node.is_cloud) ++clouds;
    if (!(node.compute_rate > 0.0)) throw PreconditionError("node '" + node.id + "': compute_rate must be > 0");
    if (!(node.mem_capacity > 0.0)) throw PreconditionError("node '" + node.id + "': mem_capacity must be > 0");
    if (node.utilization.min_value() < 0.0 || !(node.utilization.max_value() < 1.0)) {
      throw PreconditionError("node '" + node.id + "': utilization samples must lie in [0, 1)");
    }
  }
  if (clouds > 1) throw PreconditionError("at most one cloud node is permitted");

  link_of_.assign(n * n, -1);
  for (std::size_t l = 0; l < links_.size(); ++l) {
    const Link& link = links_[l];
    if (link.a >= n || link.b >= n) throw PreconditionError("link endpoint out of range");
    if (link.a == link.b) throw PreconditionError("self-links are not allowed");
    if (!(link.bandwidth_mbps.min_value() > 0.0)) {
      throw PreconditionError("link " + nodes_[link.a].id + "-" + nodes_[link.b].id +
                              ": bandwidth samples must be > 0");
    }
    if (!(link.propagation_ms >= 0.0)) throw PreconditionError("propagation delay must be >= 0");
    if (link_of_[link.a * n + link.b] != -1) {
      throw PreconditionError("duplicate link " + nodes_[link.a].id + "-" + nodes_[link.b].id);
    }
    link_of_[link.a * n + link.b] = static_cast<int>(l);
    link_of_[link.b * n + link.a] = static_cast<int>(l);
  }

  // Connectivity over all nodes.
  std::vector<bool> seen(n, false);
  std::vector<NodeIndex> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const NodeIndex u = stack.back();
    stack.pop_back();
    for (NodeIndex v = 0; v < n; ++v) {
      if (!seen[v] && link_of_[u * n + v] != -1) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw PreconditionError("links do not connect every node");
  }
}

const Node& Topology::node(NodeIndex n) const {
  if (n >= nodes_.size()) throw UnknownNode("node index " + std::to_string(n));
  return nodes_[n];
}

NodeIndex Topology::index_of(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) throw UnknownNode("unknown node '" + id + "'");
  return it->second;
}

const Link* Topology::find_link(NodeIndex a, NodeIndex b) const {
  const std::size_t n = nodes_.size();
  if (a >= n || b >= n) return nullptr;
  const int l = link_of_[a * n + b];
  return l < 0 ? nullptr : &links_[static_cast<std::size_t>(l)];
}

CapacitySnapshot Topology::capacity_at(NodeIndex n, double t) const {
  const Node& nd = node(n);
  if (!(t >= 0.0)) throw PreconditionError("capacity queried before t = 0");
  const double rho = nd.utilization.value_at(t);
  return {nd.compute_rate * (1.0 - rho), nd.mem_capacity, rho};
}

double Topology::bandwidth_at(NodeIndex a, NodeIndex b, double t) const {
  const Link* link = find_link(a, b);
  if (link == nullptr) {
    throw NoLink("no link between node " + std::to_string(a) + " and node " + std::to_string(b));
  }
  return link->bandwidth_mbps.value_at(t);
}

TrustedSet Topology::trusted_set() const {
  TrustedSet out(nodes_.size());
  for (NodeIndex i = 0; i < nodes_.size(); ++i) out[i] = nodes_[i].trusted;
  return out;
}

Topology Topology::with_backhaul_bandwidth(double mbps) const {
  std::vector<Link> links = links_;
  for (auto& l : links) {
    if (l.backhaul) l.bandwidth_mbps = Trace(mbps);
  }
  return Topology(nodes_, std::move(links));
}

}  // namespace adaptsplit
