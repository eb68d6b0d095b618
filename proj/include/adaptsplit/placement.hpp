#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "adaptsplit/infrastructure.hpp"

namespace adaptsplit {

/// Segment j runs on node assignment[j]. One host per segment by construction.
struct Placement {
  std::vector<NodeIndex> assignment;

  std::size_t size() const noexcept { return assignment.size(); }
  NodeIndex operator[](std::size_t j) const { return assignment[j]; }

  /// Binary matrix x with x[i][j] = 1 iff segment j is hosted on node i.
  std::vector<std::vector<std::uint8_t>> matrix(std::size_t node_count) const;

  /// Lexicographic in node-index (topology) order.
  friend auto operator<=>(const Placement&, const Placement&) = default;
  friend bool operator==(const Placement&, const Placement&) = default;
};

std::vector<std::string> node_ids(const Placement& p, const Topology& topology);

}  // namespace adaptsplit
