#pragma once

#include <optional>
#include <vector>

#include "flexslice/model.h"

namespace flexslice {

using Path = std::vector<LinkIndex>;

// Minimum-hop paths from one source over the links whose remaining bandwidth
// covers `demand`. Among equal-hop paths the one with the lexicographically
// smallest link-index sequence wins; breadth-first search over ascending
// adjacency lists yields exactly that tree.
class ShortestPathTree {
 public:
  ShortestPathTree(const PhysicalNetwork& net, NodeIndex src, double demand);

  NodeIndex source() const { return src_; }
  bool reachable(NodeIndex dst) const { return hops_[dst] >= 0; }
  int hops(NodeIndex dst) const { return hops_[dst]; }
  // Links from source to dst; empty for dst == source. nullopt if unreachable.
  std::optional<Path> path_to(NodeIndex dst) const;
  // Same, reusing out's storage; returns false if unreachable.
  bool path_to(NodeIndex dst, Path& out) const;

 private:
  NodeIndex src_;
  std::vector<int> hops_;
  std::vector<LinkIndex> parent_link_;
  const PhysicalNetwork* net_;
};

// Throws ParameterError for unknown node indices.
std::optional<Path> shortest_path(const PhysicalNetwork& net, NodeIndex src, NodeIndex dst,
                                  double demand);

// Hop distances from src over links with remaining >= demand (-1 unreachable).
std::vector<int> hop_distances(const PhysicalNetwork& net, NodeIndex src, double demand);

}  // namespace flexslice
