#include "flexslice/pathing.h"

#include <algorithm>

namespace flexslice {

ShortestPathTree::ShortestPathTree(const PhysicalNetwork& net, NodeIndex src, double demand)
    : src_(src), hops_(net.node_count(), -1), parent_link_(net.node_count(), -1), net_(&net) {
  if (src < 0 || src >= net.node_count()) throw ParameterError("shortest path: unknown source");
  std::vector<NodeIndex> queue;
  queue.reserve(net.node_count());
  queue.push_back(src);
  hops_[src] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    NodeIndex u = queue[head];
    for (LinkIndex l : net.out_links(u)) {
      if (!net.link_fits(l, demand)) continue;
      NodeIndex v = net.link(l).dst;
      if (hops_[v] >= 0) continue;
      hops_[v] = hops_[u] + 1;
      parent_link_[v] = l;
      queue.push_back(v);
    }
  }
}

bool ShortestPathTree::path_to(NodeIndex dst, Path& out) const {
  out.clear();
  if (hops_[dst] < 0) return false;
  out.resize(hops_[dst]);
  NodeIndex at = dst;
  for (int k = hops_[dst] - 1; k >= 0; --k) {
    LinkIndex l = parent_link_[at];
    out[k] = l;
    at = net_->link(l).src;
  }
  return true;
}

std::optional<Path> ShortestPathTree::path_to(NodeIndex dst) const {
  Path p;
  if (!path_to(dst, p)) return std::nullopt;
  return p;
}

std::optional<Path> shortest_path(const PhysicalNetwork& net, NodeIndex src, NodeIndex dst,
                                  double demand) {
  if (dst < 0 || dst >= net.node_count()) throw ParameterError("shortest path: unknown target");
  return ShortestPathTree(net, src, demand).path_to(dst);
}

std::vector<int> hop_distances(const PhysicalNetwork& net, NodeIndex src, double demand) {
  ShortestPathTree tree(net, src, demand);
  std::vector<int> out(net.node_count());
  for (NodeIndex i = 0; i < net.node_count(); ++i) out[i] = tree.hops(i);
  return out;
}

}  // namespace flexslice
