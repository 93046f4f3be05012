#include "flexslice/bfn.h"

#include <algorithm>
#include <limits>
#include <random>

#include "flexslice/configs.h"
#include "flexslice/pathing.h"

namespace flexslice::bfn {

double capacity_score(const PhysicalNode& node) {
  double score = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < node.capacity.size(); ++a) {
    double ratio = node.capacity[a] > 0.0 ? node.remaining[a] / node.capacity[a] : 0.0;
    score = std::min(score, ratio);
  }
  return score;
}

std::optional<Embedding> map_config(const PhysicalNetwork& net, const SliceRequest& slice,
                                    const SliceConfiguration& config) {
  check_slice(slice, net);
  PhysicalNetwork work = net;
  const int n = slice.size();
  std::vector<char> used(work.node_count(), 0);

  Embedding emb;
  emb.slice_id = slice.id;
  emb.config_id = config.id;
  emb.node_map.assign(n, -1);

  auto better = [&](NodeIndex candidate, NodeIndex incumbent) {
    return incumbent < 0 ||
           capacity_score(work.node(candidate)) > capacity_score(work.node(incumbent));
  };

  const int first = config.order[0];
  NodeIndex host = -1;
  for (NodeIndex i = 0; i < work.node_count(); ++i) {
    if (work.node_fits(i, slice.vnfs[first].demand) && better(i, host)) host = i;
  }
  if (host < 0) return std::nullopt;
  work.debit_node(host, slice.vnfs[first].demand);
  used[host] = 1;
  emb.node_map[first] = host;

  for (int p = 1; p < n; ++p) {
    const int prev = config.order[p - 1];
    const int vnf = config.order[p];
    const double bw = slice.link_demand(prev, vnf).value();
    ShortestPathTree tree(work, emb.node_map[prev], bw);

    NodeIndex chosen = -1;
    int ring = std::numeric_limits<int>::max();
    for (NodeIndex i = 0; i < work.node_count(); ++i) {
      if (used[i] || !tree.reachable(i) || !work.node_fits(i, slice.vnfs[vnf].demand)) continue;
      const int d = tree.hops(i);
      if (d < ring || (d == ring && better(i, chosen))) {
        ring = d;
        chosen = i;
      }
    }
    if (chosen < 0) return std::nullopt;
    Path path = *tree.path_to(chosen);
    work.debit_node(chosen, slice.vnfs[vnf].demand);
    for (LinkIndex l : path) work.debit_link(l, bw);
    used[chosen] = 1;
    emb.node_map[vnf] = chosen;
    emb.link_paths.push_back(VirtualLinkPath{prev, vnf, std::move(path)});
  }
  return emb;
}

ScenarioResult solve_all(const PhysicalNetwork& net, const std::vector<SliceRequest>& slices,
                         std::uint64_t seed, double gamma) {
  std::mt19937_64 rng(seed);
  ScenarioResult result;
  PhysicalNetwork work = net;
  for (const auto& slice : slices) {
    struct Candidate {
      SliceConfiguration config;
      Embedding emb;
    };
    std::vector<Candidate> mappable;
    for (auto& config : enumerate_configs(slice)) {
      if (auto emb = map_config(work, slice, config)) {
        mappable.push_back({std::move(config), std::move(*emb)});
      }
    }
    if (mappable.empty()) {
      result.decisions.push_back(AdmissionDecision::rejected(slice.id));
      continue;
    }
    int fewest = std::numeric_limits<int>::max();
    for (const auto& c : mappable) fewest = std::min(fewest, c.emb.link_usage());
    std::vector<std::size_t> best;
    for (std::size_t k = 0; k < mappable.size(); ++k) {
      if (mappable[k].emb.link_usage() == fewest) best.push_back(k);
    }
    std::size_t pick = best.front();
    if (best.size() > 1) {
      pick = best[std::uniform_int_distribution<std::size_t>(0, best.size() - 1)(rng)];
    }
    auto& winner = mappable[pick];
    apply_embedding(work, slice, winner.emb);
    result.decisions.push_back(
        AdmissionDecision::admitted(std::move(winner.config), std::move(winner.emb)));
  }
  summarize(result, gamma);
  return result;
}

}  // namespace flexslice::bfn
