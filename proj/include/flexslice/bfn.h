#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "flexslice/model.h"

namespace flexslice::bfn {

// Bottleneck-normalized free capacity of a node: min over axes of
// remaining / capacity. Larger means "more resources".
double capacity_score(const PhysicalNode& node);

// Greedy placement of one configuration. The first VNF goes to the feasible
// node with the best capacity score; each later VNF goes to the best-scoring
// feasible unused node among those at the smallest hop distance from the
// previous VNF's host, widening the ring only when nothing fits. Consecutive
// VNFs are joined by shortest paths. Ties go to the lower node index.
std::optional<Embedding> map_config(const PhysicalNetwork& net, const SliceRequest& slice,
                                    const SliceConfiguration& config);

// For each slice in order, maps every configuration on a scratch copy, keeps
// the mappable one with the fewest used physical links (best single-slice
// objective), breaks ties uniformly at random, and commits it.
ScenarioResult solve_all(const PhysicalNetwork& net, const std::vector<SliceRequest>& slices,
                         std::uint64_t seed, double gamma = 0.999);

}  // namespace flexslice::bfn
