#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "flexslice/model.h"

namespace flexslice::bnb {

struct CostWeights {
  double rho1 = 0.5;  // node usage
  double rho2 = 0.5;  // link usage
};

// g: normalized resources consumed by a (partial) embedding. Denominators are
// the remaining capacities of `arrival`, the network as it stood before the
// slice was placed. Node terms average R_v/a_i over resource axes.
// Throws SpecificationError on a zero denominator.
double actual_cost(const PhysicalNetwork& arrival, const SliceRequest& slice,
                   const Embedding& partial, CostWeights weights);

// h: rho1 * sigma(remaining node capacity) / sum(node capacity)
//  + rho2 * sigma(remaining link bandwidth) / sum(link bandwidth),
// with population standard deviations; node terms average over axes.
double estimated_cost(const PhysicalNetwork& net, CostWeights weights);

struct BnbOptions {
  std::optional<int> beta;  // complete solutions per configuration; nullopt = unlimited
  CostWeights weights;
  bool use_estimate = true;  // false forces h = 0
};

struct SliceSolution {
  SliceConfiguration config;
  Embedding embedding;
  double cost = 0.0;  // g + h of the complete solution
};

struct BnbStats {
  std::int64_t expanded = 0;    // search nodes whose children were generated
  std::int64_t pruned = 0;      // children cut by the incumbent bound
  std::int64_t solutions = 0;   // complete solutions that became incumbents
};

// Depth-first branch-and-bound over VNF -> node assignments, one search per
// configuration, keeping the cheapest complete solution overall. Returns
// nullopt if no configuration can be embedded.
std::optional<SliceSolution> solve_slice(const PhysicalNetwork& net, const SliceRequest& slice,
                                         const BnbOptions& options, BnbStats* stats = nullptr);

// Embeds slices in order, committing each accepted slice before the next.
ScenarioResult solve_all(const PhysicalNetwork& net, const std::vector<SliceRequest>& slices,
                         const BnbOptions& options, double gamma = 0.999);

}  // namespace flexslice::bnb
