#pragma once

#include <optional>
#include <vector>

#include "flexslice/model.h"

namespace flexslice {

struct VirtualLink {
  int from = -1;
  int to = -1;
  double bandwidth = 0.0;
};

// Streams the admissible orders of a slice: pinned VNFs stay put, flexible
// VNFs are permuted over the free positions. Permutations follow the
// lexicographic order of the flexible VNFs' declaration indices, so the
// declared order is always configuration k1.
class ConfigEnumerator {
 public:
  // Throws SpecificationError if the slice is malformed.
  explicit ConfigEnumerator(const SliceRequest& slice);

  // Next configuration, or nullopt when exhausted. Throws SpecificationError
  // when a chain link of the produced order has no demand entry.
  std::optional<SliceConfiguration> next();

 private:
  const SliceRequest& slice_;
  std::vector<int> free_positions_;  // 0-based
  std::vector<int> perm_;            // flexible vnf indices, current permutation
  int next_id_ = 1;
  bool done_ = false;
};

// All |N_s^X|! configurations, eagerly.
std::vector<SliceConfiguration> enumerate_configs(const SliceRequest& slice);

// Chain links of config in position order, with demands from the slice.
std::vector<VirtualLink> virtual_links(const SliceRequest& slice,
                                       const SliceConfiguration& config);

// A copy of slice whose every VNF is pinned to its position in config.
SliceRequest pin_to_configuration(const SliceRequest& slice, const SliceConfiguration& config);

}  // namespace flexslice
