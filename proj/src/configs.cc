#include "flexslice/configs.h"

#include <algorithm>

namespace flexslice {

ConfigEnumerator::ConfigEnumerator(const SliceRequest& slice) : slice_(slice) {
  check_slice(slice_);
  std::vector<bool> taken(slice_.size(), false);
  for (auto [vnf, pos] : slice_.fixed_positions) taken[pos - 1] = true;
  for (int p = 0; p < slice_.size(); ++p) {
    if (!taken[p]) free_positions_.push_back(p);
  }
  perm_ = slice_.flexible_vnfs();
}

std::optional<SliceConfiguration> ConfigEnumerator::next() {
  if (done_) return std::nullopt;
  SliceConfiguration config;
  config.slice_id = slice_.id;
  config.id = next_id_++;
  config.order.assign(slice_.size(), -1);
  for (auto [vnf, pos] : slice_.fixed_positions) config.order[pos - 1] = vnf;
  for (std::size_t k = 0; k < perm_.size(); ++k) config.order[free_positions_[k]] = perm_[k];
  done_ = !std::next_permutation(perm_.begin(), perm_.end());

  for (auto [v, w] : config.chain()) {
    if (!slice_.link_demand(v, w)) {
      throw SpecificationError("slice '" + slice_.id + "': configuration k" +
                               std::to_string(config.id) + " needs a demand for virtual link " +
                               slice_.vnfs[v].id + "->" + slice_.vnfs[w].id);
    }
  }
  return config;
}

std::vector<SliceConfiguration> enumerate_configs(const SliceRequest& slice) {
  ConfigEnumerator it(slice);
  std::vector<SliceConfiguration> out;
  while (auto c = it.next()) out.push_back(std::move(*c));
  return out;
}

std::vector<VirtualLink> virtual_links(const SliceRequest& slice,
                                       const SliceConfiguration& config) {
  std::vector<VirtualLink> out;
  for (auto [v, w] : config.chain()) {
    out.push_back({v, w, slice.link_demand(v, w).value()});
  }
  return out;
}

SliceRequest pin_to_configuration(const SliceRequest& slice, const SliceConfiguration& config) {
  SliceRequest pinned = slice;
  pinned.fixed_positions.clear();
  for (std::size_t p = 0; p < config.order.size(); ++p) {
    pinned.fixed_positions[config.order[p]] = static_cast<int>(p) + 1;
  }
  return pinned;
}

}  // namespace flexslice
