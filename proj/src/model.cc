#include "flexslice/model.h"

#include <algorithm>
#include <set>
#include <sstream>

namespace flexslice {

PhysicalNetwork::PhysicalNetwork(std::vector<std::string> axes)
    : axes_(std::move(axes)) {
  if (axes_.empty()) throw ParameterError("network needs at least one resource axis");
}

NodeIndex PhysicalNetwork::add_node(std::string id, std::vector<double> capacity) {
  if (capacity.size() != axes_.size()) {
    throw ParameterError("node '" + id + "' has " + std::to_string(capacity.size()) +
                         " capacity entries, expected " + std::to_string(axes_.size()));
  }
  for (double c : capacity) {
    if (c < 0.0) throw ParameterError("node '" + id + "' has negative capacity");
  }
  if (by_id_.contains(id)) throw ParameterError("duplicate node id '" + id + "'");
  NodeIndex idx = node_count();
  by_id_.emplace(id, idx);
  nodes_.push_back(PhysicalNode{std::move(id), capacity, capacity});
  out_.emplace_back();
  return idx;
}

LinkIndex PhysicalNetwork::add_link(NodeIndex src, NodeIndex dst, double bandwidth) {
  if (src < 0 || src >= node_count() || dst < 0 || dst >= node_count()) {
    throw ParameterError("link endpoint out of range");
  }
  if (src == dst) throw ParameterError("self-loop on node '" + nodes_[src].id + "'");
  if (bandwidth < 0.0) throw ParameterError("negative link bandwidth");
  if (by_ends_.contains({src, dst})) {
    throw ParameterError("duplicate link " + nodes_[src].id + "->" + nodes_[dst].id);
  }
  LinkIndex idx = link_count();
  links_.push_back(PhysicalLink{src, dst, bandwidth, bandwidth});
  out_[src].push_back(idx);
  by_ends_.emplace(std::make_pair(src, dst), idx);
  return idx;
}

LinkIndex PhysicalNetwork::add_connection(NodeIndex a, NodeIndex b, double bandwidth) {
  LinkIndex forward = add_link(a, b, bandwidth);
  add_link(b, a, bandwidth);
  return forward;
}

std::optional<NodeIndex> PhysicalNetwork::find_node(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<LinkIndex> PhysicalNetwork::find_link(NodeIndex src, NodeIndex dst) const {
  auto it = by_ends_.find({src, dst});
  if (it == by_ends_.end()) return std::nullopt;
  return it->second;
}

NodeIndex PhysicalNetwork::require_node(const std::string& id) const {
  auto idx = find_node(id);
  if (!idx) throw ParameterError("unknown node '" + id + "'");
  return *idx;
}

bool PhysicalNetwork::node_fits(NodeIndex i, std::span<const double> demand) const {
  const auto& rem = nodes_[i].remaining;
  for (std::size_t a = 0; a < rem.size(); ++a) {
    if (rem[a] + kCapacityTolerance < demand[a]) return false;
  }
  return true;
}

bool PhysicalNetwork::link_fits(LinkIndex l, double demand) const {
  return links_[l].remaining + kCapacityTolerance >= demand;
}

namespace {
double debited(double value, double amount) {
  double out = value - amount;
  return (out < 0.0 && out > -kCapacityTolerance) ? 0.0 : out;
}
}  // namespace

void PhysicalNetwork::debit_node(NodeIndex i, std::span<const double> demand,
                                 CapacityJournal* journal) {
  auto& rem = nodes_[i].remaining;
  for (std::size_t a = 0; a < rem.size(); ++a) {
    if (journal) journal->record({false, i, static_cast<int>(a), rem[a]});
    rem[a] = debited(rem[a], demand[a]);
  }
}

void PhysicalNetwork::debit_link(LinkIndex l, double demand, CapacityJournal* journal) {
  if (journal) journal->record({true, l, 0, links_[l].remaining});
  links_[l].remaining = debited(links_[l].remaining, demand);
}

void PhysicalNetwork::credit_node(NodeIndex i, std::span<const double> demand) {
  auto& node = nodes_[i];
  for (std::size_t a = 0; a < node.remaining.size(); ++a) {
    node.remaining[a] = std::min(node.capacity[a], node.remaining[a] + demand[a]);
  }
}

void PhysicalNetwork::credit_link(LinkIndex l, double demand) {
  auto& link = links_[l];
  link.remaining = std::min(link.capacity, link.remaining + demand);
}

void PhysicalNetwork::rollback(CapacityJournal& journal, std::size_t mark) {
  auto& entries = journal.entries();
  while (entries.size() > mark) {
    const auto& e = entries.back();
    if (e.is_link) {
      links_[e.index].remaining = e.previous;
    } else {
      nodes_[e.index].remaining[e.axis] = e.previous;
    }
    entries.pop_back();
  }
}

void PhysicalNetwork::set_node_remaining(NodeIndex i, std::vector<double> remaining) {
  auto& node = nodes_.at(i);
  if (remaining.size() != node.capacity.size()) {
    throw ParameterError("remaining vector has wrong axis count");
  }
  for (std::size_t a = 0; a < remaining.size(); ++a) {
    if (remaining[a] < 0.0 || remaining[a] > node.capacity[a]) {
      throw ParameterError("remaining capacity of '" + node.id + "' out of [0, capacity]");
    }
  }
  node.remaining = std::move(remaining);
}

void PhysicalNetwork::set_link_remaining(LinkIndex l, double remaining) {
  auto& link = links_.at(l);
  if (remaining < 0.0 || remaining > link.capacity) {
    throw ParameterError("remaining bandwidth out of [0, capacity]");
  }
  link.remaining = remaining;
}

void PhysicalNetwork::restore_full_capacity() {
  for (auto& n : nodes_) n.remaining = n.capacity;
  for (auto& l : links_) l.remaining = l.capacity;
}

bool operator==(const PhysicalNode& a, const PhysicalNode& b) {
  return a.id == b.id && a.capacity == b.capacity && a.remaining == b.remaining;
}

bool operator==(const PhysicalLink& a, const PhysicalLink& b) {
  return a.src == b.src && a.dst == b.dst && a.capacity == b.capacity &&
         a.remaining == b.remaining;
}

bool operator==(const PhysicalNetwork& a, const PhysicalNetwork& b) {
  return a.axes_ == b.axes_ && a.nodes_ == b.nodes_ && a.links_ == b.links_;
}

// ---------------------------------------------------------------------------

std::optional<int> SliceRequest::find_vnf(const std::string& vnf_id) const {
  for (int v = 0; v < size(); ++v) {
    if (vnfs[v].id == vnf_id) return v;
  }
  return std::nullopt;
}

std::optional<double> SliceRequest::link_demand(int from, int to) const {
  auto it = link_demands.find({from, to});
  if (it == link_demands.end()) return std::nullopt;
  return it->second;
}

std::vector<int> SliceRequest::flexible_vnfs() const {
  std::vector<int> out;
  for (int v = 0; v < size(); ++v) {
    if (!is_fixed(v)) out.push_back(v);
  }
  return out;
}

void check_slice(const SliceRequest& slice) {
  const std::string where = "slice '" + slice.id + "': ";
  if (slice.vnfs.empty()) throw SpecificationError(where + "no VNFs");
  std::set<std::string> ids;
  for (const auto& vnf : slice.vnfs) {
    if (!ids.insert(vnf.id).second) {
      throw SpecificationError(where + "duplicate VNF id '" + vnf.id + "'");
    }
    if (vnf.demand.empty()) throw SpecificationError(where + "VNF '" + vnf.id + "' has no demand");
    for (double d : vnf.demand) {
      if (!(d > 0.0)) {
        throw SpecificationError(where + "VNF '" + vnf.id + "' demand must be positive");
      }
    }
  }
  std::set<int> used;
  for (auto [vnf, pos] : slice.fixed_positions) {
    if (vnf < 0 || vnf >= slice.size()) throw SpecificationError(where + "fixed VNF index out of range");
    if (pos < 1 || pos > slice.size()) {
      throw SpecificationError(where + "VNF '" + slice.vnfs[vnf].id + "' pinned to position " +
                               std::to_string(pos) + " outside [1, " +
                               std::to_string(slice.size()) + "]");
    }
    if (!used.insert(pos).second) {
      throw SpecificationError(where + "two VNFs pinned to position " + std::to_string(pos));
    }
  }
  for (const auto& [pair, bw] : slice.link_demands) {
    auto [v, w] = pair;
    if (v < 0 || w < 0 || v >= slice.size() || w >= slice.size() || v == w) {
      throw SpecificationError(where + "link demand references an invalid VNF pair");
    }
    if (!(bw > 0.0)) throw SpecificationError(where + "link demands must be positive");
  }
}

void check_slice(const SliceRequest& slice, const PhysicalNetwork& net) {
  check_slice(slice);
  for (const auto& vnf : slice.vnfs) {
    if (vnf.demand.size() != net.axis_count()) {
      throw SpecificationError("slice '" + slice.id + "': VNF '" + vnf.id +
                               "' demand has wrong number of resource axes");
    }
  }
}

int SliceConfiguration::position_of(int vnf) const {
  for (std::size_t p = 0; p < order.size(); ++p) {
    if (order[p] == vnf) return static_cast<int>(p) + 1;
  }
  return 0;
}

std::vector<std::pair<int, int>> SliceConfiguration::chain() const {
  std::vector<std::pair<int, int>> out;
  for (std::size_t p = 1; p < order.size(); ++p) out.emplace_back(order[p - 1], order[p]);
  return out;
}

int Embedding::link_usage() const {
  int total = 0;
  for (const auto& path : link_paths) total += static_cast<int>(path.links.size());
  return total;
}

AdmissionDecision AdmissionDecision::rejected(std::string slice_id) {
  AdmissionDecision d;
  d.slice_id = std::move(slice_id);
  return d;
}

AdmissionDecision AdmissionDecision::admitted(SliceConfiguration config, Embedding emb) {
  AdmissionDecision d;
  d.slice_id = emb.slice_id;
  d.accepted = true;
  d.config = std::move(config);
  d.embedding = std::move(emb);
  return d;
}

int ScenarioResult::accepted_count() const {
  return static_cast<int>(std::count_if(decisions.begin(), decisions.end(),
                                        [](const auto& d) { return d.accepted; }));
}

void summarize(ScenarioResult& result, double gamma) {
  result.objective = objective_value(result.decisions, gamma);
  result.per_config_counts.clear();
  for (const auto& d : result.decisions) {
    if (d.accepted && d.config) ++result.per_config_counts[d.config->id];
  }
  if (result.decisions.empty()) {
    result.acceptance_rate.reset();
  } else {
    result.acceptance_rate = static_cast<double>(result.accepted_count()) /
                             static_cast<double>(result.decisions.size());
  }
}

int total_link_usage(std::span<const AdmissionDecision> decisions) {
  int h = 0;
  for (const auto& d : decisions) {
    if (d.accepted && d.embedding) h += d.embedding->link_usage();
  }
  return h;
}

double objective_value(std::span<const AdmissionDecision> decisions, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw ParameterError("gamma must lie in [0, 1]");
  }
  int accepted = 0;
  for (const auto& d : decisions) accepted += d.accepted ? 1 : 0;
  return gamma * accepted - (1.0 - gamma) * total_link_usage(decisions);
}

// ---------------------------------------------------------------------------

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kNodeCapacity: return "node-capacity";
    case ViolationKind::kLinkCapacity: return "link-capacity";
    case ViolationKind::kDuplicateHost: return "mapped-once";
    case ViolationKind::kIncompleteMapping: return "accepted-served";
    case ViolationKind::kBrokenPath: return "flow-conservation";
    case ViolationKind::kChainStructure: return "chain-structure";
    case ViolationKind::kFixedPosition: return "fixed-position";
    case ViolationKind::kDecisionShape: return "decision-shape";
  }
  return "unknown";
}

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

std::vector<Violation> check_configuration(const SliceRequest& slice,
                                           const SliceConfiguration& config) {
  std::vector<Violation> out;
  auto add = [&](ViolationKind k, std::string detail) {
    out.push_back({k, slice.id, std::move(detail)});
  };
  const int n = slice.size();
  if (static_cast<int>(config.order.size()) != n) {
    add(ViolationKind::kChainStructure, "configuration has " +
                                            std::to_string(config.order.size()) +
                                            " positions for " + std::to_string(n) + " VNFs");
    return out;
  }
  std::vector<int> seen(n, 0);
  for (int v : config.order) {
    if (v < 0 || v >= n || seen[v]++) {
      add(ViolationKind::kChainStructure, "configuration order is not a permutation");
      return out;
    }
  }
  for (auto [vnf, pos] : slice.fixed_positions) {
    if (config.order[pos - 1] != vnf) {
      add(ViolationKind::kFixedPosition, "VNF '" + slice.vnfs[vnf].id + "' must sit at position " +
                                             std::to_string(pos));
    }
  }
  for (auto [v, w] : config.chain()) {
    if (!slice.link_demand(v, w)) {
      add(ViolationKind::kChainStructure, "no demand for virtual link " + slice.vnfs[v].id +
                                              "->" + slice.vnfs[w].id);
    }
  }
  return out;
}

ValidationReport validate_embedding(const PhysicalNetwork& net,
                                    std::span<const SliceDecision> entries) {
  ValidationReport report;
  auto add = [&](ViolationKind k, const std::string& slice, std::string detail) {
    report.violations.push_back({k, slice, std::move(detail)});
  };
  const std::size_t axes = net.axis_count();
  std::vector<std::vector<double>> node_load(net.node_count(), std::vector<double>(axes, 0.0));
  std::vector<double> link_load(net.link_count(), 0.0);

  for (const auto& [slice_ptr, decision_ptr] : entries) {
    const SliceRequest& slice = *slice_ptr;
    const AdmissionDecision& d = *decision_ptr;
    if (d.accepted != d.embedding.has_value() || (d.accepted && !d.config)) {
      add(ViolationKind::kDecisionShape, slice.id, "accepted flag and embedding disagree");
      continue;
    }
    if (!d.accepted) continue;
    const SliceConfiguration& config = *d.config;
    const Embedding& emb = *d.embedding;

    for (auto& v : check_configuration(slice, config)) report.violations.push_back(std::move(v));

    const int n = slice.size();
    bool nodes_ok = true;
    if (static_cast<int>(emb.node_map.size()) != n) {
      add(ViolationKind::kIncompleteMapping, slice.id, "node map covers " +
                                                           std::to_string(emb.node_map.size()) +
                                                           " of " + std::to_string(n) + " VNFs");
      nodes_ok = false;
    } else {
      std::map<NodeIndex, int> host_of;
      for (int v = 0; v < n; ++v) {
        NodeIndex i = emb.node_map[v];
        if (i < 0 || i >= net.node_count()) {
          add(ViolationKind::kIncompleteMapping, slice.id,
              "VNF '" + slice.vnfs[v].id + "' is not mapped to a physical node");
          nodes_ok = false;
          continue;
        }
        auto [it, fresh] = host_of.emplace(i, v);
        if (!fresh) {
          add(ViolationKind::kDuplicateHost, slice.id,
              "VNFs '" + slice.vnfs[it->second].id + "' and '" + slice.vnfs[v].id +
                  "' share node '" + net.node(i).id + "'");
        }
        for (std::size_t a = 0; a < axes && a < slice.vnfs[v].demand.size(); ++a) {
          node_load[i][a] += slice.vnfs[v].demand[a];
        }
      }
    }

    auto chain = config.order.size() == static_cast<std::size_t>(n)
                     ? config.chain()
                     : std::vector<std::pair<int, int>>{};
    if (emb.link_paths.size() != chain.size()) {
      add(ViolationKind::kChainStructure, slice.id,
          "embedding maps " + std::to_string(emb.link_paths.size()) + " virtual links, chain has " +
              std::to_string(chain.size()));
    }
    for (std::size_t k = 0; k < emb.link_paths.size(); ++k) {
      const auto& vp = emb.link_paths[k];
      if (k < chain.size() && (vp.from_vnf != chain[k].first || vp.to_vnf != chain[k].second)) {
        add(ViolationKind::kChainStructure, slice.id,
            "virtual link " + std::to_string(k) + " does not follow the configuration");
      }
      auto demand = slice.link_demand(vp.from_vnf, vp.to_vnf);
      bool ends_ok = nodes_ok && vp.from_vnf >= 0 && vp.from_vnf < n && vp.to_vnf >= 0 &&
                     vp.to_vnf < n;
      NodeIndex at = ends_ok ? emb.node_map[vp.from_vnf] : -1;
      bool walk_ok = ends_ok;
      for (LinkIndex l : vp.links) {
        if (l < 0 || l >= net.link_count()) {
          walk_ok = false;
          break;
        }
        if (demand) link_load[l] += *demand;
        if (walk_ok && net.link(l).src != at) walk_ok = false;
        at = net.link(l).dst;
      }
      if (ends_ok && walk_ok && at != emb.node_map[vp.to_vnf]) walk_ok = false;
      if (ends_ok && vp.links.empty()) walk_ok = false;
      if (!walk_ok) {
        add(ViolationKind::kBrokenPath, slice.id,
            "path of virtual link " + std::to_string(k) + " does not join its endpoints");
      }
    }
  }

  for (NodeIndex i = 0; i < net.node_count(); ++i) {
    for (std::size_t a = 0; a < axes; ++a) {
      if (node_load[i][a] > net.node(i).remaining[a] + kCapacityTolerance) {
        std::ostringstream os;
        os << "node '" << net.node(i).id << "' " << net.axes()[a] << " demand " << node_load[i][a]
           << " exceeds " << net.node(i).remaining[a];
        add(ViolationKind::kNodeCapacity, "", os.str());
      }
    }
  }
  for (LinkIndex l = 0; l < net.link_count(); ++l) {
    if (link_load[l] > net.link(l).remaining + kCapacityTolerance) {
      const auto& link = net.link(l);
      std::ostringstream os;
      os << "link " << net.node(link.src).id << "->" << net.node(link.dst).id << " demand "
         << link_load[l] << " exceeds " << link.remaining;
      add(ViolationKind::kLinkCapacity, "", os.str());
    }
  }
  return report;
}

ValidationReport validate_embedding(const PhysicalNetwork& net,
                                    std::span<const SliceRequest> slices,
                                    std::span<const AdmissionDecision> decisions) {
  if (slices.size() != decisions.size()) {
    throw ParameterError("validate_embedding: slice and decision counts differ");
  }
  std::vector<SliceDecision> entries;
  entries.reserve(slices.size());
  for (std::size_t k = 0; k < slices.size(); ++k) entries.push_back({&slices[k], &decisions[k]});
  return validate_embedding(net, entries);
}

void apply_embedding(PhysicalNetwork& net, const SliceRequest& slice, const Embedding& emb) {
  if (static_cast<int>(emb.node_map.size()) != slice.size()) {
    throw CommitError("slice '" + slice.id + "': embedding does not map every VNF");
  }
  CapacityJournal journal;
  auto fail = [&](const std::string& what) {
    net.rollback(journal, 0);
    throw CommitError("slice '" + slice.id + "': " + what);
  };
  for (int v = 0; v < slice.size(); ++v) {
    NodeIndex i = emb.node_map[v];
    if (i < 0 || i >= net.node_count()) fail("VNF mapped outside the network");
    if (!net.node_fits(i, slice.vnfs[v].demand)) {
      fail("node '" + net.node(i).id + "' lacks capacity for VNF '" + slice.vnfs[v].id + "'");
    }
    net.debit_node(i, slice.vnfs[v].demand, &journal);
  }
  for (const auto& vp : emb.link_paths) {
    auto demand = slice.link_demand(vp.from_vnf, vp.to_vnf);
    if (!demand) fail("virtual link without a demand entry");
    for (LinkIndex l : vp.links) {
      if (l < 0 || l >= net.link_count()) fail("path references an unknown link");
      if (!net.link_fits(l, *demand)) {
        const auto& link = net.link(l);
        fail("link " + net.node(link.src).id + "->" + net.node(link.dst).id +
             " lacks bandwidth");
      }
      net.debit_link(l, *demand, &journal);
    }
  }
}

void release_embedding(PhysicalNetwork& net, const SliceRequest& slice, const Embedding& emb) {
  for (int v = 0; v < slice.size() && v < static_cast<int>(emb.node_map.size()); ++v) {
    net.credit_node(emb.node_map[v], slice.vnfs[v].demand);
  }
  for (const auto& vp : emb.link_paths) {
    auto demand = slice.link_demand(vp.from_vnf, vp.to_vnf);
    if (!demand) continue;
    for (LinkIndex l : vp.links) net.credit_link(l, *demand);
  }
}

}  // namespace flexslice
