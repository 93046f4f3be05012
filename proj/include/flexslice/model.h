#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flexslice/errors.h"

namespace flexslice {

using NodeIndex = int;
using LinkIndex = int;

// Slack used for every capacity comparison. Demands and capacities are
// decimal quantities (vCPU, GB, Gbps), so repeated debits can leave residues
// in the last few bits.
inline constexpr double kCapacityTolerance = 1e-9;

struct PhysicalNode {
  std::string id;
  std::vector<double> capacity;   // A_i, one entry per resource axis
  std::vector<double> remaining;  // a_i
};

// Directed link src -> dst.
struct PhysicalLink {
  NodeIndex src = -1;
  NodeIndex dst = -1;
  double capacity = 0.0;   // A_ij
  double remaining = 0.0;  // a_ij
};

// Records previous capacity values so a sequence of debits can be rolled back
// bit-exactly.
class CapacityJournal {
 public:
  struct Entry {
    bool is_link;
    int index;
    int axis;
    double previous;
  };

  std::size_t mark() const { return entries_.size(); }
  void record(const Entry& e) { entries_.push_back(e); }
  std::vector<Entry>& entries() { return entries_; }

 private:
  std::vector<Entry> entries_;
};

// Capacitated directed graph. Nodes carry a vector of named resource axes
// (the bundled scenarios use compute and storage); links carry bandwidth.
// Undirected connections are stored as two directed links.
class PhysicalNetwork {
 public:
  explicit PhysicalNetwork(std::vector<std::string> axes = {"compute"});

  NodeIndex add_node(std::string id, std::vector<double> capacity);
  LinkIndex add_link(NodeIndex src, NodeIndex dst, double bandwidth);
  // Adds a->b and b->a with equal capacity; returns the a->b index.
  LinkIndex add_connection(NodeIndex a, NodeIndex b, double bandwidth);

  const std::vector<std::string>& axes() const { return axes_; }
  std::size_t axis_count() const { return axes_.size(); }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  int link_count() const { return static_cast<int>(links_.size()); }
  const std::vector<PhysicalNode>& nodes() const { return nodes_; }
  const std::vector<PhysicalLink>& links() const { return links_; }
  const PhysicalNode& node(NodeIndex i) const { return nodes_.at(i); }
  const PhysicalLink& link(LinkIndex l) const { return links_.at(l); }
  // Outgoing links of a node in ascending link index.
  const std::vector<LinkIndex>& out_links(NodeIndex i) const { return out_.at(i); }

  std::optional<NodeIndex> find_node(const std::string& id) const;
  std::optional<LinkIndex> find_link(NodeIndex src, NodeIndex dst) const;
  NodeIndex require_node(const std::string& id) const;

  bool node_fits(NodeIndex i, std::span<const double> demand) const;
  bool link_fits(LinkIndex l, double demand) const;

  // Unchecked debits/credits; the journal, when given, records old values.
  void debit_node(NodeIndex i, std::span<const double> demand,
                  CapacityJournal* journal = nullptr);
  void debit_link(LinkIndex l, double demand, CapacityJournal* journal = nullptr);
  void credit_node(NodeIndex i, std::span<const double> demand);
  void credit_link(LinkIndex l, double demand);
  void rollback(CapacityJournal& journal, std::size_t mark);

  void set_node_remaining(NodeIndex i, std::vector<double> remaining);
  void set_link_remaining(LinkIndex l, double remaining);
  // Resets every remaining capacity to the full capacity.
  void restore_full_capacity();

  friend bool operator==(const PhysicalNetwork& a, const PhysicalNetwork& b);

 private:
  std::vector<std::string> axes_;
  std::vector<PhysicalNode> nodes_;
  std::vector<PhysicalLink> links_;
  std::vector<std::vector<LinkIndex>> out_;
  std::map<std::string, NodeIndex> by_id_;
  std::map<std::pair<NodeIndex, NodeIndex>, LinkIndex> by_ends_;
};

bool operator==(const PhysicalNode& a, const PhysicalNode& b);
bool operator==(const PhysicalLink& a, const PhysicalLink& b);

struct Vnf {
  std::string id;
  std::vector<double> demand;  // R_v, one entry per resource axis
};

// A linear-chain slice request. Positions are 1-based.
struct SliceRequest {
  std::string id;
  std::vector<Vnf> vnfs;
  std::map<int, int> fixed_positions;  // vnf index -> position
  std::map<std::pair<int, int>, double> link_demands;  // (v, w) -> R_vw

  int size() const { return static_cast<int>(vnfs.size()); }
  std::optional<int> find_vnf(const std::string& vnf_id) const;
  std::optional<double> link_demand(int from, int to) const;
  // VNFs without a fixed position, in declaration order.
  std::vector<int> flexible_vnfs() const;
  bool is_fixed(int vnf) const { return fixed_positions.contains(vnf); }
};

// Throws SpecificationError when fixed positions collide or fall outside
// [1, |N_s|], or when a demand is not strictly positive.
void check_slice(const SliceRequest& slice);
// As check_slice, plus demand vectors must match the network's axis count.
void check_slice(const SliceRequest& slice, const PhysicalNetwork& net);

// One admissible VNF order. order[p] is the VNF index at position p + 1.
struct SliceConfiguration {
  std::string slice_id;
  int id = 1;  // 1-based index in enumeration order (k1, k2, ...)
  std::vector<int> order;

  int position_of(int vnf) const;  // 1-based, 0 when absent
  // Virtual links (v, w) with position(w) = position(v) + 1, in chain order.
  std::vector<std::pair<int, int>> chain() const;

  friend bool operator==(const SliceConfiguration&, const SliceConfiguration&) = default;
};

struct VirtualLinkPath {
  int from_vnf = -1;
  int to_vnf = -1;
  std::vector<LinkIndex> links;

  friend bool operator==(const VirtualLinkPath&, const VirtualLinkPath&) = default;
};

struct Embedding {
  std::string slice_id;
  int config_id = 1;
  std::vector<NodeIndex> node_map;  // indexed by vnf index; x_i^{v,s}
  std::vector<VirtualLinkPath> link_paths;  // chain order; x_ij^{vw,s}

  // Number of (virtual link, physical link) usage pairs.
  int link_usage() const;

  friend bool operator==(const Embedding&, const Embedding&) = default;
};

struct AdmissionDecision {
  std::string slice_id;
  bool accepted = false;
  std::optional<SliceConfiguration> config;
  std::optional<Embedding> embedding;

  std::optional<int> config_id() const {
    return config ? std::optional<int>(config->id) : std::nullopt;
  }
  static AdmissionDecision rejected(std::string slice_id);
  static AdmissionDecision admitted(SliceConfiguration config, Embedding emb);

  friend bool operator==(const AdmissionDecision&, const AdmissionDecision&) = default;
};

struct ScenarioResult {
  std::vector<AdmissionDecision> decisions;
  std::optional<double> acceptance_rate;  // absent when there are no slices
  double objective = 0.0;
  std::map<int, int> per_config_counts;   // config id -> accepted slices
  double wall_time_s = 0.0;

  int accepted_count() const;
};

// Fills acceptance_rate, objective and per_config_counts from decisions.
void summarize(ScenarioResult& result, double gamma);

// gamma * N(pi) - (1 - gamma) * H(x).
double objective_value(std::span<const AdmissionDecision> decisions, double gamma);
// H(x): usage pairs summed over accepted decisions, with multiplicity.
int total_link_usage(std::span<const AdmissionDecision> decisions);

enum class ViolationKind {
  kNodeCapacity,       // per-node demand exceeds remaining capacity
  kLinkCapacity,       // per-link demand exceeds remaining bandwidth
  kDuplicateHost,      // two VNFs of one slice share a node
  kIncompleteMapping,  // some VNF has no host
  kBrokenPath,         // a link path does not join its endpoints
  kChainStructure,     // order is not a bijection or chain/paths disagree
  kFixedPosition,      // a pinned VNF is out of place
  kDecisionShape,      // accepted flag and embedding presence disagree
};

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string slice_id;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
};

struct SliceDecision {
  const SliceRequest* slice;
  const AdmissionDecision* decision;
};

// Checks every accepted slice jointly against net's remaining capacities.
// Reports all violations; never throws for constraint failures.
ValidationReport validate_embedding(const PhysicalNetwork& net,
                                    std::span<const SliceDecision> entries);
ValidationReport validate_embedding(const PhysicalNetwork& net,
                                    std::span<const SliceRequest> slices,
                                    std::span<const AdmissionDecision> decisions);

// Structural checks of one configuration against its slice.
std::vector<Violation> check_configuration(const SliceRequest& slice,
                                           const SliceConfiguration& config);

// Debits the embedding's demands. Throws CommitError and leaves net untouched
// if any remaining capacity would go negative or the embedding is malformed.
void apply_embedding(PhysicalNetwork& net, const SliceRequest& slice,
                     const Embedding& emb);
// Credits back what apply_embedding debited.
void release_embedding(PhysicalNetwork& net, const SliceRequest& slice,
                       const Embedding& emb);

}  // namespace flexslice
