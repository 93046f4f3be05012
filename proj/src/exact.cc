#include "flexslice/exact.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "flexslice/configs.h"
#include "flexslice/pathing.h"

namespace flexslice {

namespace {

constexpr double kImprovement = 1e-12;

// Simple src -> dst paths of at most `bound` hops, shortest first and
// lexicographic by link index within a length. Depth-first search over
// ascending adjacency emits them lexicographically; the stable sort keeps
// that order inside each length.
std::vector<Path> simple_paths(const PhysicalNetwork& net, NodeIndex src, NodeIndex dst,
                               int bound) {
  std::vector<Path> out;
  if (src == dst) return out;
  std::vector<char> on_path(net.node_count(), 0);
  Path path;
  auto dfs = [&](auto&& self, NodeIndex u) -> void {
    if (u == dst) {
      out.push_back(path);
      return;
    }
    if (static_cast<int>(path.size()) >= bound) return;
    on_path[u] = 1;
    for (LinkIndex l : net.out_links(u)) {
      NodeIndex v = net.link(l).dst;
      if (on_path[v]) continue;
      path.push_back(l);
      self(self, v);
      path.pop_back();
    }
    on_path[u] = 0;
  };
  dfs(dfs, src);
  std::stable_sort(out.begin(), out.end(),
                   [](const Path& a, const Path& b) { return a.size() < b.size(); });
  return out;
}

struct SliceData {
  const SliceRequest* slice = nullptr;
  std::vector<SliceConfiguration> configs;
  std::vector<std::vector<double>> chain_bw;  // per config, demand entering position p
  double optimistic = 0.0;                    // upper bound on the slice's contribution
};

// One virtual link of an accepted slice awaiting a route.
struct PendingLink {
  std::size_t slice;
  int position;  // chain position of the link's head
  NodeIndex src, dst;
  double bw;
  int lower;     // hop distance on the unloaded network
};

// Two phases. Admission, configuration and node placement are decided for
// every slice first, bounded by hop distances; only complete node placements
// are routed, jointly, over simple paths. Routing cannot relieve node
// capacity, so infeasible placements die before any path is enumerated.
class JointSearch {
 public:
  JointSearch(const PhysicalNetwork& net, const std::vector<SliceRequest>& slices, double gamma,
              int hop_bound, bool refine_bounds)
      : work_(net), gamma_(gamma), hop_bound_(hop_bound),
        paths_cache_(static_cast<std::size_t>(net.node_count()) * net.node_count()),
        paths_ready_(paths_cache_.size(), 0) {
    for (const auto& slice : slices) {
      SliceData d;
      d.slice = &slice;
      d.configs = enumerate_configs(slice);
      for (const auto& c : d.configs) {
        std::vector<double> bw(slice.size(), 0.0);
        for (int p = 1; p < slice.size(); ++p) {
          bw[p] = *slice.link_demand(c.order[p - 1], c.order[p]);
          distances(bw[p]);
        }
        d.chain_bw.push_back(std::move(bw));
      }
      d.optimistic = std::max(0.0, gamma_ - (1.0 - gamma_) * (slice.size() - 1));
      if (refine_bounds) {
        // Capacities only shrink as other slices commit, so the slice's best
        // standalone contribution bounds what it can add jointly.
        const std::vector<SliceRequest> single{slice};
        JointSearch alone(net, single, 1.0 - 1e-6, hop_bound, false);
        auto r = alone.run();
        d.optimistic = 0.0;
        if (r.decisions[0].accepted) {
          int h = r.decisions[0].embedding->link_usage();
          d.optimistic = std::max(0.0, gamma_ - (1.0 - gamma_) * h);
        }
      }
      data_.push_back(std::move(d));
    }
    suffix_.assign(data_.size() + 1, 0.0);
    for (std::size_t s = data_.size(); s-- > 0;) suffix_[s] = suffix_[s + 1] + data_[s].optimistic;
    config_.assign(data_.size(), -1);
    placed_.resize(data_.size());
    used_.assign(data_.size(), std::vector<char>(net.node_count(), 0));
  }

  ExactResult run() {
    slice_step(0, 0, 0);
    ExactResult r;
    if (!have_best_) {
      for (const auto& d : data_) r.decisions.push_back(AdmissionDecision::rejected(d.slice->id));
    } else {
      r.decisions = std::move(best_decisions_);
    }
    r.objective = objective_value(r.decisions, gamma_);
    r.visited = visited_;
    return r;
  }

 private:
  double value(int accepted, int links) const {
    return gamma_ * accepted - (1.0 - gamma_) * links;
  }
  bool hopeless(double bound) const { return have_best_ && bound <= best_ + kImprovement; }

  // All-pairs hop distances over links that carry `bw` when unloaded; -1 when
  // unreachable within the hop bound.
  const std::vector<int>& distances(double bw) {
    auto it = dist_.find(bw);
    if (it != dist_.end()) return it->second;
    const int n = work_.node_count();
    std::vector<int> table(static_cast<std::size_t>(n) * n, -1);
    for (NodeIndex a = 0; a < n; ++a) {
      auto hops = hop_distances(work_, a, bw);
      for (NodeIndex b = 0; b < n; ++b) {
        if (hops[b] >= 0 && hops[b] <= hop_bound_) table[static_cast<std::size_t>(a) * n + b] = hops[b];
      }
    }
    return dist_.emplace(bw, std::move(table)).first->second;
  }

  int lower(double bw, NodeIndex a, NodeIndex b) {
    return distances(bw)[static_cast<std::size_t>(a) * work_.node_count() + b];
  }

  const std::vector<Path>& paths(NodeIndex a, NodeIndex b) {
    const std::size_t key = static_cast<std::size_t>(a) * work_.node_count() + b;
    if (!paths_ready_[key]) {
      paths_cache_[key] = simple_paths(work_, a, b, hop_bound_);
      paths_ready_[key] = 1;
    }
    return paths_cache_[key];
  }

  void slice_step(std::size_t s, int accepted, int links) {
    ++visited_;
    if (s == data_.size()) {
      start_routing(accepted);
      return;
    }
    if (hopeless(value(accepted, links) + suffix_[s])) return;
    const SliceData& d = data_[s];
    placed_[s].assign(d.slice->size(), -1);
    for (std::size_t k = 0; k < d.configs.size(); ++k) {
      config_[s] = static_cast<int>(k);
      place(s, k, 0, accepted, links);
    }
    config_[s] = -1;
    slice_step(s + 1, accepted, links);
  }

  void place(std::size_t s, std::size_t k, int p, int accepted, int links) {
    ++visited_;
    const SliceData& d = data_[s];
    const int n = d.slice->size();
    if (p == n) {
      slice_step(s + 1, accepted + 1, links);
      return;
    }
    // `extra` hops for the link entering p; every later link costs at least one.
    auto bound = [&](int extra) {
      return value(accepted + 1, links + extra + (n - 1 - p)) + suffix_[s + 1];
    };
    if (hopeless(bound(p == 0 ? 0 : 1))) return;

    const int vnf = d.configs[k].order[p];
    const auto& demand = d.slice->vnfs[vnf].demand;
    for (NodeIndex i = 0; i < work_.node_count(); ++i) {
      if (used_[s][i] || !work_.node_fits(i, demand)) continue;
      int extra = 0;
      if (p > 0) {
        extra = lower(d.chain_bw[k][p], placed_[s][p - 1], i);
        if (extra < 0 || hopeless(bound(extra))) continue;
      }
      const std::size_t mark = journal_.mark();
      work_.debit_node(i, demand, &journal_);
      used_[s][i] = 1;
      placed_[s][p] = i;
      place(s, k, p + 1, accepted, links + extra);
      placed_[s][p] = -1;
      used_[s][i] = 0;
      work_.rollback(journal_, mark);
    }
  }

  void start_routing(int accepted) {
    pending_.clear();
    for (std::size_t s = 0; s < data_.size(); ++s) {
      if (config_[s] < 0) continue;
      const SliceData& d = data_[s];
      for (int p = 1; p < d.slice->size(); ++p) {
        const double bw = d.chain_bw[config_[s]][p];
        const NodeIndex a = placed_[s][p - 1], b = placed_[s][p];
        pending_.push_back(PendingLink{s, p, a, b, bw, lower(bw, a, b)});
      }
    }
    remaining_lower_.assign(pending_.size() + 1, 0);
    for (std::size_t j = pending_.size(); j-- > 0;) {
      remaining_lower_[j] = remaining_lower_[j + 1] + pending_[j].lower;
    }
    routes_.assign(pending_.size(), nullptr);
    route(0, accepted, 0);
  }

  void route(std::size_t j, int accepted, int links) {
    ++visited_;
    if (hopeless(value(accepted, links + remaining_lower_[j]))) return;
    if (j == pending_.size()) {
      have_best_ = true;
      best_ = value(accepted, links);
      record();
      return;
    }
    const PendingLink& link = pending_[j];
    for (const Path& path : paths(link.src, link.dst)) {
      const int len = static_cast<int>(path.size());
      // Paths are sorted by length.
      if (hopeless(value(accepted, links + len + remaining_lower_[j + 1]))) break;
      bool fits = true;
      for (LinkIndex l : path) {
        if (!work_.link_fits(l, link.bw)) {
          fits = false;
          break;
        }
      }
      if (!fits) continue;
      const std::size_t mark = journal_.mark();
      for (LinkIndex l : path) work_.debit_link(l, link.bw, &journal_);
      routes_[j] = &path;
      route(j + 1, accepted, links + len);
      work_.rollback(journal_, mark);
    }
  }

  void record() {
    best_decisions_.clear();
    std::size_t j = 0;
    for (std::size_t s = 0; s < data_.size(); ++s) {
      const SliceData& d = data_[s];
      if (config_[s] < 0) {
        best_decisions_.push_back(AdmissionDecision::rejected(d.slice->id));
        continue;
      }
      const SliceConfiguration& config = d.configs[config_[s]];
      const int n = d.slice->size();
      Embedding emb;
      emb.slice_id = d.slice->id;
      emb.config_id = config.id;
      emb.node_map.assign(n, -1);
      for (int q = 0; q < n; ++q) emb.node_map[config.order[q]] = placed_[s][q];
      for (int q = 1; q < n; ++q, ++j) {
        emb.link_paths.push_back(VirtualLinkPath{config.order[q - 1], config.order[q], *routes_[j]});
      }
      best_decisions_.push_back(AdmissionDecision::admitted(config, std::move(emb)));
    }
  }

  PhysicalNetwork work_;
  double gamma_;
  int hop_bound_;
  std::vector<SliceData> data_;
  std::vector<double> suffix_;
  std::map<double, std::vector<int>> dist_;
  std::vector<std::vector<Path>> paths_cache_;
  std::vector<char> paths_ready_;
  std::vector<std::vector<char>> used_;  // per slice: nodes hosting one of its VNFs
  CapacityJournal journal_;

  std::vector<int> config_;  // per slice: index into configs, -1 = rejected
  std::vector<std::vector<NodeIndex>> placed_;
  std::vector<PendingLink> pending_;
  std::vector<int> remaining_lower_;
  std::vector<const Path*> routes_;

  bool have_best_ = false;
  double best_ = 0.0;
  std::vector<AdmissionDecision> best_decisions_;
  std::int64_t visited_ = 0;
};

}  // namespace

ExactResult brute_force(const PhysicalNetwork& net, const std::vector<SliceRequest>& slices,
                        double gamma, const ExactLimits& limits) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ParameterError("gamma must lie in [0, 1]");
  double log_space = 0.0;
  for (const auto& slice : slices) {
    check_slice(slice, net);
    log_space += slice.size() * std::log10(std::max(1, net.node_count()));
  }
  const double log_limit = std::log10(limits.max_placements);
  if (log_space > log_limit + 1e-12) {
    std::ostringstream os;
    os.precision(3);
    os << "brute force: placement space 10^" << log_space << " exceeds the guard of "
       << limits.max_placements << " by a factor of 10^" << (log_space - log_limit);
    throw SizeError(os.str());
  }
  int hop_bound = limits.hop_bound.value_or(net.node_count() - 1);
  if (hop_bound < 1) hop_bound = 1;
  return JointSearch(net, slices, gamma, hop_bound, true).run();
}

}  // namespace flexslice
