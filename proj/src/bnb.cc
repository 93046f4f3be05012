#include "flexslice/bnb.h"

#include <cmath>
#include <limits>

#include "flexslice/configs.h"
#include "flexslice/pathing.h"

namespace flexslice::bnb {

namespace {

constexpr double kCostTolerance = 1e-9;

double population_stddev(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  long double mean = 0.0L;
  for (double x : values) mean += x;
  mean /= static_cast<long double>(values.size());
  long double acc = 0.0L;
  for (double x : values) acc += (x - mean) * (x - mean);
  return static_cast<double>(std::sqrt(acc / static_cast<long double>(values.size())));
}

// Running sum and sum of squares of a multiset of capacities.
struct Moments {
  long double sum = 0.0L;
  long double sumsq = 0.0L;

  void replace(double before, double after) {
    sum += static_cast<long double>(after) - before;
    sumsq += static_cast<long double>(after) * after - static_cast<long double>(before) * before;
  }
  long double stddev(long double count) const {
    if (count <= 0) return 0.0L;
    long double mean = sum / count;
    long double var = sumsq / count - mean * mean;
    return var > 0.0L ? std::sqrt(var) : 0.0L;
  }
};

class SliceSearch {
 public:
  SliceSearch(const PhysicalNetwork& net, const SliceRequest& slice, const BnbOptions& options,
              BnbStats* stats)
      : work_(net), arrival_(net), slice_(slice), options_(options), stats_(stats) {
    const int axes = static_cast<int>(net.axis_count());
    node_total_.assign(axes, 0.0L);
    node_moments_.assign(axes, Moments{});
    for (const auto& node : net.nodes()) {
      for (int a = 0; a < axes; ++a) {
        node_total_[a] += node.capacity[a];
        node_moments_[a].replace(0.0, node.remaining[a]);
      }
    }
    for (const auto& link : net.links()) {
      link_total_ += link.capacity;
      link_moments_.replace(0.0, link.remaining);
    }
    used_.assign(net.node_count(), 0);
  }

  std::optional<SliceSolution> run() {
    ConfigEnumerator configs(slice_);
    while (auto config = configs.next()) {
      config_ = &*config;
      found_in_config_ = 0;
      stop_config_ = false;
      const int n = slice_.size();
      chain_bw_.assign(n, 0.0);
      for (int p = 1; p < n; ++p) {
        chain_bw_[p] = *slice_.link_demand(config->order[p - 1], config->order[p]);
      }
      placed_.assign(n, -1);
      paths_.assign(n, Path{});
      g_ = 0.0;
      descend(0);
    }
    return std::move(best_);
  }

 private:
  double estimate() const {
    if (!options_.use_estimate) return 0.0;
    const auto& w = options_.weights;
    double node_term = 0.0;
    const long double nodes = work_.node_count();
    for (std::size_t a = 0; a < node_total_.size(); ++a) {
      if (node_total_[a] > 0.0L) node_term += node_moments_[a].stddev(nodes) / node_total_[a];
    }
    node_term /= static_cast<double>(node_total_.size());
    double link_term = 0.0;
    if (link_total_ > 0.0L) {
      link_term = link_moments_.stddev(work_.link_count()) / link_total_;
    }
    return w.rho1 * node_term + w.rho2 * link_term;
  }

  void debit_node(NodeIndex i, const std::vector<double>& demand) {
    const std::size_t axes = demand.size();
    double term = 0.0;
    for (std::size_t a = 0; a < axes; ++a) {
      const double old = work_.node(i).remaining[a];
      const double now = old - demand[a];
      node_moments_[a].replace(old, now < 0.0 ? 0.0 : now);
      term += demand[a] / arrival_.node(i).remaining[a];
    }
    work_.debit_node(i, demand, &journal_);
    g_ += options_.weights.rho1 * term / static_cast<double>(axes);
  }

  void debit_link(LinkIndex l, double demand) {
    const double old = work_.link(l).remaining;
    work_.debit_link(l, demand, &journal_);
    link_moments_.replace(old, work_.link(l).remaining);
    g_ += options_.weights.rho2 * demand / arrival_.link(l).remaining;
  }

  void descend(int depth) {
    if (stats_) ++stats_->expanded;
    const int n = slice_.size();
    const int vnf = config_->order[depth];
    const auto& demand = slice_.vnfs[vnf].demand;
    std::optional<ShortestPathTree> tree;
    if (depth > 0) tree.emplace(work_, placed_[depth - 1], chain_bw_[depth]);

    Path path;
    for (NodeIndex i = 0; i < work_.node_count(); ++i) {
      if (stop_config_) return;
      if (used_[i] || !work_.node_fits(i, demand)) continue;
      if (tree && !tree->path_to(i, path)) continue;

      const std::size_t mark = journal_.mark();
      const auto saved_nodes = node_moments_;
      const auto saved_links = link_moments_;
      const double saved_g = g_;
      auto undo = [&] {
        work_.rollback(journal_, mark);
        node_moments_ = saved_nodes;
        link_moments_ = saved_links;
        g_ = saved_g;
      };

      debit_node(i, demand);
      if (tree) {
        for (LinkIndex l : path) debit_link(l, chain_bw_[depth]);
      }
      const double bound = g_ + estimate();
      if (bound >= incumbent_ - kCostTolerance) {
        if (stats_) ++stats_->pruned;
        undo();
        continue;
      }

      placed_[depth] = i;
      paths_[depth] = path;
      used_[i] = 1;
      if (depth + 1 == n) {
        incumbent_ = bound;
        record_incumbent();
        if (stats_) ++stats_->solutions;
        if (options_.beta && ++found_in_config_ >= *options_.beta) stop_config_ = true;
      } else {
        descend(depth + 1);
      }
      used_[i] = 0;
      placed_[depth] = -1;
      undo();
    }
  }

  void record_incumbent() {
    const int n = slice_.size();
    SliceSolution sol;
    sol.config = *config_;
    sol.cost = incumbent_;
    sol.embedding.slice_id = slice_.id;
    sol.embedding.config_id = config_->id;
    sol.embedding.node_map.assign(n, -1);
    for (int p = 0; p < n; ++p) sol.embedding.node_map[config_->order[p]] = placed_[p];
    for (int p = 1; p < n; ++p) {
      sol.embedding.link_paths.push_back(
          VirtualLinkPath{config_->order[p - 1], config_->order[p], paths_[p]});
    }
    best_ = std::move(sol);
  }

  PhysicalNetwork work_;
  const PhysicalNetwork& arrival_;
  const SliceRequest& slice_;
  const BnbOptions& options_;
  BnbStats* stats_;

  std::vector<long double> node_total_;
  long double link_total_ = 0.0L;
  std::vector<Moments> node_moments_;
  Moments link_moments_;
  CapacityJournal journal_;

  const SliceConfiguration* config_ = nullptr;
  std::vector<double> chain_bw_;  // demand of the virtual link entering position p
  std::vector<NodeIndex> placed_;
  std::vector<Path> paths_;
  std::vector<char> used_;
  double g_ = 0.0;

  double incumbent_ = std::numeric_limits<double>::infinity();
  std::optional<SliceSolution> best_;
  int found_in_config_ = 0;
  bool stop_config_ = false;
};

}  // namespace

double actual_cost(const PhysicalNetwork& arrival, const SliceRequest& slice,
                   const Embedding& partial, CostWeights weights) {
  double node_term = 0.0;
  for (std::size_t v = 0; v < partial.node_map.size(); ++v) {
    NodeIndex i = partial.node_map[v];
    if (i < 0) continue;
    const auto& rem = arrival.node(i).remaining;
    double term = 0.0;
    for (std::size_t a = 0; a < rem.size(); ++a) {
      if (rem[a] <= 0.0) {
        throw SpecificationError("actual_cost: node '" + arrival.node(i).id +
                                 "' has no capacity at slice arrival");
      }
      term += slice.vnfs[v].demand[a] / rem[a];
    }
    node_term += term / static_cast<double>(rem.size());
  }
  double link_term = 0.0;
  for (const auto& vp : partial.link_paths) {
    double bw = slice.link_demand(vp.from_vnf, vp.to_vnf).value();
    for (LinkIndex l : vp.links) {
      double rem = arrival.link(l).remaining;
      if (rem <= 0.0) throw SpecificationError("actual_cost: link has no bandwidth at arrival");
      link_term += bw / rem;
    }
  }
  return weights.rho1 * node_term + weights.rho2 * link_term;
}

double estimated_cost(const PhysicalNetwork& net, CostWeights weights) {
  const std::size_t axes = net.axis_count();
  double node_term = 0.0;
  for (std::size_t a = 0; a < axes; ++a) {
    std::vector<double> remaining;
    double total = 0.0;
    for (const auto& node : net.nodes()) {
      remaining.push_back(node.remaining[a]);
      total += node.capacity[a];
    }
    if (total > 0.0) node_term += population_stddev(remaining) / total;
  }
  node_term /= static_cast<double>(axes);
  std::vector<double> bandwidth;
  double link_total = 0.0;
  for (const auto& link : net.links()) {
    bandwidth.push_back(link.remaining);
    link_total += link.capacity;
  }
  double link_term = link_total > 0.0 ? population_stddev(bandwidth) / link_total : 0.0;
  return weights.rho1 * node_term + weights.rho2 * link_term;
}

std::optional<SliceSolution> solve_slice(const PhysicalNetwork& net, const SliceRequest& slice,
                                         const BnbOptions& options, BnbStats* stats) {
  check_slice(slice, net);
  if (options.beta && *options.beta < 1) throw ParameterError("beta must be >= 1");
  return SliceSearch(net, slice, options, stats).run();
}

ScenarioResult solve_all(const PhysicalNetwork& net, const std::vector<SliceRequest>& slices,
                         const BnbOptions& options, double gamma) {
  ScenarioResult result;
  PhysicalNetwork work = net;
  for (const auto& slice : slices) {
    auto sol = solve_slice(work, slice, options);
    if (!sol) {
      result.decisions.push_back(AdmissionDecision::rejected(slice.id));
      continue;
    }
    apply_embedding(work, slice, sol->embedding);
    result.decisions.push_back(
        AdmissionDecision::admitted(std::move(sol->config), std::move(sol->embedding)));
  }
  summarize(result, gamma);
  return result;
}

}  // namespace flexslice::bnb
