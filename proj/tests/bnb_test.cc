#include <gtest/gtest.h>

#include <limits>

#include "flexslice/bnb.h"
#include "flexslice/configs.h"
#include "flexslice/pathing.h"
#include "test_support.h"

namespace flexslice {
namespace {

using bnb::BnbOptions;
using bnb::CostWeights;

// Minimum g over every configuration and injective placement, routing each
// virtual link on the shortest feasible path in the partially debited network.
std::optional<double> exhaustive_min_g(const PhysicalNetwork& net, const SliceRequest& s,
                                       CostWeights w) {
  std::optional<double> best;
  for (const auto& config : enumerate_configs(s)) {
    const int n = s.size();
    std::vector<NodeIndex> hosts(n, -1);
    auto rec = [&](auto&& self, int p, PhysicalNetwork work, Embedding emb) -> void {
      if (p == n) {
        double g = testing::g_oracle(net, s, emb, w.rho1, w.rho2);
        if (!best || g < *best) best = g;
        return;
      }
      const int v = config.order[p];
      for (NodeIndex i = 0; i < net.node_count(); ++i) {
        if (std::find(hosts.begin(), hosts.begin() + p, i) != hosts.begin() + p) continue;
        if (!work.node_fits(i, s.vnfs[v].demand)) continue;
        PhysicalNetwork next = work;
        Embedding e = emb;
        next.debit_node(i, s.vnfs[v].demand);
        e.node_map[v] = i;
        if (p > 0) {
          const int u = config.order[p - 1];
          const double bw = *s.link_demand(u, v);
          auto path = shortest_path(work, hosts[p - 1], i, bw);
          if (!path) continue;
          for (LinkIndex l : *path) next.debit_link(l, bw);
          e.link_paths.push_back({u, v, *path});
        }
        hosts[p] = i;
        self(self, p + 1, next, e);
      }
    };
    Embedding emb{s.id, config.id, std::vector<NodeIndex>(n, -1), {}};
    rec(rec, 0, net, emb);
  }
  return best;
}

TEST(CostTest, EmptyEmbeddingCostsNothing) {
  PhysicalNetwork net = testing::line_network(2, 4, 4);
  SliceRequest s;
  s.id = "s";
  s.vnfs = {{"a", {1}}};
  Embedding e{"s", 1, {-1}, {}};
  EXPECT_EQ(bnb::actual_cost(net, s, e, {}), 0.0);
}

TEST(CostTest, SingleNodeQuarter) {
  PhysicalNetwork net;
  net.add_node("A", {2});
  SliceRequest s;
  s.id = "s";
  s.vnfs = {{"a", {1}}};
  Embedding e{"s", 1, {0}, {}};
  EXPECT_DOUBLE_EQ(bnb::actual_cost(net, s, e, {0.5, 0.5}), 0.25);
}

TEST(CostTest, ZeroDenominatorThrows) {
  PhysicalNetwork net;
  net.add_node("A", {2});
  net.set_node_remaining(0, {0});
  SliceRequest s;
  s.id = "s";
  s.vnfs = {{"a", {1}}};
  Embedding e{"s", 1, {0}, {}};
  EXPECT_THROW(bnb::actual_cost(net, s, e, {}), SpecificationError);
}

TEST(CostTest, EstimateOfUniformNetworkIsZero) {
  PhysicalNetwork net = testing::line_network(5, 7, 3);
  EXPECT_EQ(bnb::estimated_cost(net, {}), 0.0);
}

TEST(CostTest, EstimateHandExample) {
  PhysicalNetwork net;
  net.add_node("A", {8});
  net.add_node("B", {8});
  net.set_node_remaining(0, {0});
  EXPECT_DOUBLE_EQ(bnb::estimated_cost(net, {1.0, 0.0}), 0.25);
}

TEST(CostTest, MatchOraclesOnRandomStates) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    auto net = testing::random_network(rng, {.nodes = 7, .axes = 1 + trial % 3, .drain = true});
    for (int i = 0; i < net.node_count(); ++i) {
      auto rem = net.node(i).remaining;
      for (double& r : rem) r = std::max(r, 1.0);
      net.set_node_remaining(i, rem);
    }
    for (int l = 0; l < net.link_count(); ++l) {
      net.set_link_remaining(l, std::max(net.link(l).remaining, 1.0));
    }
    CostWeights w{std::uniform_real_distribution<double>(0, 1)(rng), 0};
    w.rho2 = 1 - w.rho1;
    EXPECT_NEAR(bnb::estimated_cost(net, w), testing::h_oracle(net, w.rho1, w.rho2), 1e-12);

    const int axes = static_cast<int>(net.axis_count());
    auto s = testing::random_slice(rng, "s", {.vnfs = 3, .flexible = 3, .axes = axes});
    Embedding e{"s", 1, {}, {}};
    for (int v = 0; v < s.size(); ++v) {
      e.node_map.push_back(static_cast<NodeIndex>(rng() % net.node_count()));
    }
    for (int v = 0; v + 1 < s.size(); ++v) {
      std::vector<LinkIndex> links;
      for (int k = 0; k < 3; ++k) links.push_back(static_cast<LinkIndex>(rng() % net.link_count()));
      e.link_paths.push_back({v, v + 1, links});
    }
    EXPECT_NEAR(bnb::actual_cost(net, s, e, w), testing::g_oracle(net, s, e, w.rho1, w.rho2), 1e-12);
  }
}

TEST(BnbTest, InfeasibleSliceIsRejected) {
  PhysicalNetwork net = testing::line_network(2, 1, 10);
  SliceRequest s;
  s.id = "big";
  s.vnfs = {{"a", {2}}};
  EXPECT_FALSE(bnb::solve_slice(net, s, {}));
  SliceRequest t;
  t.id = "three";
  t.vnfs = {{"a", {1}}, {"b", {1}}, {"c", {1}}};
  t.link_demands = {{{0, 1}, 1}, {{1, 2}, 1}};
  t.fixed_positions = {{0, 1}, {1, 2}, {2, 3}};
  EXPECT_FALSE(bnb::solve_slice(net, t, {}));  // only two nodes
  auto r = bnb::solve_all(net, {s, t}, {});
  EXPECT_EQ(r.accepted_count(), 0);
  EXPECT_EQ(r.acceptance_rate, 0.0);
}

TEST(BnbTest, TriangleHandExample) {
  // Triangle with one thin link; the two VNFs must avoid it.
  PhysicalNetwork net;
  for (auto id : {"A", "B", "C"}) net.add_node(id, {4});
  net.add_connection(0, 1, 1);
  net.add_connection(1, 2, 10);
  net.add_connection(0, 2, 10);
  SliceRequest s;
  s.id = "s";
  s.vnfs = {{"a", {2}}, {"b", {2}}};
  s.link_demands = {{{0, 1}, 2}};
  s.fixed_positions = {{0, 1}, {1, 2}};
  BnbOptions opt;
  opt.use_estimate = false;
  auto sol = bnb::solve_slice(net, s, opt);
  ASSERT_TRUE(sol);
  ASSERT_EQ(sol->embedding.link_paths.size(), 1u);
  EXPECT_EQ(sol->embedding.link_paths[0].links.size(), 1u);
  EXPECT_NE(sol->embedding.node_map, (std::vector<NodeIndex>{0, 1}));
  EXPECT_NEAR(sol->cost, 0.5 * (0.5 + 0.5) + 0.5 * 0.2, 1e-12);
  EXPECT_NEAR(sol->cost, *exhaustive_min_g(net, s, opt.weights), 1e-12);
}

TEST(BnbTest, WithoutEstimateMatchesExhaustiveSearch) {
  std::mt19937_64 rng(314);
  BnbOptions opt;
  opt.use_estimate = false;
  for (int trial = 0; trial < 60; ++trial) {
    auto net = testing::random_network(rng, {.nodes = 5, .axes = 1 + trial % 2, .edge_prob = 0.4});
    auto s = testing::random_slice(rng, "s", {.vnfs = 3, .flexible = 1 + trial % 3,
                                              .axes = static_cast<int>(net.axis_count())});
    auto want = exhaustive_min_g(net, s, opt.weights);
    auto got = bnb::solve_slice(net, s, opt);
    ASSERT_EQ(got.has_value(), want.has_value());
    if (!got) continue;
    EXPECT_NEAR(got->cost, *want, 1e-9);
    EXPECT_NEAR(got->cost, bnb::actual_cost(net, s, got->embedding, opt.weights), 1e-12);
  }
}

TEST(BnbTest, ReportedCostIsGPlusH) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    auto net = testing::random_network(rng, {.nodes = 6});
    auto s = testing::random_slice(rng, "s", {.vnfs = 3, .flexible = 2});
    auto sol = bnb::solve_slice(net, s, {});
    if (!sol) continue;
    PhysicalNetwork after = net;
    apply_embedding(after, s, sol->embedding);
    double want = bnb::actual_cost(net, s, sol->embedding, {}) + bnb::estimated_cost(after, {});
    EXPECT_NEAR(sol->cost, want, 1e-9);
  }
}

TEST(BnbTest, BetaOneNeverBeatsUnlimitedWithoutEstimate) {
  // With h = 0 the bound is monotone along a branch, so an unlimited search
  // can only do as well or better.
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 50; ++trial) {
    auto net = testing::random_network(rng, {.nodes = 6});
    auto s = testing::random_slice(rng, "s", {.vnfs = 3, .flexible = 3});
    BnbOptions one;
    one.beta = 1;
    one.use_estimate = false;
    BnbOptions all = one;
    all.beta.reset();
    bnb::BnbStats s1, s2;
    auto a = bnb::solve_slice(net, s, one, &s1);
    auto b = bnb::solve_slice(net, s, all, &s2);
    ASSERT_EQ(a.has_value(), b.has_value());
    if (!a) continue;
    EXPECT_GE(a->cost, b->cost - 1e-9);
    EXPECT_LE(s1.solutions, static_cast<std::int64_t>(enumerate_configs(s).size()));
  }
}

TEST(BnbTest, BetaOneTakesFirstSolutionOfSingleConfig) {
  PhysicalNetwork net = testing::line_network(4, 10, 10);
  SliceRequest s;
  s.id = "s";
  s.vnfs = {{"a", {1}}, {"b", {1}}};
  s.link_demands = {{{0, 1}, 1}};
  s.fixed_positions = {{0, 1}, {1, 2}};
  BnbOptions opt;
  opt.beta = 1;
  bnb::BnbStats stats;
  auto sol = bnb::solve_slice(net, s, opt, &stats);
  ASSERT_TRUE(sol);
  EXPECT_EQ(stats.solutions, 1);
  EXPECT_EQ(sol->embedding.node_map, (std::vector<NodeIndex>{0, 1}));
}

TEST(BnbTest, FlexibleDominatesFirstConfiguration) {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 80; ++trial) {
    auto net = testing::random_network(rng, {.nodes = 6, .edge_prob = 0.3, .drain = trial % 2 == 1});
    for (int i = 0; i < net.node_count(); ++i) {
      auto rem = net.node(i).remaining;
      for (double& r : rem) r = std::max(r, 1.0);
      net.set_node_remaining(i, rem);
    }
    for (int l = 0; l < net.link_count(); ++l) {
      net.set_link_remaining(l, std::max(net.link(l).remaining, 1.0));
    }
    auto s = testing::random_slice(rng, "s", {.vnfs = 4, .flexible = 3});
    auto k1 = pin_to_configuration(s, enumerate_configs(s).front());
    BnbOptions opt;
    if (trial % 3 == 0) opt.beta = 2;
    auto fixed = bnb::solve_slice(net, k1, opt);
    auto flex = bnb::solve_slice(net, s, opt);
    if (fixed) {
      ASSERT_TRUE(flex);
      EXPECT_LE(flex->cost, fixed->cost + 1e-12);
    }
  }
}

TEST(BnbTest, SolveAllCommitsAndIsDeterministic) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    auto net = testing::random_network(rng, {.nodes = 6});
    std::vector<SliceRequest> slices;
    for (int k = 0; k < 4; ++k) {
      slices.push_back(testing::random_slice(rng, "s" + std::to_string(k), {.vnfs = 3}));
    }
    auto a = bnb::solve_all(net, slices, {});
    auto b = bnb::solve_all(net, slices, {});
    EXPECT_EQ(a.decisions, b.decisions);
    EXPECT_TRUE(validate_embedding(net, slices, a.decisions).ok());
    EXPECT_NEAR(a.objective, objective_value(a.decisions, 0.999), 1e-12);
    // The first slice sees the untouched network.
    auto first = bnb::solve_slice(net, slices[0], {});
    EXPECT_EQ(a.decisions[0].accepted, first.has_value());
    if (first) EXPECT_EQ(*a.decisions[0].embedding, first->embedding);
  }
}

TEST(BnbTest, EmptySliceListHasNoRate) {
  PhysicalNetwork net = testing::line_network(2, 1, 1);
  auto r = bnb::solve_all(net, {}, {});
  EXPECT_TRUE(r.decisions.empty());
  EXPECT_FALSE(r.acceptance_rate);
}

}  // namespace
}  // namespace flexslice
