#include <gtest/gtest.h>

#include "flexslice/pathing.h"
#include "flexslice/topology.h"

namespace flexslice {
namespace {

bool starts_with(const std::string& s, const char* prefix) { return s.rfind(prefix, 0) == 0; }

TEST(FatTreeTest, TwoAryCounts) {
  PhysicalNetwork net = gen_fat_tree(FatTreePreset::two_ary());
  EXPECT_EQ(net.node_count(), 18);
  EXPECT_EQ(net.link_count(), 40);
  EXPECT_EQ(FatTreePreset::two_ary().expected_node_count(), 18);
}

TEST(FatTreeTest, SixAryCounts) {
  PhysicalNetwork net = gen_fat_tree(FatTreePreset::six_ary());
  EXPECT_EQ(net.node_count(), 99);
  EXPECT_EQ(net.link_count(), 324);
}

TEST(FatTreeTest, DegenerateChain) {
  FatTreePreset p;
  PhysicalNetwork net = gen_fat_tree(p);
  EXPECT_EQ(net.node_count(), 4);
  EXPECT_EQ(net.link_count(), 6);
}

TEST(FatTreeTest, TierCapacities) {
  PhysicalNetwork net = gen_fat_tree(FatTreePreset::two_ary());
  for (const auto& n : net.nodes()) {
    std::vector<double> want;
    if (starts_with(n.id, "host")) want = {2, 2};
    if (starts_with(n.id, "edge")) want = {6, 4};
    if (starts_with(n.id, "agg")) want = {12, 32};
    if (starts_with(n.id, "core")) want = {32, 120};
    EXPECT_EQ(n.capacity, want) << n.id;
    EXPECT_EQ(n.remaining, n.capacity);
  }
  for (const auto& l : net.links()) {
    const std::string& a = net.node(l.src).id;
    const std::string& b = net.node(l.dst).id;
    bool host = starts_with(a, "host") || starts_with(b, "host");
    EXPECT_EQ(l.capacity, host ? 10.0 : 20.0) << a << "->" << b;
  }
}

TEST(FatTreeTest, EveryHostReachesEveryCore) {
  for (auto preset : {FatTreePreset::two_ary(), FatTreePreset::six_ary()}) {
    PhysicalNetwork net = gen_fat_tree(preset);
    for (NodeIndex h = 0; h < net.node_count(); ++h) {
      if (!starts_with(net.node(h).id, "host")) continue;
      auto dist = hop_distances(net, h, 0.0);
      for (NodeIndex c = 0; c < net.node_count(); ++c) {
        EXPECT_GE(dist[c], 0);
        if (starts_with(net.node(c).id, "core")) EXPECT_EQ(dist[c], 3);
      }
    }
  }
}

TEST(FatTreeTest, BadPresetsThrow) {
  FatTreePreset p;
  p.agg_core_degree = 2;
  EXPECT_THROW(gen_fat_tree(p), ParameterError);
  FatTreePreset q;
  q.pods = 0;
  EXPECT_THROW(gen_fat_tree(q), ParameterError);
}

TEST(GraphTest, BundledTopologies) {
  PhysicalNetwork abilene = load_topology("abilene");
  EXPECT_EQ(abilene.node_count(), 12);
  EXPECT_EQ(abilene.link_count(), 30);
  PhysicalNetwork cost = load_topology("cost266");
  EXPECT_EQ(cost.node_count(), 37);
  EXPECT_EQ(cost.link_count(), 114);
  for (const auto* net : {&abilene, &cost}) {
    for (const auto& n : net->nodes()) EXPECT_EQ(n.capacity, (std::vector<double>{8, 64}));
    for (const auto& l : net->links()) EXPECT_EQ(l.capacity, 25.0);
    auto dist = hop_distances(*net, 0, 0.0);
    for (int d : dist) EXPECT_GE(d, 0);
  }
}

TEST(GraphTest, DefaultsAndOverrides) {
  auto net = load_graph(R"({"nodes": [{"id": "A", "compute": 3}, {"id": "B"}],
                            "edges": [{"a": "A", "b": "B", "bandwidth": 7}]})");
  EXPECT_EQ(net.node(0).capacity, (std::vector<double>{3, 64}));
  EXPECT_EQ(net.node(1).capacity, (std::vector<double>{8, 64}));
  ASSERT_EQ(net.link_count(), 2);
  EXPECT_EQ(net.link(0).capacity, 7.0);
  EXPECT_EQ(net.link(1).src, 1);
}

TEST(GraphTest, ParseErrorsCarryLocation) {
  EXPECT_THROW(load_graph(R"({"nodes": []})"), ParseError);
  EXPECT_THROW(load_graph("not json"), ParseError);
  try {
    load_graph(R"({"nodes": [{"id": "A"}, {"id": "B"}],
                   "edges": [{"a": "A", "b": "B"}, {"a": "B", "b": "A"}]})");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("edges[1]"), std::string::npos);
  }
  try {
    load_graph(R"({"nodes": [{"id": "A"}], "edges": [{"a": "A", "b": "Z"}]})");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("edges[0]"), std::string::npos);
  }
}

TEST(GraphTest, SerializeRoundTrip) {
  for (const char* name : {"2-ary", "abilene", "cost266"}) {
    PhysicalNetwork net = load_topology(name);
    PhysicalNetwork back = load_graph(serialize_graph(net));
    EXPECT_TRUE(back == net) << name;
  }
}

TEST(GraphTest, UnknownTopologyIsConfigurationError) {
  EXPECT_THROW(load_topology("no-such-topology"), ConfigurationError);
}

}  // namespace
}  // namespace flexslice
