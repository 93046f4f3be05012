#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "flexslice/configs.h"
#include "flexslice/harness.h"
#include "flexslice/topology.h"
#include "test_support.h"

namespace flexslice {
namespace {

SliceRequest video() {
  std::ifstream in(data_path("video_slice.json"));
  std::stringstream ss;
  ss << in.rdbuf();
  return load_slice_template(ss.str(), {"compute", "storage"});
}

std::vector<std::string> ids(const SliceRequest& s, const SliceConfiguration& c) {
  std::vector<std::string> out;
  for (int v : c.order) out.push_back(s.vnfs[v].id);
  return out;
}

void expect_invariants(const SliceRequest& s, const SliceConfiguration& c) {
  EXPECT_TRUE(check_configuration(s, c).empty());
  std::set<int> seen(c.order.begin(), c.order.end());
  EXPECT_EQ(static_cast<int>(seen.size()), s.size());
  auto chain = c.chain();
  EXPECT_EQ(static_cast<int>(chain.size()), s.size() - 1);
  for (auto [v, w] : chain) EXPECT_EQ(c.position_of(w) - c.position_of(v), 1);
  for (auto [v, p] : s.fixed_positions) EXPECT_EQ(c.position_of(v), p);
}

TEST(ConfigsTest, VideoSliceHasTwoOrders) {
  SliceRequest s = video();
  auto configs = enumerate_configs(s);
  ASSERT_EQ(configs.size(), 2u);
  EXPECT_EQ(ids(s, configs[0]), (std::vector<std::string>{"IDPS", "VOC", "TM", "GW", "DU"}));
  EXPECT_EQ(ids(s, configs[1]), (std::vector<std::string>{"IDPS", "TM", "VOC", "GW", "DU"}));
  EXPECT_EQ(configs[0].id, 1);
  EXPECT_EQ(configs[1].id, 2);
  for (const auto& c : configs) expect_invariants(s, c);
}

TEST(ConfigsTest, AllFixedGivesTheFixedOrder) {
  SliceRequest s = video();
  s.fixed_positions[s.find_vnf("TM").value()] = 2;
  s.fixed_positions[s.find_vnf("VOC").value()] = 3;
  auto configs = enumerate_configs(s);
  ASSERT_EQ(configs.size(), 1u);
  EXPECT_EQ(ids(s, configs[0]), (std::vector<std::string>{"IDPS", "TM", "VOC", "GW", "DU"}));
}

TEST(ConfigsTest, ThreeFlexibleTwoFixed) {
  std::mt19937_64 rng(3);
  auto s = testing::random_slice(rng, "s", {.vnfs = 5, .flexible = 3});
  auto configs = enumerate_configs(s);
  ASSERT_EQ(configs.size(), 6u);
  std::set<std::vector<int>> distinct;
  for (const auto& c : configs) {
    distinct.insert(c.order);
    expect_invariants(s, c);
  }
  EXPECT_EQ(distinct.size(), 6u);
}

TEST(ConfigsTest, MissingDemandNamesThePair) {
  SliceRequest s = video();
  s.link_demands.erase({s.find_vnf("TM").value(), s.find_vnf("VOC").value()});
  try {
    enumerate_configs(s);
    FAIL();
  } catch (const SpecificationError& e) {
    EXPECT_NE(std::string(e.what()).find("TM->VOC"), std::string::npos);
  }
}

TEST(ConfigsTest, VirtualLinksFollowChain) {
  SliceRequest s = video();
  auto configs = enumerate_configs(s);
  auto links = virtual_links(s, configs[0]);
  ASSERT_EQ(links.size(), 4u);
  std::vector<std::pair<std::string, std::string>> got;
  for (const auto& l : links) got.push_back({s.vnfs[l.from].id, s.vnfs[l.to].id});
  EXPECT_EQ(got, (std::vector<std::pair<std::string, std::string>>{
                     {"IDPS", "VOC"}, {"VOC", "TM"}, {"TM", "GW"}, {"GW", "DU"}}));
  EXPECT_EQ(links[1].bandwidth, 3.0);
}

TEST(ConfigsTest, SingleVnfHasNoLinks) {
  SliceRequest s;
  s.id = "one";
  s.vnfs = {{"a", {1}}};
  auto configs = enumerate_configs(s);
  ASSERT_EQ(configs.size(), 1u);
  EXPECT_TRUE(virtual_links(s, configs[0]).empty());
}

TEST(ConfigsTest, SwappedPairRelooksDemands) {
  // Hand table for a 3-VNF slice with a pinned head.
  SliceRequest s;
  s.id = "t";
  s.vnfs = {{"a", {1}}, {"b", {1}}, {"c", {1}}};
  s.fixed_positions = {{0, 1}};
  s.link_demands = {{{0, 1}, 1}, {{0, 2}, 2}, {{1, 2}, 3}, {{2, 1}, 4}};
  auto configs = enumerate_configs(s);
  ASSERT_EQ(configs.size(), 2u);
  auto k1 = virtual_links(s, configs[0]);
  auto k2 = virtual_links(s, configs[1]);
  ASSERT_EQ(k1.size(), 2u);
  ASSERT_EQ(k2.size(), 2u);
  EXPECT_EQ(k1[0].bandwidth, 1.0);  // a->b
  EXPECT_EQ(k1[1].bandwidth, 3.0);  // b->c
  EXPECT_EQ(k2[0].bandwidth, 2.0);  // a->c
  EXPECT_EQ(k2[1].bandwidth, 4.0);  // c->b
}

TEST(ConfigsTest, RandomSlicesSatisfyCountAndInvariants) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + trial % 6;
    int flex = static_cast<int>(rng() % (n + 1));
    auto s = testing::random_slice(rng, "s", {.vnfs = n, .flexible = flex});
    auto configs = enumerate_configs(s);
    EXPECT_EQ(configs.size(), testing::factorial(flex));
    std::set<std::vector<int>> distinct;
    for (const auto& c : configs) {
      distinct.insert(c.order);
      expect_invariants(s, c);
    }
    EXPECT_EQ(distinct.size(), configs.size());
  }
}

TEST(ConfigsTest, StreamingMatchesEager) {
  std::mt19937_64 rng(5);
  auto s = testing::random_slice(rng, "s", {.vnfs = 6, .flexible = 5});
  ConfigEnumerator it(s);
  auto eager = enumerate_configs(s);
  std::size_t k = 0;
  while (auto c = it.next()) {
    ASSERT_LT(k, eager.size());
    EXPECT_EQ(*c, eager[k++]);
  }
  EXPECT_EQ(k, 120u);
}

TEST(ConfigsTest, PinningKeepsOnlyThatOrder) {
  SliceRequest s = video();
  auto configs = enumerate_configs(s);
  auto pinned = enumerate_configs(pin_to_configuration(s, configs[1]));
  ASSERT_EQ(pinned.size(), 1u);
  EXPECT_EQ(pinned[0].order, configs[1].order);
}

TEST(ConfigsTest, MalformedSlicesAreRejected) {
  SliceRequest s = video();
  s.fixed_positions[s.find_vnf("VOC").value()] = 1;  // collides with IDPS
  EXPECT_THROW(enumerate_configs(s), SpecificationError);
  SliceRequest t = video();
  t.fixed_positions[t.find_vnf("VOC").value()] = 9;
  EXPECT_THROW(enumerate_configs(t), SpecificationError);
  SliceRequest u = video();
  u.vnfs[0].demand[0] = 0;
  EXPECT_THROW(enumerate_configs(u), SpecificationError);
}

}  // namespace
}  // namespace flexslice
