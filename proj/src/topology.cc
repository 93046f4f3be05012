#include "flexslice/topology.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace flexslice {

using nlohmann::json;

FatTreePreset FatTreePreset::two_ary() {
  FatTreePreset p;
  p.name = "2-ary";
  p.pods = 2;
  p.edges_per_pod = 2;
  p.aggs_per_pod = 2;
  p.hosts_per_edge = 2;
  p.cores = 2;
  p.agg_core_degree = 1;
  return p;
}

FatTreePreset FatTreePreset::six_ary() {
  FatTreePreset p;
  p.name = "6-ary";
  p.pods = 6;
  p.edges_per_pod = 3;
  p.aggs_per_pod = 3;
  p.hosts_per_edge = 3;
  p.cores = 9;
  p.agg_core_degree = 3;
  return p;
}

PhysicalNetwork gen_fat_tree(const FatTreePreset& preset) {
  const auto& p = preset;
  if (p.pods < 1 || p.edges_per_pod < 1 || p.aggs_per_pod < 1 || p.hosts_per_edge < 1 ||
      p.cores < 1 || p.agg_core_degree < 1) {
    throw ParameterError("fat-tree '" + p.name + "': all layer counts must be >= 1");
  }
  if (p.agg_core_degree > p.cores) {
    throw ParameterError("fat-tree '" + p.name + "': agg_core_degree " +
                         std::to_string(p.agg_core_degree) + " exceeds core count " +
                         std::to_string(p.cores));
  }
  const auto& c = p.capacities;
  PhysicalNetwork net({"compute", "storage"});

  std::vector<NodeIndex> cores;
  for (int k = 0; k < p.cores; ++k) {
    cores.push_back(net.add_node("core" + std::to_string(k), {c.core_compute, c.core_storage}));
  }
  std::vector<std::vector<NodeIndex>> aggs(p.pods), edges(p.pods);
  for (int pod = 0; pod < p.pods; ++pod) {
    for (int a = 0; a < p.aggs_per_pod; ++a) {
      aggs[pod].push_back(net.add_node("agg" + std::to_string(pod) + "_" + std::to_string(a),
                                       {c.agg_compute, c.agg_storage}));
    }
    for (int e = 0; e < p.edges_per_pod; ++e) {
      edges[pod].push_back(net.add_node("edge" + std::to_string(pod) + "_" + std::to_string(e),
                                        {c.edge_compute, c.edge_storage}));
    }
  }
  for (int pod = 0; pod < p.pods; ++pod) {
    for (int e = 0; e < p.edges_per_pod; ++e) {
      for (int h = 0; h < p.hosts_per_edge; ++h) {
        NodeIndex host = net.add_node(
            "host" + std::to_string(pod) + "_" + std::to_string(e) + "_" + std::to_string(h),
            {c.host_compute, c.host_storage});
        net.add_connection(host, edges[pod][e], c.host_edge_bw);
      }
    }
  }
  for (int pod = 0; pod < p.pods; ++pod) {
    for (NodeIndex e : edges[pod]) {
      for (NodeIndex a : aggs[pod]) net.add_connection(e, a, c.edge_agg_bw);
    }
    // Round-robin: local aggregation a uplinks to cores a*d .. a*d+d-1 (mod cores).
    for (int a = 0; a < p.aggs_per_pod; ++a) {
      for (int t = 0; t < p.agg_core_degree; ++t) {
        int core = (a * p.agg_core_degree + t) % p.cores;
        net.add_connection(aggs[pod][a], cores[core], c.agg_core_bw);
      }
    }
  }
  return net;
}

namespace {

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ParseError(where + ": '" + key + "' must be a number");
  double x = v.get<double>();
  if (x < 0.0) throw ParseError(where + ": '" + key + "' must be non-negative");
  return x;
}

std::string string_field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_string()) {
    throw ParseError(where + ": missing string field '" + key + "'");
  }
  return obj.at(key).get<std::string>();
}

}  // namespace

PhysicalNetwork load_graph(const std::string& document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("graph document: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("graph document: top level must be an object");
  json defaults = doc.value("defaults", json::object());
  const double def_compute = number_or(defaults, "compute", 8.0, "defaults");
  const double def_storage = number_or(defaults, "storage", 64.0, "defaults");
  const double def_bw = number_or(defaults, "bandwidth", 25.0, "defaults");

  if (!doc.contains("nodes") || !doc.at("nodes").is_array() || doc.at("nodes").empty()) {
    throw ParseError("graph document: 'nodes' must be a non-empty array");
  }
  PhysicalNetwork net({"compute", "storage"});
  const auto& nodes = doc.at("nodes");
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const std::string where = "nodes[" + std::to_string(k) + "]";
    std::string id = string_field(nodes[k], "id", where);
    if (net.find_node(id)) throw ParseError(where + ": duplicate node id '" + id + "'");
    net.add_node(id, {number_or(nodes[k], "compute", def_compute, where),
                      number_or(nodes[k], "storage", def_storage, where)});
  }
  json edges = doc.value("edges", json::array());
  if (!edges.is_array()) throw ParseError("graph document: 'edges' must be an array");
  std::set<std::pair<NodeIndex, NodeIndex>> seen;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::string where = "edges[" + std::to_string(k) + "]";
    std::string a = string_field(edges[k], "a", where);
    std::string b = string_field(edges[k], "b", where);
    auto ia = net.find_node(a);
    auto ib = net.find_node(b);
    if (!ia) throw ParseError(where + ": dangling endpoint '" + a + "'");
    if (!ib) throw ParseError(where + ": dangling endpoint '" + b + "'");
    if (*ia == *ib) throw ParseError(where + ": self-loop on '" + a + "'");
    auto key = std::minmax(*ia, *ib);
    if (!seen.insert(key).second) {
      throw ParseError(where + ": duplicate edge '" + a + "'-'" + b + "'");
    }
    net.add_connection(*ia, *ib, number_or(edges[k], "bandwidth", def_bw, where));
  }
  return net;
}

PhysicalNetwork load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph document '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return load_graph(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string serialize_graph(const PhysicalNetwork& net) {
  if (net.axis_count() != 2) {
    throw ParameterError("graph documents carry exactly two node axes (compute, storage)");
  }
  json doc;
  doc["nodes"] = json::array();
  for (const auto& n : net.nodes()) {
    doc["nodes"].push_back({{"id", n.id}, {"compute", n.capacity[0]}, {"storage", n.capacity[1]}});
  }
  doc["edges"] = json::array();
  for (LinkIndex l = 0; l < net.link_count(); ++l) {
    const auto& link = net.link(l);
    auto back = net.find_link(link.dst, link.src);
    if (!back || net.link(*back).capacity != link.capacity) {
      throw ParameterError("serialize_graph: link pair " + net.node(link.src).id + "/" +
                           net.node(link.dst).id + " is not symmetric");
    }
    if (*back < l) continue;
    doc["edges"].push_back({{"a", net.node(link.src).id},
                            {"b", net.node(link.dst).id},
                            {"bandwidth", link.capacity}});
  }
  return doc.dump(2) + "\n";
}

std::string data_path(const std::string& file) {
  return (std::filesystem::path(FLEXSLICE_DATA_DIR) / file).string();
}

PhysicalNetwork load_topology(const std::string& name_or_path) {
  const std::string& n = name_or_path;
  if (n == "2-ary" || n == "fat-tree-2") return gen_fat_tree(FatTreePreset::two_ary());
  if (n == "6-ary" || n == "fat-tree-6") return gen_fat_tree(FatTreePreset::six_ary());
  if (n == "abilene") return load_graph_file(data_path("abilene.json"));
  if (n == "cost266") return load_graph_file(data_path("cost266.json"));
  if (!std::filesystem::exists(n)) {
    throw ConfigurationError("unknown topology '" + n + "'");
  }
  return load_graph_file(n);
}

}  // namespace flexslice
