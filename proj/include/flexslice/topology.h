#pragma once

#include <optional>
#include <string>

#include "flexslice/model.h"

namespace flexslice {

// Per-tier resources of a fat-tree: node (compute vCPU, storage GB) and the
// bandwidth (Gbps) of the links leaving the tier towards the core.
struct FatTreeCapacities {
  double host_compute = 2, host_storage = 2;
  double edge_compute = 6, edge_storage = 4;
  double agg_compute = 12, agg_storage = 32;
  double core_compute = 32, core_storage = 120;
  double host_edge_bw = 10;
  double edge_agg_bw = 20;
  double agg_core_bw = 20;
};

// Layered data-center tree. Layer sizes are explicit rather than derived from
// a single arity, so the presets can reproduce published node/link counts.
struct FatTreePreset {
  std::string name = "custom";
  int pods = 1;
  int edges_per_pod = 1;
  int aggs_per_pod = 1;
  int hosts_per_edge = 1;
  int cores = 1;
  int agg_core_degree = 1;
  FatTreeCapacities capacities;

  int expected_node_count() const {
    return cores + pods * (aggs_per_pod + edges_per_pod) + pods * edges_per_pod * hosts_per_edge;
  }

  static FatTreePreset two_ary();  // 18 nodes, 40 directed links
  static FatTreePreset six_ary();  // 99 nodes, 324 directed links
};

// Node ids: core<c>, agg<p>_<a>, edge<p>_<e>, host<p>_<e>_<h>. Nodes are
// numbered core first, then per pod aggregation and edge, then hosts.
// Axes are {"compute", "storage"}.
PhysicalNetwork gen_fat_tree(const FatTreePreset& preset);

// Graph document (JSON):
//   {"nodes": [{"id": "A", "compute": 8, "storage": 64}, ...],
//    "edges": [{"a": "A", "b": "B", "bandwidth": 25}, ...],
//    "defaults": {"compute": 8, "storage": 64, "bandwidth": 25}}
// Every edge becomes two directed links. Missing per-item values fall back to
// defaults, and missing defaults to 8 vCPU / 64 GB / 25 Gbps.
PhysicalNetwork load_graph(const std::string& document);
PhysicalNetwork load_graph_file(const std::string& path);

// Inverse of load_graph for networks whose link pairs are symmetric. Emits
// explicit per-node and per-edge capacities.
std::string serialize_graph(const PhysicalNetwork& net);

// Resolves "2-ary", "6-ary" (aliases fat-tree-2, fat-tree-6), "abilene",
// "cost266", or a path to a graph document.
PhysicalNetwork load_topology(const std::string& name_or_path);

std::string data_path(const std::string& file);

}  // namespace flexslice
