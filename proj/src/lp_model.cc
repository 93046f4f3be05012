#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "flexslice/configs.h"
#include "flexslice/exact.h"
#include "flexslice/pathing.h"

namespace flexslice {

namespace {

std::string num(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string pi_var(int s) { return "pi_s" + std::to_string(s); }
std::string xn_var(int s, int v, int i) {
  return "xn_s" + std::to_string(s) + "_v" + std::to_string(v) + "_n" + std::to_string(i);
}
std::string pair_suffix(int s, int v, int w) {
  return "_s" + std::to_string(s) + "_v" + std::to_string(v) + "_w" + std::to_string(w);
}
std::string xl_var(int s, int v, int w, int l) {
  return "xl" + pair_suffix(s, v, w) + "_l" + std::to_string(l);
}
std::string z_var(int s, int v, int w, int l) {
  return "z" + pair_suffix(s, v, w) + "_l" + std::to_string(l);
}
std::string y_var(int s, int v, int w) { return "y" + pair_suffix(s, v, w); }
std::string th_var(int s, int v, int p) {
  return "th_s" + std::to_string(s) + "_v" + std::to_string(v) + "_p" + std::to_string(p);
}

struct Term {
  double coef;
  std::string var;
};

class LpWriter {
 public:
  void objective(const std::vector<Term>& terms) {
    out_ << "Maximize\n obj:";
    if (terms.empty()) out_ << " 0";
    write_terms(terms);
    out_ << "\nSubject To\n";
  }

  void row(const std::string& name, const std::vector<Term>& terms, const char* sense,
           double rhs) {
    if (terms.empty()) return;
    out_ << ' ' << name << ':';
    write_terms(terms);
    out_ << ' ' << sense << ' ' << num(rhs) << '\n';
  }

  void binaries(const std::vector<std::string>& vars) {
    out_ << "Binary\n";
    for (const auto& v : vars) out_ << ' ' << v << '\n';
    out_ << "End\n";
  }

  std::string str() const { return out_.str(); }

 private:
  // Short lines keep every LP reader happy.
  void write_terms(const std::vector<Term>& terms) {
    int on_line = 0;
    for (const auto& t : terms) {
      if (on_line == 6) {
        out_ << "\n   ";
        on_line = 0;
      }
      out_ << (t.coef < 0 ? " - " : " + ");
      double mag = std::fabs(t.coef);
      if (mag != 1.0) out_ << num(mag) << ' ';
      out_ << t.var;
      ++on_line;
    }
  }

  std::ostringstream out_;
};

}  // namespace

std::string export_lp(const PhysicalNetwork& net, const std::vector<SliceRequest>& slices,
                      double gamma, std::optional<double> big_m) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ParameterError("gamma must lie in [0, 1]");
  int largest = 0;
  for (const auto& slice : slices) {
    check_slice(slice, net);
    largest = std::max(largest, slice.size());
  }
  if (big_m && !(*big_m > std::max(largest, net.node_count() - 1))) {
    throw ParameterError("big-M must exceed both the largest slice and the longest simple path");
  }
  const int nodes = net.node_count();
  const int links = net.link_count();
  const double flow_m = big_m.value_or(links + 1);

  LpWriter lp;
  std::vector<std::string> binaries;

  std::vector<Term> obj;
  for (int s = 0; s < static_cast<int>(slices.size()); ++s) {
    if (gamma != 0.0) obj.push_back({gamma, pi_var(s)});
  }
  for (int s = 0; s < static_cast<int>(slices.size()); ++s) {
    if (gamma == 1.0) break;
    for (const auto& [pair, bw] : slices[s].link_demands) {
      for (int l = 0; l < links; ++l) obj.push_back({-(1.0 - gamma), xl_var(s, pair.first, pair.second, l)});
    }
  }
  lp.objective(obj);

  // Node capacity, per resource axis.
  for (int i = 0; i < nodes; ++i) {
    for (std::size_t a = 0; a < net.axis_count(); ++a) {
      std::vector<Term> t;
      for (int s = 0; s < static_cast<int>(slices.size()); ++s) {
        for (int v = 0; v < slices[s].size(); ++v) {
          t.push_back({slices[s].vnfs[v].demand[a], xn_var(s, v, i)});
        }
      }
      lp.row("ncap_n" + std::to_string(i) + "_a" + std::to_string(a), t, "<=",
             net.node(i).remaining[a]);
    }
  }
  // Link capacity over the linearized products.
  for (int l = 0; l < links; ++l) {
    std::vector<Term> t;
    for (int s = 0; s < static_cast<int>(slices.size()); ++s) {
      for (const auto& [pair, bw] : slices[s].link_demands) {
        t.push_back({bw, z_var(s, pair.first, pair.second, l)});
      }
    }
    lp.row("lcap_l" + std::to_string(l), t, "<=", net.link(l).remaining);
  }

  for (int s = 0; s < static_cast<int>(slices.size()); ++s) {
    const SliceRequest& slice = slices[s];
    const int n = slice.size();
    const double pos_m = big_m.value_or(n + 1);
    const std::string pi = pi_var(s);
    const std::string ss = "_s" + std::to_string(s);
    binaries.push_back(pi);
    for (int v = 0; v < n; ++v) {
      for (int i = 0; i < nodes; ++i) binaries.push_back(xn_var(s, v, i));
    }
    for (const auto& [pair, bw] : slice.link_demands) {
      auto [v, w] = pair;
      binaries.push_back(y_var(s, v, w));
      for (int l = 0; l < links; ++l) binaries.push_back(xl_var(s, v, w, l));
      for (int l = 0; l < links; ++l) binaries.push_back(z_var(s, v, w, l));
    }
    for (int v = 0; v < n; ++v) {
      for (int p = 1; p <= n; ++p) binaries.push_back(th_var(s, v, p));
    }

    // z = xl * y
    for (const auto& [pair, bw] : slice.link_demands) {
      auto [v, w] = pair;
      const std::string y = y_var(s, v, w);
      for (int l = 0; l < links; ++l) {
        const std::string z = z_var(s, v, w, l);
        const std::string x = xl_var(s, v, w, l);
        const std::string tag = pair_suffix(s, v, w) + "_l" + std::to_string(l);
        lp.row("zx" + tag, {{1, z}, {-1, x}}, "<=", 0);
        lp.row("zy" + tag, {{1, z}, {-1, y}}, "<=", 0);
        lp.row("zxy" + tag, {{1, z}, {-1, x}, {-1, y}}, ">=", -1);
      }
    }
    // At most one VNF of the slice per node.
    for (int i = 0; i < nodes; ++i) {
      std::vector<Term> t;
      for (int v = 0; v < n; ++v) t.push_back({1, xn_var(s, v, i)});
      t.push_back({-1, pi});
      lp.row("once" + ss + "_n" + std::to_string(i), t, "<=", 0);
    }
    // An accepted slice maps every VNF.
    for (int v = 0; v < n; ++v) {
      std::vector<Term> t;
      for (int i = 0; i < nodes; ++i) t.push_back({1, xn_var(s, v, i)});
      t.push_back({-1, pi});
      lp.row("serve" + ss + "_v" + std::to_string(v), t, "=", 0);
    }
    // Flow conservation, active only on chosen virtual links.
    for (const auto& [pair, bw] : slice.link_demands) {
      auto [v, w] = pair;
      for (int i = 0; i < nodes; ++i) {
        std::vector<Term> t;
        for (LinkIndex l : net.out_links(i)) t.push_back({1, xl_var(s, v, w, l)});
        for (int l = 0; l < links; ++l) {
          if (net.link(l).dst == i) t.push_back({-1, xl_var(s, v, w, l)});
        }
        t.push_back({-1, xn_var(s, v, i)});
        t.push_back({1, xn_var(s, w, i)});
        const std::string tag = pair_suffix(s, v, w) + "_n" + std::to_string(i);
        auto upper = t;
        upper.push_back({flow_m, y_var(s, v, w)});
        lp.row("flowu" + tag, upper, "<=", flow_m);
        auto lower = t;
        lower.push_back({-flow_m, y_var(s, v, w)});
        lp.row("flowl" + tag, lower, ">=", -flow_m);
      }
    }
    // Chain degrees, pairwise loop exclusion, chain length.
    for (int w = 0; w < n; ++w) {
      std::vector<Term> t;
      for (const auto& [pair, bw] : slice.link_demands) {
        if (pair.second == w) t.push_back({1, y_var(s, pair.first, w)});
      }
      if (t.empty()) continue;
      t.push_back({-1, pi});
      lp.row("indeg" + ss + "_v" + std::to_string(w), t, "<=", 0);
    }
    for (int v = 0; v < n; ++v) {
      std::vector<Term> t;
      for (const auto& [pair, bw] : slice.link_demands) {
        if (pair.first == v) t.push_back({1, y_var(s, v, pair.second)});
      }
      if (t.empty()) continue;
      t.push_back({-1, pi});
      lp.row("outdeg" + ss + "_v" + std::to_string(v), t, "<=", 0);
    }
    for (const auto& [pair, bw] : slice.link_demands) {
      auto [v, w] = pair;
      if (v < w && slice.link_demands.contains({w, v})) {
        lp.row("pair" + pair_suffix(s, v, w), {{1, y_var(s, v, w)}, {1, y_var(s, w, v)}, {-1, pi}},
               "<=", 0);
      }
    }
    {
      std::vector<Term> t;
      for (const auto& [pair, bw] : slice.link_demands) t.push_back({1, y_var(s, pair.first, pair.second)});
      if (n > 1) t.push_back({-static_cast<double>(n - 1), pi});
      lp.row("chain" + ss, t, "=", 0);
    }
    // Consecutive positions along chosen virtual links.
    for (const auto& [pair, bw] : slice.link_demands) {
      auto [v, w] = pair;
      std::vector<Term> t;
      for (int p = 1; p <= n; ++p) t.push_back({static_cast<double>(p), th_var(s, w, p)});
      for (int p = 1; p <= n; ++p) t.push_back({-static_cast<double>(p), th_var(s, v, p)});
      auto upper = t;
      upper.push_back({pos_m, y_var(s, v, w)});
      lp.row("posu" + pair_suffix(s, v, w), upper, "<=", pos_m + 1);
      auto lower = t;
      lower.push_back({-pos_m, y_var(s, v, w)});
      lp.row("posl" + pair_suffix(s, v, w), lower, ">=", 1 - pos_m);
    }
    // No physical links for virtual links outside the chain.
    for (const auto& [pair, bw] : slice.link_demands) {
      auto [v, w] = pair;
      std::vector<Term> t;
      for (int l = 0; l < links; ++l) t.push_back({1, xl_var(s, v, w, l)});
      t.push_back({-flow_m, y_var(s, v, w)});
      lp.row("remove" + pair_suffix(s, v, w), t, "<=", 0);
    }
    // One position per VNF, one VNF per position.
    for (int v = 0; v < n; ++v) {
      std::vector<Term> t;
      for (int p = 1; p <= n; ++p) t.push_back({1, th_var(s, v, p)});
      t.push_back({-1, pi});
      lp.row("onepos" + ss + "_v" + std::to_string(v), t, "=", 0);
    }
    for (int p = 1; p <= n; ++p) {
      std::vector<Term> t;
      for (int v = 0; v < n; ++v) t.push_back({1, th_var(s, v, p)});
      t.push_back({-1, pi});
      lp.row("oneocc" + ss + "_p" + std::to_string(p), t, "=", 0);
    }
    // Pinned VNFs and the links between consecutive pinned VNFs.
    for (auto [v, pos] : slice.fixed_positions) {
      lp.row("fixed" + ss + "_v" + std::to_string(v), {{1, th_var(s, v, pos)}, {-1, pi}}, "=", 0);
    }
    for (auto [v, pos] : slice.fixed_positions) {
      for (auto [w, pos_w] : slice.fixed_positions) {
        if (pos_w == pos + 1 && slice.link_demands.contains({v, w})) {
          lp.row("fixedlink" + pair_suffix(s, v, w), {{1, y_var(s, v, w)}, {-1, pi}}, "=", 0);
        }
      }
    }
  }
  lp.binaries(binaries);
  return "\\ flexslice admission and embedding model\n" + lp.str();
}

namespace {

struct VarRef {
  std::string kind;
  int s = -1, v = -1, w = -1, n = -1, l = -1, p = -1;
};

int parse_index(const std::string& token, char tag, const std::string& name) {
  if (token.size() < 2 || token[0] != tag) throw ParseError("unknown variable '" + name + "'");
  int value = 0;
  auto res = std::from_chars(token.data() + 1, token.data() + token.size(), value);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size() || value < 0) {
    throw ParseError("unknown variable '" + name + "'");
  }
  return value;
}

VarRef parse_name(const std::string& name, const PhysicalNetwork& net,
                  const std::vector<SliceRequest>& slices) {
  std::vector<std::string> parts;
  std::stringstream ss(name);
  for (std::string part; std::getline(ss, part, '_');) parts.push_back(part);
  auto unknown = [&] { return ParseError("unknown variable '" + name + "'"); };
  if (parts.size() < 2) throw unknown();
  VarRef r;
  r.kind = parts[0];
  static const std::map<std::string, std::string> layouts = {
      {"pi", "s"}, {"xn", "svn"}, {"xl", "svwl"}, {"z", "svwl"}, {"y", "svw"}, {"th", "svp"}};
  auto it = layouts.find(r.kind);
  if (it == layouts.end() || parts.size() != it->second.size() + 1) throw unknown();
  for (std::size_t k = 0; k < it->second.size(); ++k) {
    char tag = it->second[k];
    int value = parse_index(parts[k + 1], tag, name);
    switch (tag) {
      case 's': r.s = value; break;
      case 'v': r.v = value; break;
      case 'w': r.w = value; break;
      case 'n': r.n = value; break;
      case 'l': r.l = value; break;
      case 'p': r.p = value; break;
    }
  }
  if (r.s >= static_cast<int>(slices.size())) throw unknown();
  const SliceRequest& slice = slices[r.s];
  if (r.v >= slice.size() || r.w >= slice.size()) throw unknown();
  if (r.n >= net.node_count() || r.l >= net.link_count()) throw unknown();
  if (r.p == 0 || r.p > slice.size()) throw unknown();
  if (r.w >= 0 && !slice.link_demands.contains({r.v, r.w})) throw unknown();
  return r;
}

// Orders a set of directed links into one walk from `from` to `to`
// (Hierholzer), taking the lowest link index first.
std::optional<Path> euler_walk(const PhysicalNetwork& net, const std::vector<LinkIndex>& edges,
                               NodeIndex from, NodeIndex to) {
  std::map<NodeIndex, std::vector<LinkIndex>> adj;
  std::map<NodeIndex, int> balance;
  for (LinkIndex l : edges) {
    adj[net.link(l).src].push_back(l);
    ++balance[net.link(l).src];
    --balance[net.link(l).dst];
  }
  for (auto& [node, list] : adj) std::sort(list.begin(), list.end());
  for (auto [node, b] : balance) {
    int want = (node == from ? 1 : 0) - (node == to ? 1 : 0);
    if (b != want) return std::nullopt;
  }
  if (from != to && !balance.contains(from)) return std::nullopt;
  std::map<NodeIndex, std::size_t> next;
  std::vector<std::pair<NodeIndex, LinkIndex>> stack{{from, -1}};
  Path walk;
  while (!stack.empty()) {
    auto [u, via] = stack.back();
    auto& list = adj[u];
    auto& k = next[u];
    if (k < list.size()) {
      LinkIndex l = list[k++];
      stack.push_back({net.link(l).dst, l});
    } else {
      stack.pop_back();
      if (via >= 0) walk.push_back(via);
    }
  }
  if (walk.size() != edges.size()) return std::nullopt;
  std::reverse(walk.begin(), walk.end());
  return walk;
}

}  // namespace

std::vector<AdmissionDecision> import_solution(const std::string& text,
                                               const PhysicalNetwork& net,
                                               const std::vector<SliceRequest>& slices) {
  const int count = static_cast<int>(slices.size());
  std::vector<char> pi(count, 0);
  std::vector<std::map<int, std::vector<NodeIndex>>> hosts(count);
  std::vector<std::map<int, std::vector<int>>> positions(count);
  std::vector<std::set<std::pair<int, int>>> chosen(count);
  std::vector<std::map<std::pair<int, int>, std::vector<LinkIndex>>> used(count);
  std::vector<int> nonzero(count, 0);
  std::set<std::string> seen;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string name, value_text, extra;
    if (!(ls >> name) || name[0] == '#') continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (!(ls >> value_text) || (ls >> extra)) {
      throw ParseError(where + "expected 'name value'");
    }
    double value = 0.0;
    auto res = std::from_chars(value_text.data(), value_text.data() + value_text.size(), value);
    if (res.ec != std::errc() || res.ptr != value_text.data() + value_text.size()) {
      throw ParseError(where + "bad value '" + value_text + "'");
    }
    VarRef r;
    try {
      r = parse_name(name, net, slices);
    } catch (const ParseError& e) {
      throw ParseError(where + e.what());
    }
    if (!seen.insert(name).second) throw ParseError(where + "duplicate variable '" + name + "'");
    bool one;
    if (std::fabs(value) <= 1e-6) {
      one = false;
    } else if (std::fabs(value - 1.0) <= 1e-6) {
      one = true;
    } else {
      throw ParseError(where + "binary variable '" + name + "' has value " + value_text);
    }
    if (!one) continue;
    if (r.kind == "pi") {
      pi[r.s] = 1;
      continue;
    }
    ++nonzero[r.s];
    if (r.kind == "xn") hosts[r.s][r.v].push_back(r.n);
    else if (r.kind == "th") positions[r.s][r.v].push_back(r.p);
    else if (r.kind == "y") chosen[r.s].insert({r.v, r.w});
    else if (r.kind == "xl") used[r.s][{r.v, r.w}].push_back(r.l);
  }

  std::vector<AdmissionDecision> out;
  for (int s = 0; s < count; ++s) {
    const SliceRequest& slice = slices[s];
    const std::string where = "slice '" + slice.id + "': ";
    if (!pi[s]) {
      if (nonzero[s]) throw ParseError(where + "rejected slice has mapping variables set");
      out.push_back(AdmissionDecision::rejected(slice.id));
      continue;
    }
    const int n = slice.size();
    Embedding emb;
    emb.slice_id = slice.id;
    emb.node_map.assign(n, -1);
    std::vector<int> order(n, -1);
    for (int v = 0; v < n; ++v) {
      const auto& h = hosts[s][v];
      if (h.size() != 1) throw ParseError(where + "VNF '" + slice.vnfs[v].id + "' needs one host");
      emb.node_map[v] = h[0];
      const auto& p = positions[s][v];
      if (p.size() != 1 || order[p[0] - 1] >= 0) {
        throw ParseError(where + "positions do not form a permutation");
      }
      order[p[0] - 1] = v;
    }
    std::optional<SliceConfiguration> config;
    for (auto& c : enumerate_configs(slice)) {
      if (c.order == order) config = std::move(c);
    }
    if (!config) throw ParseError(where + "order is not an admissible configuration");
    emb.config_id = config->id;
    auto chain = config->chain();
    if (std::set<std::pair<int, int>>(chain.begin(), chain.end()) != chosen[s]) {
      throw ParseError(where + "virtual links disagree with the positions");
    }
    for (const auto& [pair, links] : used[s]) {
      if (!chosen[s].contains(pair)) throw ParseError(where + "flow on an unused virtual link");
    }
    for (auto [v, w] : chain) {
      auto walk = euler_walk(net, used[s][{v, w}], emb.node_map[v], emb.node_map[w]);
      if (!walk || walk->empty()) {
        throw ParseError(where + "flow of virtual link " + slice.vnfs[v].id + "->" +
                         slice.vnfs[w].id + " is not a walk between its hosts");
      }
      emb.link_paths.push_back(VirtualLinkPath{v, w, std::move(*walk)});
    }
    out.push_back(AdmissionDecision::admitted(std::move(*config), std::move(emb)));
  }
  return out;
}

std::string encode_solution(const PhysicalNetwork& net, const std::vector<SliceRequest>& slices,
                            const std::vector<AdmissionDecision>& decisions) {
  if (slices.size() != decisions.size()) {
    throw ParameterError("encode_solution: slice and decision counts differ");
  }
  (void)net;
  std::ostringstream out;
  for (int s = 0; s < static_cast<int>(slices.size()); ++s) {
    const auto& d = decisions[s];
    if (!d.accepted) continue;
    out << pi_var(s) << " 1\n";
    const auto& emb = *d.embedding;
    for (int v = 0; v < static_cast<int>(emb.node_map.size()); ++v) {
      out << xn_var(s, v, emb.node_map[v]) << " 1\n";
    }
    for (int p = 0; p < static_cast<int>(d.config->order.size()); ++p) {
      out << th_var(s, d.config->order[p], p + 1) << " 1\n";
    }
    for (const auto& vp : emb.link_paths) {
      out << y_var(s, vp.from_vnf, vp.to_vnf) << " 1\n";
      for (LinkIndex l : vp.links) {
        out << xl_var(s, vp.from_vnf, vp.to_vnf, l) << " 1\n";
        out << z_var(s, vp.from_vnf, vp.to_vnf, l) << " 1\n";
      }
    }
  }
  return out.str();
}

}  // namespace flexslice
