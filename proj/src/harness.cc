#include "flexslice/harness.h"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "flexslice/bfn.h"
#include "flexslice/bnb.h"
#include "flexslice/configs.h"
#include "flexslice/exact.h"
#include "flexslice/topology.h"
#include "json.hpp"

namespace flexslice {

using nlohmann::json;

namespace {

constexpr const char* kSchema = "flexslice.report/1";

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string per_config_text(const std::map<int, int>& counts) {
  std::string out;
  for (auto [k, c] : counts) {
    if (!out.empty()) out += ';';
    out += "k" + std::to_string(k) + ":" + std::to_string(c);
  }
  return out;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

void check_spec(const ScenarioSpec& spec) {
  if (spec.replicas < 0) throw ConfigurationError("replicas must be >= 0");
  if (spec.beta && *spec.beta < 1) throw ConfigurationError("beta must be >= 1");
  if (!(spec.gamma >= 0.0 && spec.gamma <= 1.0)) throw ConfigurationError("gamma must lie in [0, 1]");
  if (!(spec.rho1 >= 0.0) || !(spec.rho2 >= 0.0)) {
    throw ConfigurationError("rho weights must be non-negative");
  }
  if (spec.demand_scale.size() > 1 &&
      spec.demand_scale.size() != static_cast<std::size_t>(spec.replicas)) {
    throw ConfigurationError("demand_scale needs one value or one per replica");
  }
  for (double f : spec.demand_scale) {
    if (!(f > 0.0)) throw ConfigurationError("demand_scale values must be positive");
  }
}

void apply_field(ScenarioSpec& spec, const std::string& key, const json& value) {
  try {
    if (key == "name") {
      spec.name = value.get<std::string>();
    } else if (key == "topology") {
      spec.topology = value.get<std::string>();
    } else if (key == "slices" || key == "template") {
      spec.slice_template = value.get<std::string>();
    } else if (key == "replicas") {
      spec.replicas = value.get<int>();
    } else if (key == "demand_scale") {
      spec.demand_scale.clear();
      if (value.is_array()) {
        for (const auto& f : value) spec.demand_scale.push_back(f.get<double>());
      } else {
        spec.demand_scale.push_back(value.get<double>());
      }
    } else if (key == "setting") {
      spec.setting = parse_setting(value.get<std::string>());
    } else if (key == "algorithm" || key == "algo") {
      spec.algorithm = parse_algorithm(value.get<std::string>());
    } else if (key == "beta") {
      if (value.is_null() || (value.is_string() && value.get<std::string>() == "inf")) {
        spec.beta.reset();
      } else {
        spec.beta = value.get<int>();
      }
    } else if (key == "seed") {
      spec.seed = value.get<std::uint64_t>();
    } else if (key == "gamma") {
      spec.gamma = value.get<double>();
    } else if (key == "rho1") {
      spec.rho1 = value.get<double>();
    } else if (key == "rho2") {
      spec.rho2 = value.get<double>();
    } else {
      throw ConfigurationError("unknown spec field '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigurationError("spec field '" + key + "': " + e.what());
  }
}

ScenarioSpec spec_from_object(const json& obj, ScenarioSpec spec) {
  if (!obj.is_object()) throw ConfigurationError("spec must be a JSON object");
  for (const auto& [key, value] : obj.items()) apply_field(spec, key, value);
  return spec;
}

json parse_json(const std::string& document, const char* what) {
  try {
    return json::parse(document);
  } catch (const json::parse_error& e) {
    throw ConfigurationError(std::string(what) + ": " + e.what());
  }
}

SliceRequest scaled(const SliceRequest& slice, double f) {
  SliceRequest out = slice;
  for (auto& vnf : out.vnfs) {
    for (double& d : vnf.demand) d *= f;
  }
  for (auto& [pair, bw] : out.link_demands) bw *= f;
  return out;
}

json decision_json(const PhysicalNetwork& net, const SliceRequest& slice,
                   const AdmissionDecision& d) {
  json j;
  j["slice"] = d.slice_id;
  j["accepted"] = d.accepted;
  j["config"] = d.config ? json(d.config->id) : json(nullptr);
  json placement = json::array();
  json paths = json::array();
  if (d.accepted) {
    for (int v : d.config->order) {
      placement.push_back({{"vnf", slice.vnfs[v].id},
                           {"node", net.node(d.embedding->node_map[v]).id}});
    }
    for (const auto& vp : d.embedding->link_paths) {
      json hops = json::array();
      for (LinkIndex l : vp.links) {
        hops.push_back({net.node(net.link(l).src).id, net.node(net.link(l).dst).id});
      }
      paths.push_back({{"from", slice.vnfs[vp.from_vnf].id},
                       {"to", slice.vnfs[vp.to_vnf].id},
                       {"links", std::move(hops)}});
    }
  }
  j["placement"] = std::move(placement);
  j["paths"] = std::move(paths);
  return j;
}

std::string render_json(const ScenarioSpec& spec, const PhysicalNetwork& net,
                        const std::vector<SliceRequest>& slices, const ScenarioResult& result) {
  json j;
  j["schema"] = kSchema;
  j["scenario"] = {{"name", spec.name},
                   {"topology", spec.topology},
                   {"template", spec.slice_template},
                   {"replicas", spec.replicas},
                   {"setting", to_string(spec.setting)},
                   {"algorithm", to_string(spec.algorithm)},
                   {"beta", spec.beta ? json(*spec.beta) : json(nullptr)},
                   {"seed", spec.seed},
                   {"gamma", spec.gamma},
                   {"rho1", spec.rho1},
                   {"rho2", spec.rho2}};
  j["network"] = {{"nodes", net.node_count()}, {"links", net.link_count()}};
  json counts = json::object();
  for (auto [k, c] : result.per_config_counts) counts[std::to_string(k)] = c;
  j["summary"] = {{"slices", result.decisions.size()},
                  {"accepted", result.accepted_count()},
                  {"acceptance_rate", result.acceptance_rate ? json(*result.acceptance_rate)
                                                             : json(nullptr)},
                  {"objective", result.objective},
                  {"link_usage", total_link_usage(result.decisions)},
                  {"per_config_counts", std::move(counts)}};
  json decisions = json::array();
  for (std::size_t k = 0; k < slices.size(); ++k) {
    decisions.push_back(decision_json(net, slices[k], result.decisions[k]));
  }
  j["decisions"] = std::move(decisions);
  return j.dump(2) + "\n";
}

std::string render_csv(const ScenarioSpec& spec, const ScenarioResult& r) {
  std::ostringstream os;
  os << spec.name << ',' << spec.topology << ',' << spec.slice_template << ',' << spec.replicas
     << ',' << to_string(spec.setting) << ',' << to_string(spec.algorithm) << ','
     << (spec.beta ? std::to_string(*spec.beta) : "inf") << ',' << spec.seed << ','
     << fmt(spec.gamma) << ',' << r.decisions.size() << ',' << r.accepted_count() << ','
     << (r.acceptance_rate ? fmt(*r.acceptance_rate) : "") << ',' << fmt(r.objective) << ','
     << total_link_usage(r.decisions) << ',' << fmt(r.wall_time_s) << ','
     << per_config_text(r.per_config_counts);
  return os.str();
}

}  // namespace

Setting parse_setting(const std::string& text) {
  if (text == "k1" || text == "k1-only") return Setting::kK1Only;
  if (text == "k2" || text == "k2-only") return Setting::kK2Only;
  if (text == "flex" || text == "flexible") return Setting::kFlexible;
  throw ConfigurationError("unknown setting '" + text + "'");
}

Algorithm parse_algorithm(const std::string& text) {
  if (text == "exact") return Algorithm::kExact;
  if (text == "bnb") return Algorithm::kBnb;
  if (text == "bfn") return Algorithm::kBfn;
  throw ConfigurationError("unknown algorithm '" + text + "'");
}

std::string to_string(Setting setting) {
  switch (setting) {
    case Setting::kK1Only: return "k1-only";
    case Setting::kK2Only: return "k2-only";
    case Setting::kFlexible: return "flexible";
  }
  return "?";
}

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kExact: return "exact";
    case Algorithm::kBnb: return "bnb";
    case Algorithm::kBfn: return "bfn";
  }
  return "?";
}

ScenarioSpec spec_from_json(const std::string& document) {
  ScenarioSpec spec = spec_from_object(parse_json(document, "spec"), ScenarioSpec{});
  check_spec(spec);
  return spec;
}

std::vector<ScenarioSpec> specs_from_json(const std::string& document) {
  json doc = parse_json(document, "specs");
  std::vector<ScenarioSpec> out;
  if (doc.is_array()) {
    for (const auto& item : doc) out.push_back(spec_from_object(item, ScenarioSpec{}));
    for (const auto& spec : out) check_spec(spec);
    return out;
  }
  if (!doc.is_object() || !doc.contains("base") || !doc.contains("variants")) {
    throw ConfigurationError("specs: expected an array or {base, variants}");
  }
  ScenarioSpec base = spec_from_object(doc["base"], ScenarioSpec{});
  for (const auto& item : doc["variants"]) out.push_back(spec_from_object(item, base));
  for (const auto& spec : out) check_spec(spec);
  return out;
}

SliceRequest load_slice_template(const std::string& document,
                                 const std::vector<std::string>& axes) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("slice template: ") + e.what());
  }
  SliceRequest slice;
  try {
    slice.id = doc.value("id", std::string("slice"));
    if (!doc.contains("vnfs") || !doc["vnfs"].is_array() || doc["vnfs"].empty()) {
      throw ParseError("slice template: 'vnfs' must be a non-empty array");
    }
    for (std::size_t k = 0; k < doc["vnfs"].size(); ++k) {
      const auto& item = doc["vnfs"][k];
      Vnf vnf;
      vnf.id = item.at("id").get<std::string>();
      for (const auto& axis : axes) {
        if (!item.contains(axis)) {
          throw ParseError("slice template: vnfs[" + std::to_string(k) + "] lacks '" + axis + "'");
        }
        vnf.demand.push_back(item[axis].get<double>());
      }
      slice.vnfs.push_back(std::move(vnf));
    }
    auto vnf_index = [&](const std::string& id) {
      auto v = slice.find_vnf(id);
      if (!v) throw ParseError("slice template: unknown VNF '" + id + "'");
      return *v;
    };
    if (doc.contains("fixed")) {
      for (const auto& [id, pos] : doc["fixed"].items()) {
        slice.fixed_positions[vnf_index(id)] = pos.get<int>();
      }
    }
    if (doc.contains("link_demands")) {
      for (std::size_t k = 0; k < doc["link_demands"].size(); ++k) {
        const auto& item = doc["link_demands"][k];
        auto key = std::make_pair(vnf_index(item.at("from").get<std::string>()),
                                  vnf_index(item.at("to").get<std::string>()));
        if (!slice.link_demands.emplace(key, item.at("bandwidth").get<double>()).second) {
          throw ParseError("slice template: link_demands[" + std::to_string(k) + "] is a duplicate");
        }
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("slice template: ") + e.what());
  }
  try {
    check_slice(slice);
  } catch (const SpecificationError& e) {
    throw ParseError(std::string("slice template: ") + e.what());
  }
  return slice;
}

std::vector<SliceRequest> instantiate_slices(const ScenarioSpec& spec,
                                             const std::vector<std::string>& axes) {
  check_spec(spec);
  std::string path = spec.slice_template == "video" ? data_path("video_slice.json")
                                                    : spec.slice_template;
  if (!std::filesystem::exists(path)) {
    throw ConfigurationError("unknown slice template '" + spec.slice_template + "'");
  }
  SliceRequest base = load_slice_template(read_file(path), axes);
  std::vector<SliceRequest> out;
  for (int r = 0; r < spec.replicas; ++r) {
    double f = 1.0;
    if (spec.demand_scale.size() == 1) f = spec.demand_scale[0];
    if (spec.demand_scale.size() > 1) f = spec.demand_scale[r];
    SliceRequest s = scaled(base, f);
    s.id = base.id + "-" + std::to_string(r + 1);
    out.push_back(std::move(s));
  }
  return out;
}

ScenarioReport run_scenario(const ScenarioSpec& spec, const PhysicalNetwork& net,
                            const std::vector<SliceRequest>& slices) {
  check_spec(spec);
  // Fixed settings pin every VNF to configuration k of the slice; solvers then
  // see a single configuration, and decisions are relabelled with k.
  std::vector<SliceRequest> solver_slices;
  std::vector<std::optional<SliceConfiguration>> pinned(slices.size());
  for (std::size_t k = 0; k < slices.size(); ++k) {
    if (spec.setting == Setting::kFlexible) {
      solver_slices.push_back(slices[k]);
      continue;
    }
    const int want = spec.setting == Setting::kK1Only ? 1 : 2;
    ConfigEnumerator it(slices[k]);
    for (int c = 0; c < want; ++c) pinned[k] = it.next();
    if (!pinned[k]) {
      throw ConfigurationError("slice '" + slices[k].id + "' has no configuration k" +
                               std::to_string(want));
    }
    solver_slices.push_back(pin_to_configuration(slices[k], *pinned[k]));
  }

  ScenarioResult result;
  const auto start = std::chrono::steady_clock::now();
  switch (spec.algorithm) {
    case Algorithm::kExact:
      result.decisions = brute_force(net, solver_slices, spec.gamma).decisions;
      break;
    case Algorithm::kBnb: {
      bnb::BnbOptions options;
      options.beta = spec.beta;
      options.weights = {spec.rho1, spec.rho2};
      result = bnb::solve_all(net, solver_slices, options, spec.gamma);
      break;
    }
    case Algorithm::kBfn:
      result = bfn::solve_all(net, solver_slices, spec.seed, spec.gamma);
      break;
  }
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  for (std::size_t k = 0; k < slices.size(); ++k) {
    auto& d = result.decisions[k];
    if (pinned[k] && d.accepted) {
      d.config = *pinned[k];
      d.embedding->config_id = pinned[k]->id;
    }
  }
  summarize(result, spec.gamma);

  auto report = validate_embedding(net, slices, result.decisions);
  if (!report.ok()) {
    const auto& v = report.violations.front();
    throw Error("scenario '" + spec.name + "': solver output violates " + to_string(v.kind) +
                " (" + v.detail + ")");
  }
  ScenarioReport out;
  out.json = render_json(spec, net, slices, result);
  out.csv_row = render_csv(spec, result);
  out.result = std::move(result);
  return out;
}

ScenarioReport run_scenario(const ScenarioSpec& spec) {
  check_spec(spec);
  PhysicalNetwork net = load_topology(spec.topology);
  auto slices = instantiate_slices(spec, net.axes());
  return run_scenario(spec, net, slices);
}

std::string csv_header() {
  return "name,topology,template,replicas,setting,algorithm,beta,seed,gamma,slices,accepted,"
         "acceptance_rate,objective,link_usage,wall_time_s,per_config";
}

std::vector<std::string> validate_report_json(const std::string& document) {
  std::vector<std::string> problems;
  json j;
  try {
    j = json::parse(document);
  } catch (const json::parse_error& e) {
    return {std::string("not JSON: ") + e.what()};
  }
  auto need = [&](const json& obj, const char* key, auto pred, const char* what) {
    if (!obj.is_object() || !obj.contains(key) || !pred(obj[key])) {
      problems.push_back(std::string("'") + key + "' must be " + what);
      return false;
    }
    return true;
  };
  auto is_string = [](const json& v) { return v.is_string(); };
  auto is_count = [](const json& v) { return v.is_number_unsigned(); };
  auto is_number = [](const json& v) { return v.is_number(); };
  auto is_object = [](const json& v) { return v.is_object(); };
  auto is_array = [](const json& v) { return v.is_array(); };

  if (!j.is_object()) return {"report must be an object"};
  if (need(j, "schema", is_string, "a string") && j["schema"] != kSchema) {
    problems.push_back("unsupported schema '" + j["schema"].get<std::string>() + "'");
  }
  if (need(j, "scenario", is_object, "an object")) {
    const auto& s = j["scenario"];
    for (const char* key : {"name", "topology", "template", "setting", "algorithm"}) {
      need(s, key, is_string, "a string");
    }
    need(s, "replicas", is_count, "a count");
    need(s, "gamma", is_number, "a number");
    need(s, "beta", [](const json& v) { return v.is_null() || v.is_number_unsigned(); },
         "null or a count");
  }
  if (need(j, "network", is_object, "an object")) {
    need(j["network"], "nodes", is_count, "a count");
    need(j["network"], "links", is_count, "a count");
  }
  bool summary_ok = need(j, "summary", is_object, "an object");
  if (summary_ok) {
    const auto& s = j["summary"];
    summary_ok = need(s, "slices", is_count, "a count") & need(s, "accepted", is_count, "a count") &
                 need(s, "acceptance_rate", [](const json& v) { return v.is_null() || v.is_number(); },
                      "null or a number") &
                 need(s, "objective", is_number, "a number") &
                 need(s, "link_usage", is_count, "a count") &
                 need(s, "per_config_counts", is_object, "an object");
  }
  if (!need(j, "decisions", is_array, "an array")) return problems;
  int accepted = 0;
  long hops = 0;
  std::map<std::string, long> counts;
  for (std::size_t k = 0; k < j["decisions"].size(); ++k) {
    const auto& d = j["decisions"][k];
    const std::string where = "decisions[" + std::to_string(k) + "]";
    if (!d.is_object() || !d.contains("slice") || !d["slice"].is_string() ||
        !d.contains("accepted") || !d["accepted"].is_boolean() || !d.contains("config") ||
        !d.contains("placement") || !d["placement"].is_array() || !d.contains("paths") ||
        !d["paths"].is_array()) {
      problems.push_back(where + " is malformed");
      continue;
    }
    if (d["accepted"].get<bool>()) {
      ++accepted;
      if (!d["config"].is_number_unsigned() || d["placement"].empty()) {
        problems.push_back(where + " is accepted without a configuration or placement");
        continue;
      }
      ++counts[std::to_string(d["config"].get<unsigned>())];
      for (const auto& p : d["paths"]) {
        if (p.is_object() && p.contains("links") && p["links"].is_array()) hops += p["links"].size();
      }
    } else if (!d["config"].is_null() || !d["placement"].empty() || !d["paths"].empty()) {
      problems.push_back(where + " is rejected but carries an embedding");
    }
  }
  if (summary_ok) {
    const auto& s = j["summary"];
    const auto total = j["decisions"].size();
    if (s["slices"].get<std::size_t>() != total) problems.push_back("summary.slices mismatch");
    if (s["accepted"].get<int>() != accepted) problems.push_back("summary.accepted mismatch");
    if (total == 0) {
      if (!s["acceptance_rate"].is_null()) problems.push_back("acceptance_rate must be null");
    } else if (s["acceptance_rate"].is_null() ||
               std::fabs(s["acceptance_rate"].get<double>() -
                         static_cast<double>(accepted) / total) > 1e-12) {
      problems.push_back("acceptance_rate is not accepted/slices");
    }
    if (s["link_usage"].get<long>() != hops) problems.push_back("summary.link_usage mismatch");
    std::map<std::string, long> listed;
    for (const auto& [k, v] : s["per_config_counts"].items()) {
      listed[k] = v.is_number_unsigned() ? v.get<long>() : -1;
    }
    if (listed != counts) problems.push_back("per_config_counts disagree with decisions");
    if (j.contains("scenario") && j["scenario"].is_object() && j["scenario"].contains("gamma") &&
        j["scenario"]["gamma"].is_number()) {
      double gamma = j["scenario"]["gamma"].get<double>();
      double expect = gamma * accepted - (1.0 - gamma) * hops;
      if (std::fabs(s["objective"].get<double>() - expect) > 1e-9) {
        problems.push_back("objective is inconsistent with decisions");
      }
    }
  }
  return problems;
}

std::vector<ComparisonRow> compare_settings(const std::vector<ScenarioSpec>& specs) {
  std::vector<ComparisonRow> rows;
  if (specs.empty()) return rows;
  const ScenarioSpec& base = specs.front();
  for (const auto& spec : specs) {
    check_spec(spec);
    if (spec.topology != base.topology) {
      throw ConfigurationError("compare: topology '" + spec.topology + "' differs from '" +
                               base.topology + "'");
    }
    if (spec.slice_template != base.slice_template || spec.replicas != base.replicas ||
        spec.demand_scale != base.demand_scale) {
      throw ConfigurationError("compare: spec '" + spec.name + "' uses a different slice set");
    }
  }
  PhysicalNetwork net = load_topology(base.topology);
  auto slices = instantiate_slices(base, net.axes());
  for (const auto& spec : specs) {
    auto report = run_scenario(spec, net, slices);
    ComparisonRow row;
    row.name = spec.name;
    row.setting = spec.setting;
    row.algorithm = spec.algorithm;
    row.beta = spec.beta;
    row.slices = static_cast<int>(report.result.decisions.size());
    row.accepted = report.result.accepted_count();
    row.acceptance_rate = report.result.acceptance_rate;
    row.objective = report.result.objective;
    row.wall_time_s = report.result.wall_time_s;
    row.per_config_counts = report.result.per_config_counts;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::ostringstream os;
  os << "name,setting,algorithm,beta,slices,accepted,acceptance_rate,objective,wall_time_s,"
        "per_config\n";
  for (const auto& r : rows) {
    os << r.name << ',' << to_string(r.setting) << ',' << to_string(r.algorithm) << ','
       << (r.beta ? std::to_string(*r.beta) : "inf") << ',' << r.slices << ',' << r.accepted << ','
       << (r.acceptance_rate ? fmt(*r.acceptance_rate) : "") << ',' << fmt(r.objective) << ','
       << fmt(r.wall_time_s) << ',' << per_config_text(r.per_config_counts) << '\n';
  }
  return os.str();
}

}  // namespace flexslice
