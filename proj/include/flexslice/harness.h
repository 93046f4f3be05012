#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flexslice/model.h"

namespace flexslice {

enum class Setting { kK1Only, kK2Only, kFlexible };
enum class Algorithm { kExact, kBnb, kBfn };

// Accepts "k1", "k1-only", "k2", "k2-only", "flex", "flexible".
Setting parse_setting(const std::string& text);
Algorithm parse_algorithm(const std::string& text);
std::string to_string(Setting setting);
std::string to_string(Algorithm algorithm);

struct ScenarioSpec {
  std::string name = "scenario";
  std::string topology = "2-ary";        // preset name or graph file
  std::string slice_template = "video";  // "video" or a template file
  int replicas = 15;
  // Per-replica multiplier of every demand: empty = 1, one value = all
  // replicas, otherwise one value per replica.
  std::vector<double> demand_scale;
  Setting setting = Setting::kFlexible;
  Algorithm algorithm = Algorithm::kBnb;
  std::optional<int> beta;  // BnB* only; nullopt = unlimited
  std::uint64_t seed = 1;   // BFN only
  double gamma = 0.999;
  double rho1 = 0.5;
  double rho2 = 0.5;
};

// Reads a spec object; absent fields keep their defaults. Throws
// ConfigurationError for unknown fields or values.
ScenarioSpec spec_from_json(const std::string& document);

// Slice template document:
//   {"id": "video",
//    "vnfs": [{"id": "IDPS", "compute": 2, "storage": 4}, ...],
//    "fixed": {"IDPS": 1, ...},
//    "link_demands": [{"from": "IDPS", "to": "VOC", "bandwidth": 2}, ...]}
// Node demands are read for each axis name. Throws ParseError.
SliceRequest load_slice_template(const std::string& document,
                                 const std::vector<std::string>& axes);

// |S| copies of the template named by the spec, ids "<id>-<r>", scaled and
// pinned per the setting. Throws ConfigurationError when unresolvable.
std::vector<SliceRequest> instantiate_slices(const ScenarioSpec& spec,
                                             const std::vector<std::string>& axes);

struct ScenarioReport {
  ScenarioResult result;
  std::string json;     // deterministic; no timings
  std::string csv_row;  // includes wall time
};

// Resolves topology and template, solves, re-validates every accepted
// embedding and renders the report. Throws ConfigurationError before solving
// when the spec cannot be resolved, and Error if validation fails.
ScenarioReport run_scenario(const ScenarioSpec& spec);

// Same on an explicit network and already instantiated slices (the slices'
// positions should already reflect the setting).
ScenarioReport run_scenario(const ScenarioSpec& spec, const PhysicalNetwork& net,
                            const std::vector<SliceRequest>& slices);

std::string csv_header();

// Schema "flexslice.report/1"; returns the list of problems (empty = valid).
std::vector<std::string> validate_report_json(const std::string& document);

struct ComparisonRow {
  std::string name;
  Setting setting;
  Algorithm algorithm;
  std::optional<int> beta;
  int slices = 0;
  int accepted = 0;
  std::optional<double> acceptance_rate;
  double objective = 0.0;
  double wall_time_s = 0.0;
  std::map<int, int> per_config_counts;
};

// Runs each spec on the same instance. Throws ConfigurationError when the
// specs disagree on topology, template, replica count or demand scaling.
std::vector<ComparisonRow> compare_settings(const std::vector<ScenarioSpec>& specs);
std::string comparison_csv(const std::vector<ComparisonRow>& rows);

// A specs document is either an array of spec objects or
// {"base": {...}, "variants": [{...}, ...]} with variants overriding base.
std::vector<ScenarioSpec> specs_from_json(const std::string& document);

}  // namespace flexslice
