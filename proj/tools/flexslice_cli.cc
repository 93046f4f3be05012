// Command-line front end: topology inspection, scenario runs, LP export and
// setting comparisons.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "flexslice/configs.h"
#include "flexslice/exact.h"
#include "flexslice/harness.h"
#include "flexslice/topology.h"

using namespace flexslice;

namespace {

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigurationError("cannot write '" + path + "'");
  out << text;
}

void append_csv(const std::string& path, const std::string& row) {
  const bool fresh = !std::filesystem::exists(path);
  std::ofstream out(path, std::ios::app);
  if (!out) throw ConfigurationError("cannot write '" + path + "'");
  if (fresh) out << csv_header() << '\n';
  out << row << '\n';
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_summary(const PhysicalNetwork& net) {
  std::cout << "nodes " << net.node_count() << "\nlinks " << net.link_count() << '\n';
}

struct SpecFlags {
  ScenarioSpec spec;
  std::string setting = "flex";
  std::string algo = "bnb";
  std::string beta = "inf";
  std::vector<double> scale;

  void add(CLI::App* cmd, bool with_algo) {
    cmd->add_option("--topology", spec.topology, "preset name or graph file")->capture_default_str();
    cmd->add_option("--slices", spec.slice_template, "slice template file or 'video'")
        ->capture_default_str();
    cmd->add_option("--replicas", spec.replicas, "number of slice copies")->capture_default_str();
    cmd->add_option("--demand-scale", scale, "one factor, or one per replica");
    cmd->add_option("--setting", setting, "k1 | k2 | flex")->capture_default_str();
    cmd->add_option("--gamma", spec.gamma)->capture_default_str();
    cmd->add_option("--name", spec.name)->capture_default_str();
    if (with_algo) {
      cmd->add_option("--algo", algo, "exact | bnb | bfn")->capture_default_str();
      cmd->add_option("--beta", beta, "BnB* branch limit or 'inf'")->capture_default_str();
      cmd->add_option("--seed", spec.seed, "BFN tie-break seed")->capture_default_str();
      cmd->add_option("--rho1", spec.rho1)->capture_default_str();
      cmd->add_option("--rho2", spec.rho2)->capture_default_str();
    }
  }

  ScenarioSpec resolve() {
    spec.setting = parse_setting(setting);
    spec.algorithm = parse_algorithm(algo);
    if (beta == "inf") {
      spec.beta.reset();
    } else {
      try {
        spec.beta = std::stoi(beta);
      } catch (const std::exception&) {
        throw ConfigurationError("bad --beta '" + beta + "'");
      }
    }
    spec.demand_scale = scale;
    return spec;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Network slice admission and embedding with flexible VNF order"};
  app.require_subcommand(1);

  auto* topo = app.add_subcommand("topo", "inspect topologies");
  topo->require_subcommand(1);
  std::string preset, gen_out, load_file;
  auto* gen = topo->add_subcommand("gen", "generate a preset topology");
  gen->add_option("preset", preset, "2-ary | 6-ary | abilene | cost266")->required();
  gen->add_option("--out", gen_out, "write the graph document here");
  auto* load = topo->add_subcommand("load", "load a graph document");
  load->add_option("file", load_file)->required();

  SpecFlags solve_flags;
  std::string solve_out = "-", solve_csv;
  auto* solve = app.add_subcommand("solve", "run one scenario");
  solve_flags.add(solve, true);
  solve->add_option("--out", solve_out, "report JSON path")->capture_default_str();
  solve->add_option("--csv", solve_csv, "append a CSV row here");

  SpecFlags lp_flags;
  std::string lp_out = "-";
  std::optional<double> big_m;
  auto* export_lp_cmd = app.add_subcommand("export-lp", "write the linearized model");
  lp_flags.add(export_lp_cmd, false);
  export_lp_cmd->add_option("--big-m", big_m, "override both big-M constants");
  export_lp_cmd->add_option("--out", lp_out, "LP file path")->capture_default_str();

  SpecFlags import_flags;
  std::string solution_file, import_out = "-";
  auto* import_cmd = app.add_subcommand("import-solution", "validate a MILP solution");
  import_flags.add(import_cmd, false);
  import_cmd->add_option("solution", solution_file, "'name value' lines")->required();
  import_cmd->add_option("--out", import_out, "decision summary path")->capture_default_str();

  std::string specs_file, compare_out = "-";
  auto* compare = app.add_subcommand("compare", "run several settings on one instance");
  compare->add_option("--specs", specs_file, "specs JSON")->required();
  compare->add_option("--out", compare_out, "table CSV path")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (topo->parsed()) {
      if (gen->parsed()) {
        PhysicalNetwork net = load_topology(preset);
        if (!gen_out.empty()) write_text(gen_out, serialize_graph(net));
        print_summary(net);
      } else {
        print_summary(load_graph_file(load_file));
      }
    } else if (solve->parsed()) {
      auto report = run_scenario(solve_flags.resolve());
      write_text(solve_out, report.json);
      if (!solve_csv.empty()) append_csv(solve_csv, report.csv_row);
    } else if (export_lp_cmd->parsed()) {
      auto spec = lp_flags.resolve();
      PhysicalNetwork net = load_topology(spec.topology);
      auto slices = instantiate_slices(spec, net.axes());
      if (spec.setting != Setting::kFlexible) {
        const int k = spec.setting == Setting::kK1Only ? 1 : 2;
        for (auto& s : slices) {
          auto configs = enumerate_configs(s);
          if (static_cast<int>(configs.size()) < k) throw ConfigurationError("no configuration k2");
          s = pin_to_configuration(s, configs[k - 1]);
        }
      }
      write_text(lp_out, export_lp(net, slices, spec.gamma, big_m));
    } else if (import_cmd->parsed()) {
      auto spec = import_flags.resolve();
      PhysicalNetwork net = load_topology(spec.topology);
      auto slices = instantiate_slices(spec, net.axes());
      auto decisions = import_solution(read_text(solution_file), net, slices);
      auto check = validate_embedding(net, slices, decisions);
      std::ostringstream os;
      for (const auto& d : decisions) {
        os << d.slice_id << ' ' << (d.accepted ? "accepted k" + std::to_string(*d.config_id())
                                               : std::string("rejected"))
           << '\n';
      }
      os << "objective " << objective_value(decisions, spec.gamma) << '\n';
      for (const auto& v : check.violations) {
        os << "violation " << to_string(v.kind) << ' ' << v.slice_id << ": " << v.detail << '\n';
      }
      write_text(import_out, os.str());
      return check.ok() ? 0 : 1;
    } else if (compare->parsed()) {
      auto rows = compare_settings(specs_from_json(read_text(specs_file)));
      write_text(compare_out, comparison_csv(rows));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
