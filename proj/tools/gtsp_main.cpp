// Command-line front end: instance generation, LP/IP solves, gap reports
// and LP-format export for graphical TSP instances.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "gtsp/branch_bound.hpp"
#include "gtsp/cuts.hpp"
#include "gtsp/formulation.hpp"
#include "gtsp/io.hpp"
#include "gtsp/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitLimit = 4;

struct SourceFlags {
  std::string graph_path;
  std::string instance_path;
  std::string gen_paths;  // "p,len,cost"
  std::string gen_cubic;  // "k4|petersen,times"
};

void add_source_flags(CLI::App* cmd, SourceFlags& src) {
  cmd->add_option("--graph", src.graph_path, "graph file");
  cmd->add_option("--instance", src.instance_path,
                  "instance file (default: all cities are destinations)");
  cmd->add_option("--gen-paths", src.gen_paths,
                  "generate a path configuration: <paths>,<len>[,<cost>]");
  cmd->add_option("--gen-cubic", src.gen_cubic,
                  "generate a subdivided cubic gadget: <k4|petersen>[,<times>]");
}

struct BuildFlags {
  std::string formulation = "yz";
  std::string subtour = "compact";
  std::string parity = "enum";
  bool tree = false;
  bool halfz = false;
  bool remove_steiner = false;
};

void add_build_flags(CLI::App* cmd, BuildFlags& flags) {
  cmd->add_option("--formulation", flags.formulation, "cfn|yz|dfj")
      ->check(CLI::IsMember({"cfn", "yz", "dfj"}));
  cmd->add_option("--subtour", flags.subtour, "compact|cuts")
      ->check(CLI::IsMember({"compact", "cuts"}));
  cmd->add_option("--parity", flags.parity, "enum|sep")
      ->check(CLI::IsMember({"enum", "sep"}));
  cmd->add_flag("--tree", flags.tree, "add spanning-tree domination rows");
  cmd->add_flag("--halfz", flags.halfz, "add half-z path cuts");
  cmd->add_flag("--remove-steiner", flags.remove_steiner,
                "contract Steiner nodes before solving");
}

gtsp::GeneratorSpec parse_generator(const SourceFlags& src) {
  gtsp::GeneratorSpec gen;
  if (!src.gen_paths.empty()) {
    gen.kind = gtsp::GeneratorSpec::Kind::Paths;
    if (std::sscanf(src.gen_paths.c_str(), "%d,%d,%lf", &gen.paths, &gen.len,
                    &gen.cost) < 2)
      throw gtsp::ParseError(0, "--gen-paths wants <paths>,<len>[,<cost>]");
  } else {
    gen.kind = gtsp::GeneratorSpec::Kind::Cubic;
    char base[32] = {0};
    if (std::sscanf(src.gen_cubic.c_str(), "%31[^,],%d", base, &gen.times) < 1)
      throw gtsp::ParseError(0, "--gen-cubic wants <k4|petersen>[,<times>]");
    const std::string base_name = base;
    if (base_name == "k4") gen.base = gtsp::CubicBase::K4;
    else if (base_name == "petersen") gen.base = gtsp::CubicBase::Petersen;
    else throw gtsp::ParseError(0, "unknown cubic base '" + base_name + "'");
  }
  return gen;
}

gtsp::RunConfig make_config(const SourceFlags& src, const BuildFlags& flags) {
  gtsp::RunConfig config;
  if (!src.gen_paths.empty() || !src.gen_cubic.empty())
    config.generator = parse_generator(src);
  config.graph_path = src.graph_path;
  config.instance_path = src.instance_path;
  config.remove_steiner = flags.remove_steiner;
  config.options.formulation = flags.formulation == "cfn"
                                   ? gtsp::Formulation::CFN
                                   : flags.formulation == "dfj"
                                         ? gtsp::Formulation::DFJ
                                         : gtsp::Formulation::YZ;
  config.options.subtour_mode = flags.subtour == "cuts"
                                    ? gtsp::SubtourMode::CuttingPlane
                                    : gtsp::SubtourMode::CompactFlow;
  config.options.parity_mode = flags.parity == "sep"
                                   ? gtsp::ParityMode::Separate
                                   : gtsp::ParityMode::Enumerate;
  config.options.include_tree = flags.tree;
  config.options.include_halfz = flags.halfz;
  return config;
}

gtsp::LinModel build_model(const gtsp::Instance& inst,
                           const gtsp::BuildOptions& options) {
  switch (options.formulation) {
    case gtsp::Formulation::CFN: return gtsp::build_cfn(inst, options);
    case gtsp::Formulation::DFJ: return gtsp::build_dfj(inst, options);
    case gtsp::Formulation::YZ: break;
  }
  return gtsp::build_yz(inst, options);
}

void write_instance_files(const gtsp::Instance& inst,
                          const std::string& graph_out,
                          const std::string& instance_out) {
  {
    std::ofstream out(graph_out);
    if (!out) throw std::runtime_error("cannot write " + graph_out);
    gtsp::serialize_graph(inst.graph, out);
  }
  if (instance_out.empty()) return;
  gtsp::InstanceSpec spec;
  spec.name = inst.name;
  for (gtsp::NodeId v : inst.destinations)
    spec.destination_names.push_back(inst.graph.node(v).name);
  spec.home_name = inst.graph.node(inst.home).name;
  std::ofstream out(instance_out);
  if (!out) throw std::runtime_error("cannot write " + instance_out);
  gtsp::serialize_instance_spec(spec, out);
}

int run_solve(const gtsp::RunConfig& config, bool ip, bool dump_cuts,
              bool show_walk) {
  const gtsp::Instance inst = gtsp::load_instance(config);
  gtsp::LinModel model = build_model(inst, config.options);

  if (!ip) {
    const auto res = gtsp::solve_relaxation(model, config.cut_limits);
    if (dump_cuts)
      for (const auto& cut : res.cuts) std::cerr << cut.describe() << "\n";
    if (res.hit_round_limit) {
      std::cerr << "cut loop hit its round limit\n";
      return kExitLimit;
    }
    if (res.solution.status != gtsp::LpStatus::Optimal) {
      std::cerr << "LP status: " << gtsp::to_string(res.solution.status) << "\n";
      return res.solution.status == gtsp::LpStatus::Infeasible ? kExitInfeasible
                                                               : kExitLimit;
    }
    std::cout << "objective " << res.solution.objective << "\n";
    return kExitOk;
  }

  const auto strategy = config.options.formulation == gtsp::Formulation::YZ
                            ? gtsp::BranchStrategy::YBranch
                            : gtsp::BranchStrategy::ParityBranch;
  const auto mip = gtsp::solve_mip(model, strategy, config.mip_limits);
  if (mip.status == gtsp::MipStatus::Infeasible) {
    std::cerr << "integer solve: infeasible\n";
    return kExitInfeasible;
  }
  if (mip.status == gtsp::MipStatus::GapLimit) {
    std::cerr << "integer solve: limit reached, bound " << mip.best_bound
              << " incumbent " << mip.objective << "\n";
    return kExitLimit;
  }
  std::cout << "objective " << mip.objective << " nodes " << mip.node_count
            << "\n";
  if (show_walk) {
    std::cout << "walk";
    for (gtsp::NodeId v : mip.walk)
      std::cout << ' ' << inst.graph.node(v).name;
    std::cout << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graphical TSP toolkit"};
  app.require_subcommand(1);

  // gen-paths
  auto* gen_paths = app.add_subcommand("gen-paths", "emit a path configuration");
  int gp_paths = 3, gp_len = 4;
  double gp_cost = 1.0;
  std::string gp_graph_out, gp_instance_out;
  gen_paths->add_option("--paths", gp_paths, "number of hub-to-hub paths");
  gen_paths->add_option("--len", gp_len, "edges per path");
  gen_paths->add_option("--cost", gp_cost, "cost per edge");
  gen_paths->add_option("--graph-out", gp_graph_out)->required();
  gen_paths->add_option("--instance-out", gp_instance_out);

  // gen-cubic
  auto* gen_cubic = app.add_subcommand("gen-cubic", "emit a subdivided gadget");
  std::string gc_base = "k4";
  int gc_times = 1;
  std::string gc_graph_out, gc_instance_out;
  gen_cubic->add_option("--base", gc_base)->check(CLI::IsMember({"k4", "petersen"}));
  gen_cubic->add_option("--times", gc_times, "subdivisions per edge (1 or 2)");
  gen_cubic->add_option("--graph-out", gc_graph_out)->required();
  gen_cubic->add_option("--instance-out", gc_instance_out);

  // solve
  auto* solve = app.add_subcommand("solve", "solve one relaxation or IP");
  SourceFlags solve_src;
  BuildFlags solve_flags;
  bool solve_ip = false, solve_dump_cuts = false, solve_walk = false;
  add_source_flags(solve, solve_src);
  add_build_flags(solve, solve_flags);
  solve->add_flag("--ip", solve_ip, "solve the integer program");
  solve->add_flag("--dump-cuts", solve_dump_cuts, "print added cuts to stderr");
  solve->add_flag("--show-walk", solve_walk, "print the closed walk");

  // gap
  auto* gap = app.add_subcommand("gap", "baseline-vs-y/z gap report");
  SourceFlags gap_src;
  BuildFlags gap_flags;
  std::string gap_output = "table";
  add_source_flags(gap, gap_src);
  add_build_flags(gap, gap_flags);
  gap->add_option("--output", gap_output)->check(CLI::IsMember({"table", "csv"}));

  // scatter
  auto* scatter = app.add_subcommand("scatter", "gap-closure scatter CSV");
  std::vector<std::string> scatter_gens;
  BuildFlags scatter_flags;
  scatter->add_option("--gen-paths", scatter_gens,
                      "path configuration <paths>,<len>[,<cost>] (repeatable)");
  add_build_flags(scatter, scatter_flags);

  // export-lp
  auto* export_cmd = app.add_subcommand("export-lp", "write the model as LP text");
  SourceFlags export_src;
  BuildFlags export_flags;
  std::string export_out;
  add_source_flags(export_cmd, export_src);
  add_build_flags(export_cmd, export_flags);
  export_cmd->add_option("--out", export_out, "output path (default stdout)");

  // steiner-remove
  auto* sr = app.add_subcommand("steiner-remove", "contract Steiner nodes");
  SourceFlags sr_src;
  std::string sr_graph_out, sr_instance_out;
  add_source_flags(sr, sr_src);
  sr->add_option("--graph-out", sr_graph_out)->required();
  sr->add_option("--instance-out", sr_instance_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_paths->parsed()) {
      write_instance_files(gtsp::gen_path_config(gp_paths, gp_len, gp_cost),
                           gp_graph_out, gp_instance_out);
      return kExitOk;
    }
    if (gen_cubic->parsed()) {
      const auto base = gc_base == "petersen" ? gtsp::CubicBase::Petersen
                                              : gtsp::CubicBase::K4;
      write_instance_files(gtsp::gen_subdivided_cubic(base, gc_times),
                           gc_graph_out, gc_instance_out);
      return kExitOk;
    }
    if (solve->parsed())
      return run_solve(make_config(solve_src, solve_flags), solve_ip,
                       solve_dump_cuts, solve_walk);
    if (gap->parsed()) {
      gtsp::RunConfig config = make_config(gap_src, gap_flags);
      config.mode = gtsp::SolveMode::Both;
      const gtsp::GapReport report = gtsp::run(config);
      if (gap_output == "csv")
        std::cout << gtsp::report_csv_header() << "\n"
                  << gtsp::report_csv_row(report) << "\n";
      else
        std::cout << gtsp::report_table(report);
      return kExitOk;
    }
    if (scatter->parsed()) {
      std::vector<gtsp::GapReport> reports;
      for (const std::string& spec : scatter_gens) {
        SourceFlags src;
        src.gen_paths = spec;
        gtsp::RunConfig config = make_config(src, scatter_flags);
        config.mode = gtsp::SolveMode::Both;
        reports.push_back(gtsp::run(config));
      }
      std::cout << gtsp::emit_scatter_data(reports);
      return kExitOk;
    }
    if (export_cmd->parsed()) {
      gtsp::RunConfig config = make_config(export_src, export_flags);
      const gtsp::Instance inst = gtsp::load_instance(config);
      gtsp::LinModel model = build_model(inst, config.options);
      if (export_out.empty())
        gtsp::export_lp(model, std::cout);
      else
        gtsp::export_lp_file(model, export_out);
      return kExitOk;
    }
    if (sr->parsed()) {
      gtsp::RunConfig config = make_config(sr_src, BuildFlags{});
      config.remove_steiner = false;
      const gtsp::Instance reduced =
          gtsp::remove_steiner(gtsp::load_instance(config));
      write_instance_files(reduced, sr_graph_out, sr_instance_out);
      return kExitOk;
    }
  } catch (const gtsp::ParseError& err) {
    std::cerr << "parse error: " << err.what() << "\n";
    return kExitParse;
  } catch (const std::exception& err) {
    const std::string what = err.what();
    std::cerr << "error: " << what << "\n";
    if (what.find("infeasible") != std::string::npos) return kExitInfeasible;
    if (what.find("limit") != std::string::npos) return kExitLimit;
    return kExitParse;
  }
  return kExitOk;
}
