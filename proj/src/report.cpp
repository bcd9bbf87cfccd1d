#include "gtsp/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "gtsp/formulation.hpp"

namespace gtsp {

namespace {

std::string fmt(double v, const char* spec = "%.10g") {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

double percent_with_z(const LinModel& model, const LpSolution& sol) {
  const EdgeVector x = model.edge_values(VarKind::X, sol.primal);
  const EdgeVector z = model.edge_values(VarKind::Z, sol.primal);
  int support = 0, with_z = 0;
  for (EdgeId e = 0; e < x.size(); ++e) {
    if (x[e] <= 1e-7) continue;
    ++support;
    if (z[e] > 1e-7) ++with_z;
  }
  return support == 0 ? 0.0 : 100.0 * with_z / support;
}

}  // namespace

Instance load_instance(const RunConfig& config) {
  const bool from_files = !config.graph_path.empty();
  if (from_files == config.generator.has_value())
    throw std::invalid_argument(
        "exactly one instance source (files or generator) must be given");
  Instance inst;
  if (from_files) {
    const SparseGraph graph = parse_graph_file(config.graph_path);
    if (config.instance_path.empty()) {
      // No instance file: every city is a destination, last one is home.
      InstanceSpec spec;
      spec.name = config.graph_path;
      for (const Node& v : graph.nodes())
        spec.destination_names.push_back(v.name);
      spec.home_name = spec.destination_names.back();
      inst = build_instance(graph, spec);
    } else {
      inst = build_instance(graph, parse_instance_spec_file(config.instance_path));
    }
  } else {
    const GeneratorSpec& gen = *config.generator;
    inst = gen.kind == GeneratorSpec::Kind::Paths
               ? gen_path_config(gen.paths, gen.len, gen.cost)
               : gen_subdivided_cubic(gen.base, gen.times);
  }
  if (config.remove_steiner) inst = remove_steiner(inst);
  return inst;
}

GapReport run(const RunConfig& config) {
  return run_on_instance(load_instance(config), config.options, config.mode,
                         config.mip_limits, config.cut_limits);
}

GapReport run_on_instance(const Instance& inst, const BuildOptions& options,
                          SolveMode mode, const MipLimits& mip_limits,
                          const CutLoopLimits& cut_limits) {
  GapReport report;
  report.name = inst.name;
  report.destinations = inst.destination_count();
  report.steiner = static_cast<int>(inst.steiners.size());
  report.edges_with_steiner = inst.graph.edge_count();
  report.edges_without_steiner =
      inst.steiners.empty() ? inst.graph.edge_count()
                            : remove_steiner(inst).graph.edge_count();

  const bool want_lp = mode != SolveMode::Ip;
  const bool want_ip = mode != SolveMode::Relax;
  const bool want_cfn =
      mode == SolveMode::Both || options.formulation == Formulation::CFN;
  const bool want_yz =
      mode == SolveMode::Both || options.formulation == Formulation::YZ;

  if (want_lp && want_cfn) {
    LinModel cfn = build_cfn(inst, options);
    const auto res = solve_relaxation(cfn, cut_limits);
    if (res.solution.status != LpStatus::Optimal)
      throw std::runtime_error(std::string("CFN relaxation: ") +
                               to_string(res.solution.status));
    report.lp_cfn = res.solution.objective;
  }
  if (want_lp && want_yz) {
    LinModel yz = build_yz(inst, options);
    const auto res = solve_relaxation(yz, cut_limits);
    if (res.solution.status != LpStatus::Optimal)
      throw std::runtime_error(std::string("y/z relaxation: ") +
                               to_string(res.solution.status));
    report.lp_yz = res.solution.objective;
    report.z_edge_pct = percent_with_z(yz, res.solution);
  }
  if (want_ip) {
    const bool use_yz = options.formulation != Formulation::CFN;
    LinModel model =
        use_yz ? build_yz(inst, options) : build_cfn(inst, options);
    const MipSolution mip = solve_mip(
        model, use_yz ? BranchStrategy::YBranch : BranchStrategy::ParityBranch,
        mip_limits);
    if (mip.status == MipStatus::Infeasible)
      throw std::runtime_error("integer solve: infeasible");
    if (mip.status == MipStatus::GapLimit)
      throw std::runtime_error("integer solve: limit reached with bound " +
                               std::to_string(mip.best_bound));
    report.ip = mip.objective;
  }

  if (want_ip && want_lp && !std::isnan(report.lp_yz)) {
    report.gap_abs = report.ip - report.lp_yz;
    report.gap_pct = report.ip != 0 ? 100.0 * report.gap_abs / report.ip : 0.0;
    if (!std::isnan(report.lp_cfn)) {
      const double base_gap = report.ip - report.lp_cfn;
      if (base_gap <= 1e-6)
        report.closure_pct =
            report.gap_abs <= 1e-6 ? 100.0
                                   : -std::numeric_limits<double>::infinity();
      else
        report.closure_pct = 100.0 * (base_gap - report.gap_abs) / base_gap;
    }
  }
  return report;
}

std::string report_csv_header() {
  return "name,destinations,steiner,lp_cfn,lp_yz,ip,gap_abs,gap_pct,"
         "closure_pct,z_edge_pct";
}

std::string report_csv_row(const GapReport& r) {
  std::ostringstream os;
  os << r.name << ',' << r.destinations << ',' << r.steiner << ','
     << fmt(r.lp_cfn) << ',' << fmt(r.lp_yz) << ',' << fmt(r.ip) << ','
     << fmt(r.gap_abs) << ',' << fmt(r.gap_pct, "%.2f") << ','
     << fmt(r.closure_pct, "%.2f") << ',' << fmt(r.z_edge_pct, "%.2f");
  return os.str();
}

std::string report_table(const GapReport& r) {
  std::ostringstream os;
  os << "instance        " << r.name << "\n"
     << "destinations    " << r.destinations << " (+" << r.steiner
     << " Steiner)\n"
     << "edges           " << r.edges_with_steiner << " ("
     << r.edges_without_steiner << " after Steiner removal)\n";
  if (!std::isnan(r.lp_cfn)) os << "LP (CFN)        " << fmt(r.lp_cfn) << "\n";
  if (!std::isnan(r.lp_yz)) os << "LP (y/z)        " << fmt(r.lp_yz) << "\n";
  if (!std::isnan(r.ip)) os << "IP              " << fmt(r.ip) << "\n";
  if (!std::isnan(r.gap_abs))
    os << "gap             " << fmt(r.gap_abs) << " (" << fmt(r.gap_pct, "%.2f")
       << "%)\n";
  if (!std::isnan(r.closure_pct))
    os << "gap closed      " << fmt(r.closure_pct, "%.2f") << "%\n";
  if (!std::isnan(r.z_edge_pct))
    os << "z-positive      " << fmt(r.z_edge_pct, "%.2f")
       << "% of support edges\n";
  return os.str();
}

std::string emit_scatter_data(const std::vector<GapReport>& reports) {
  std::ostringstream os;
  os << "name,closure_pct,z_edge_pct,destinations\n";
  for (const GapReport& r : reports)
    os << r.name << ',' << fmt(r.closure_pct, "%.2f") << ','
       << fmt(r.z_edge_pct, "%.2f") << ',' << r.destinations << "\n";
  return os.str();
}

}  // namespace gtsp
