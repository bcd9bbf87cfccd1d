#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gtsp/branch_bound.hpp"
#include "gtsp/cuts.hpp"
#include "gtsp/formulation.hpp"
#include "gtsp/io.hpp"
#include "gtsp/report.hpp"
#include "gtsp/simplex.hpp"

namespace py = pybind11;
using namespace gtsp;

namespace {

EdgeVector to_edge_vector(const Instance& inst, const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != inst.graph.edge_count())
    throw std::invalid_argument("edge vector size mismatch");
  EdgeVector out(inst.graph.edge_count());
  out.values = v;
  return out;
}

BuildOptions make_options(const std::string& formulation,
                          const std::string& subtour, const std::string& parity,
                          bool tree, bool halfz, int enumerate_cap) {
  BuildOptions opts;
  if (formulation == "cfn") opts.formulation = Formulation::CFN;
  else if (formulation == "yz") opts.formulation = Formulation::YZ;
  else if (formulation == "dfj") opts.formulation = Formulation::DFJ;
  else throw std::invalid_argument("formulation must be cfn|yz|dfj");
  if (subtour == "compact") opts.subtour_mode = SubtourMode::CompactFlow;
  else if (subtour == "cuts") opts.subtour_mode = SubtourMode::CuttingPlane;
  else throw std::invalid_argument("subtour must be compact|cuts");
  if (parity == "enum") opts.parity_mode = ParityMode::Enumerate;
  else if (parity == "sep") opts.parity_mode = ParityMode::Separate;
  else throw std::invalid_argument("parity must be enum|sep");
  opts.include_tree = tree;
  opts.include_halfz = halfz;
  opts.enumerate_cap = enumerate_cap;
  return opts;
}

}  // namespace

PYBIND11_MODULE(_gtsp, m) {
  m.doc() = "graphical TSP toolkit: formulations, LP engine, cutting planes, "
            "branch and bound";

  py::enum_<NodeKind>(m, "NodeKind")
      .value("Destination", NodeKind::Destination)
      .value("Steiner", NodeKind::Steiner);

  py::class_<SparseGraph>(m, "SparseGraph")
      .def(py::init<>())
      .def("add_node", &SparseGraph::add_node, py::arg("name"),
           py::arg("kind") = NodeKind::Destination)
      .def("add_edge", &SparseGraph::add_edge, py::arg("u"), py::arg("v"),
           py::arg("cost"))
      .def_property_readonly("node_count", &SparseGraph::node_count)
      .def_property_readonly("edge_count", &SparseGraph::edge_count)
      .def("node_name", [](const SparseGraph& g, NodeId v) { return g.node(v).name; })
      .def("edge", [](const SparseGraph& g, EdgeId e) {
        return py::make_tuple(g.edge(e).u, g.edge(e).v, g.edge(e).cost);
      })
      .def("degree", &SparseGraph::degree)
      .def("max_degree", &SparseGraph::max_degree);

  py::class_<Instance>(m, "Instance")
      .def_readonly("graph", &Instance::graph)
      .def_readonly("destinations", &Instance::destinations)
      .def_readonly("steiners", &Instance::steiners)
      .def_readonly("home", &Instance::home)
      .def_readonly("name", &Instance::name)
      .def("validate", &Instance::validate);

  py::class_<BuildOptions>(m, "BuildOptions")
      .def(py::init(&make_options), py::arg("formulation") = "yz",
           py::arg("subtour") = "compact", py::arg("parity") = "enum",
           py::arg("tree") = false, py::arg("halfz") = false,
           py::arg("enumerate_cap") = 10);

  py::class_<LinModel>(m, "LinModel")
      .def_property_readonly("column_count", &LinModel::column_count)
      .def_property_readonly("row_count", &LinModel::row_count)
      .def("to_lp_text", [](const LinModel& model) {
        std::ostringstream os;
        export_lp(model, os);
        return os.str();
      });

  m.def("gen_path_config", &gen_path_config, py::arg("num_paths"),
        py::arg("path_len"), py::arg("edge_cost") = 1.0);
  m.def(
      "gen_subdivided_cubic",
      [](const std::string& base, int times) {
        if (base == "k4") return gen_subdivided_cubic(CubicBase::K4, times);
        if (base == "petersen")
          return gen_subdivided_cubic(CubicBase::Petersen, times);
        throw std::invalid_argument("base must be k4|petersen");
      },
      py::arg("base"), py::arg("times") = 1);
  m.def("parse_graph", [](const std::string& text) {
    std::istringstream in(text);
    return parse_graph(in);
  });
  m.def("build_instance",
        [](const SparseGraph& graph, const std::vector<std::string>& dests,
           const std::string& home, const std::string& name) {
          InstanceSpec spec;
          spec.name = name;
          spec.destination_names = dests;
          spec.home_name = home.empty() ? dests.back() : home;
          return build_instance(graph, spec);
        },
        py::arg("graph"), py::arg("destinations"), py::arg("home") = "",
        py::arg("name") = "instance");
  m.def("remove_steiner",
        [](const Instance& inst) { return remove_steiner(inst); });
  m.def("shortest_paths", [](const SparseGraph& g, NodeId source) {
    const auto tree = shortest_path_tree(g, source);
    return py::make_tuple(tree.dist, tree.parent_edge);
  });
  m.def("check_even_connected",
        [](const Instance& inst, const std::vector<double>& x) {
          const auto v = check_even_connected(inst, to_edge_vector(inst, x));
          return py::make_tuple(v.ok, v.describe());
        });
  m.def("euler_walk", [](const Instance& inst, const std::vector<double>& x) {
    return euler_walk(inst, to_edge_vector(inst, x));
  });

  m.def("build_cfn", &build_cfn, py::keep_alive<0, 1>(), py::arg("instance"),
        py::arg("options") = BuildOptions{.formulation = Formulation::CFN});
  m.def("build_yz", &build_yz, py::keep_alive<0, 1>(), py::arg("instance"),
        py::arg("options") = BuildOptions{});
  m.def("build_dfj", &build_dfj, py::keep_alive<0, 1>(), py::arg("instance"),
        py::arg("options") = BuildOptions{.formulation = Formulation::DFJ});

  m.def("solve_lp", [](const LinModel& model) {
    const LpSolution sol = solve_lp(model);
    py::dict out;
    out["status"] = to_string(sol.status);
    out["objective"] = sol.objective;
    out["primal"] = sol.primal;
    out["iterations"] = sol.iterations;
    return out;
  });
  m.def("solve_relaxation", [](LinModel& model) {
    const auto res = solve_relaxation(model);
    py::dict out;
    out["status"] = to_string(res.solution.status);
    out["objective"] = res.solution.objective;
    out["cuts"] = res.cuts.size();
    out["rounds"] = res.rounds;
    return out;
  });
  m.def(
      "solve_mip",
      [](const LinModel& model, const std::string& strategy, long max_nodes,
         double time_limit) {
        MipLimits limits;
        limits.max_nodes = max_nodes;
        limits.time_limit_sec = time_limit;
        const auto strat = strategy == "parity" ? BranchStrategy::ParityBranch
                                                : BranchStrategy::YBranch;
        const MipSolution sol = solve_mip(model, strat, limits);
        py::dict out;
        out["status"] = to_string(sol.status);
        out["objective"] = sol.objective;
        out["x"] = sol.x.values;
        out["y"] = sol.y.values;
        out["z"] = sol.z.values;
        out["walk"] = sol.walk;
        out["nodes"] = sol.node_count;
        out["best_bound"] = sol.best_bound;
        return out;
      },
      py::arg("model"), py::arg("strategy") = "y", py::arg("max_nodes") = 2000000,
      py::arg("time_limit") = 1e18);
  m.def("heuristic_tour", [](const Instance& inst) {
    const MipSolution sol = heuristic_tour(inst);
    return py::make_tuple(sol.objective, sol.x.values, sol.walk);
  });
  m.def("certify_solution",
        [](const Instance& inst, const std::vector<double>& y,
           const std::vector<double>& z) {
          const Certificate cert =
              certify_solution(inst, to_edge_vector(inst, y),
                               to_edge_vector(inst, z));
          py::dict out;
          out["tree_edges"] = cert.tree_edges;
          out["x"] = cert.x.values;
          out["walk"] = cert.walk;
          return out;
        });

  m.def(
      "gap_report",
      [](const Instance& inst, const BuildOptions& options, bool ip) {
        const GapReport r = run_on_instance(
            inst, options, ip ? SolveMode::Both : SolveMode::Relax);
        py::dict out;
        out["name"] = r.name;
        out["destinations"] = r.destinations;
        out["steiner"] = r.steiner;
        out["lp_cfn"] = r.lp_cfn;
        out["lp_yz"] = r.lp_yz;
        out["ip"] = r.ip;
        out["gap_abs"] = r.gap_abs;
        out["gap_pct"] = r.gap_pct;
        out["closure_pct"] = r.closure_pct;
        out["z_edge_pct"] = r.z_edge_pct;
        return out;
      },
      py::arg("instance"), py::arg("options"), py::arg("ip") = true);
}
