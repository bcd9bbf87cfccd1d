#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gtsp/graph.hpp"
#include "gtsp/model.hpp"

namespace gtsp {

struct ParseError : std::runtime_error {
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line(line) {}
  int line;
};

/// Graph file grammar (one record per line, `#` starts a comment):
///   nodes <N> edges <M>
///   node <index> <name>     x N, indices 0..N-1 in order
///   edge <name-u> <name-v> <miles>   x M, miles a positive integer
SparseGraph parse_graph(std::istream& in);
SparseGraph parse_graph_file(const std::string& path);
void serialize_graph(const SparseGraph& graph, std::ostream& out);

/// Instance file: `instance <name> [home <city>]` then one `dest <city>`
/// per line. Home defaults to the last destination.
struct InstanceSpec {
  std::string name;
  std::vector<std::string> destination_names;
  std::string home_name;  // empty -> last destination
};

InstanceSpec parse_instance_spec(std::istream& in);
InstanceSpec parse_instance_spec_file(const std::string& path);
void serialize_instance_spec(const InstanceSpec& spec, std::ostream& out);

/// Restricts the graph to the named destinations plus every node on a
/// chosen shortest path between two of them (those become Steiner nodes).
Instance build_instance(const SparseGraph& graph, const InstanceSpec& spec);

/// Two hubs joined by `num_paths` internally disjoint paths of `path_len`
/// edges each, every edge costing `edge_cost`; all nodes destinations and
/// hub 1 is home.
Instance gen_path_config(int num_paths, int path_len, double edge_cost);

enum class CubicBase : std::uint8_t { K4, Petersen, Custom };

/// Subdivides a 3-regular base graph `times` times per edge; unit costs,
/// all nodes destinations.
Instance gen_subdivided_cubic(CubicBase base, int times,
                              const std::vector<std::pair<int, int>>&
                                  custom_edges = {});

SparseGraph make_k4();
SparseGraph make_petersen();

/// Writes the model in LP text format (objective, named rows, bounds,
/// integer sections); numerals carry 17 significant digits.
void export_lp(const LinModel& model, std::ostream& out);
void export_lp_file(const LinModel& model, const std::string& path);

}  // namespace gtsp
