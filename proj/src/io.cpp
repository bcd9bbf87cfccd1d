#include "gtsp/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace gtsp {

namespace {

bool is_comment_or_blank(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

long parse_positive_int(const std::string& token, int line,
                        const std::string& what) {
  std::size_t pos = 0;
  long value = 0;
  try {
    value = std::stol(token, &pos);
  } catch (const std::exception&) {
    throw ParseError(line, what + " is not an integer: '" + token + "'");
  }
  if (pos != token.size())
    throw ParseError(line, what + " is not an integer: '" + token + "'");
  if (value < 1) throw ParseError(line, what + " must be >= 1");
  return value;
}

}  // namespace

SparseGraph parse_graph(std::istream& in) {
  SparseGraph graph;
  std::map<std::string, NodeId> by_name;
  std::string line;
  int line_no = 0;
  long want_nodes = -1, want_edges = -1;
  long seen_nodes = 0, seen_edges = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "nodes") {
      std::string nodes_tok, edges_kw, edges_tok;
      if (!(ls >> nodes_tok >> edges_kw >> edges_tok) || edges_kw != "edges")
        throw ParseError(line_no, "expected 'nodes <N> edges <M>'");
      want_nodes = parse_positive_int(nodes_tok, line_no, "node count");
      want_edges = edges_tok == "0" ? 0
                                    : parse_positive_int(edges_tok, line_no,
                                                         "edge count");
    } else if (tag == "node") {
      std::string index_tok, name;
      if (!(ls >> index_tok >> name))
        throw ParseError(line_no, "expected 'node <index> <name>'");
      long index = 0;
      try {
        index = std::stol(index_tok);
      } catch (const std::exception&) {
        throw ParseError(line_no, "bad node index '" + index_tok + "'");
      }
      if (index != seen_nodes)
        throw ParseError(line_no, "node indices must run 0,1,... in order");
      if (by_name.count(name))
        throw ParseError(line_no, "duplicate node name '" + name + "'");
      by_name[name] = graph.add_node(name);
      ++seen_nodes;
    } else if (tag == "edge") {
      std::string u, v, miles_tok;
      if (!(ls >> u >> v >> miles_tok))
        throw ParseError(line_no, "expected 'edge <u> <v> <miles>'");
      const auto iu = by_name.find(u);
      const auto iv = by_name.find(v);
      if (iu == by_name.end())
        throw ParseError(line_no, "edge endpoint '" + u + "' is not a declared node");
      if (iv == by_name.end())
        throw ParseError(line_no, "edge endpoint '" + v + "' is not a declared node");
      const long miles = parse_positive_int(miles_tok, line_no, "miles");
      if (iu->second == iv->second)
        throw ParseError(line_no, "self-loop on '" + u + "'");
      graph.add_edge(iu->second, iv->second, static_cast<double>(miles));
      ++seen_edges;
    } else {
      throw ParseError(line_no, "unknown record '" + tag + "'");
    }
  }
  if (want_nodes < 0) throw ParseError(line_no, "missing 'nodes N edges M' header");
  if (seen_nodes != want_nodes)
    throw ParseError(line_no, "declared " + std::to_string(want_nodes) +
                                  " nodes, found " + std::to_string(seen_nodes));
  if (seen_edges != want_edges)
    throw ParseError(line_no, "declared " + std::to_string(want_edges) +
                                  " edges, found " + std::to_string(seen_edges));
  return graph;
}

SparseGraph parse_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  return parse_graph(in);
}

void serialize_graph(const SparseGraph& graph, std::ostream& out) {
  out << "nodes " << graph.node_count() << " edges " << graph.edge_count()
      << "\n";
  for (const Node& v : graph.nodes())
    out << "node " << v.id << ' ' << v.name << "\n";
  for (const Edge& e : graph.edges())
    out << "edge " << graph.node(e.u).name << ' ' << graph.node(e.v).name << ' '
        << static_cast<long long>(std::llround(e.cost)) << "\n";
}

InstanceSpec parse_instance_spec(std::istream& in) {
  InstanceSpec spec;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "instance") {
      if (have_header) throw ParseError(line_no, "repeated instance header");
      have_header = true;
      if (!(ls >> spec.name))
        throw ParseError(line_no, "expected 'instance <name> [home <city>]'");
      std::string kw;
      if (ls >> kw) {
        if (kw != "home" || !(ls >> spec.home_name))
          throw ParseError(line_no, "expected 'home <city>' after instance name");
      }
    } else if (tag == "dest") {
      std::string name;
      if (!(ls >> name)) throw ParseError(line_no, "expected 'dest <city>'");
      spec.destination_names.push_back(name);
    } else {
      throw ParseError(line_no, "unknown record '" + tag + "'");
    }
  }
  if (!have_header) throw ParseError(line_no, "missing instance header");
  if (spec.destination_names.empty())
    throw ParseError(line_no, "instance lists no destinations");
  if (spec.home_name.empty()) spec.home_name = spec.destination_names.back();
  return spec;
}

InstanceSpec parse_instance_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  return parse_instance_spec(in);
}

void serialize_instance_spec(const InstanceSpec& spec, std::ostream& out) {
  out << "instance " << spec.name;
  if (!spec.home_name.empty()) out << " home " << spec.home_name;
  out << "\n";
  for (const auto& name : spec.destination_names) out << "dest " << name << "\n";
}

Instance build_instance(const SparseGraph& graph, const InstanceSpec& spec) {
  std::map<std::string, NodeId> by_name;
  for (const Node& v : graph.nodes()) by_name[v.name] = v.id;

  std::vector<NodeId> dests;
  std::vector<char> is_dest(graph.node_count(), 0);
  for (const auto& name : spec.destination_names) {
    const auto it = by_name.find(name);
    if (it == by_name.end())
      throw std::runtime_error("unknown city '" + name + "'");
    if (is_dest[it->second])
      throw std::runtime_error("duplicate destination '" + name + "'");
    is_dest[it->second] = 1;
    dests.push_back(it->second);
  }
  const auto home_it = by_name.find(spec.home_name);
  if (home_it == by_name.end())
    throw std::runtime_error("unknown home city '" + spec.home_name + "'");
  if (!is_dest[home_it->second])
    throw std::runtime_error("home city is not a destination");

  // Keep destinations plus everything on the canonical shortest path
  // between each ordered destination pair.
  std::vector<char> keep = is_dest;
  for (NodeId a : dests) {
    const auto tree = shortest_path_tree(graph, a);
    for (NodeId b : dests) {
      if (a == b) continue;
      if (!tree.reached(b))
        throw std::runtime_error("destinations '" + graph.node(a).name +
                                 "' and '" + graph.node(b).name +
                                 "' are disconnected");
      for (NodeId v : tree_path(graph, tree, b)) keep[v] = 1;
    }
  }

  SparseGraph sub;
  std::vector<NodeId> new_id(graph.node_count(), kNoNode);
  for (NodeId v = 0; v < graph.node_count(); ++v)
    if (keep[v])
      new_id[v] = sub.add_node(graph.node(v).name,
                               is_dest[v] ? NodeKind::Destination
                                          : NodeKind::Steiner);
  for (const Edge& e : graph.edges())
    if (keep[e.u] && keep[e.v]) sub.add_edge(new_id[e.u], new_id[e.v], e.cost);

  return make_instance(std::move(sub), new_id[home_it->second], spec.name);
}

Instance gen_path_config(int num_paths, int path_len, double edge_cost) {
  if (num_paths < 3) throw std::invalid_argument("need at least 3 paths");
  if (path_len < 1) throw std::invalid_argument("path length must be >= 1");
  if (!(edge_cost > 0)) throw std::invalid_argument("edge cost must be positive");

  SparseGraph g;
  const NodeId hub1 = g.add_node("hub1");
  const NodeId hub2 = g.add_node("hub2");
  for (int p = 1; p <= num_paths; ++p) {
    NodeId prev = hub1;
    for (int i = 1; i < path_len; ++i) {
      const NodeId mid =
          g.add_node("p" + std::to_string(p) + "_" + std::to_string(i));
      g.add_edge(prev, mid, edge_cost);
      prev = mid;
    }
    g.add_edge(prev, hub2, edge_cost);
  }
  Instance inst = make_instance(std::move(g), hub1,
                                std::to_string(num_paths) + "path" +
                                    std::to_string(path_len));
  return inst;
}

SparseGraph make_k4() {
  SparseGraph g;
  for (int i = 0; i < 4; ++i) g.add_node("n" + std::to_string(i));
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) g.add_edge(i, j, 1.0);
  return g;
}

SparseGraph make_petersen() {
  SparseGraph g;
  for (int i = 0; i < 10; ++i) g.add_node("n" + std::to_string(i));
  for (int i = 0; i < 5; ++i) g.add_edge(i, (i + 1) % 5, 1.0);  // outer cycle
  for (int i = 0; i < 5; ++i) g.add_edge(i, i + 5, 1.0);        // spokes
  const int star[5] = {5, 7, 9, 6, 8};                          // inner 5-star
  for (int i = 0; i < 5; ++i) g.add_edge(star[i], star[(i + 1) % 5], 1.0);
  return g;
}

Instance gen_subdivided_cubic(CubicBase base, int times,
                              const std::vector<std::pair<int, int>>&
                                  custom_edges) {
  if (times != 1 && times != 2)
    throw std::invalid_argument("subdivision times must be 1 or 2");
  SparseGraph g;
  std::string name;
  switch (base) {
    case CubicBase::K4: g = make_k4(); name = "k4"; break;
    case CubicBase::Petersen: g = make_petersen(); name = "petersen"; break;
    case CubicBase::Custom: {
      int n = 0;
      for (auto [u, v] : custom_edges) n = std::max({n, u + 1, v + 1});
      for (int i = 0; i < n; ++i) g.add_node("n" + std::to_string(i));
      for (auto [u, v] : custom_edges) g.add_edge(u, v, 1.0);
      name = "custom";
      break;
    }
  }
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (g.degree(v) != 3)
      throw std::invalid_argument("base graph is not 3-regular at node " +
                                  std::to_string(v));
  SparseGraph sub = subdivide_all_edges(g, times, /*keep_unit_costs=*/true,
                                        /*mark_destinations=*/true);
  return make_instance(std::move(sub), 0,
                       name + "_sub" + std::to_string(times));
}

namespace {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Writes ` <+|-> <coef> <var>` terms, wrapping lines near 200 columns.
class TermWriter {
 public:
  explicit TermWriter(std::ostream& out) : out_(out) {}

  void term(double coef, const std::string& var) {
    std::string piece;
    piece += coef < 0 ? " - " : (first_ ? " " : " + ");
    piece += format_number(std::abs(coef));
    piece += ' ';
    piece += var;
    if (width_ + piece.size() > 200) {
      out_ << "\n ";
      width_ = 1;
    }
    out_ << piece;
    width_ += piece.size();
    first_ = false;
  }

  void finish() { out_ << "\n"; }

 private:
  std::ostream& out_;
  std::size_t width_ = 0;
  bool first_ = true;
};

}  // namespace

void export_lp(const LinModel& model, std::ostream& out) {
  out << "Minimize\n obj:";
  TermWriter obj(out);
  for (int j = 0; j < model.column_count(); ++j)
    if (model.column(j).objective != 0.0)
      obj.term(model.column(j).objective, model.column(j).ref.to_string());
  obj.finish();

  out << "Subject To\n";
  for (const Row& row : model.rows()) {
    out << ' ' << row.name << ':';
    TermWriter terms(out);
    for (auto [col, coef] : row.coeffs)
      terms.term(coef, model.column(col).ref.to_string());
    switch (row.sense) {
      case RowSense::LE: out << " <= "; break;
      case RowSense::GE: out << " >= "; break;
      case RowSense::EQ: out << " = "; break;
    }
    out << format_number(row.rhs) << "\n";
  }

  out << "Bounds\n";
  for (const Column& c : model.columns()) {
    const std::string name = c.ref.to_string();
    if (!std::isfinite(c.lower) && !std::isfinite(c.upper))
      out << ' ' << name << " free\n";
    else if (c.lower == c.upper)
      out << ' ' << name << " = " << format_number(c.lower) << "\n";
    else if (!std::isfinite(c.upper))
      out << ' ' << name << " >= " << format_number(c.lower) << "\n";
    else if (!std::isfinite(c.lower))
      out << ' ' << name << " <= " << format_number(c.upper) << "\n";
    else
      out << ' ' << format_number(c.lower) << " <= " << name
          << " <= " << format_number(c.upper) << "\n";
  }

  std::vector<std::string> binaries, generals;
  for (const Column& c : model.columns()) {
    if (!c.integral) continue;
    if (c.lower == 0.0 && c.upper == 1.0)
      binaries.push_back(c.ref.to_string());
    else
      generals.push_back(c.ref.to_string());
  }
  if (!binaries.empty()) {
    out << "Binaries\n";
    for (const auto& name : binaries) out << ' ' << name << "\n";
  }
  if (!generals.empty()) {
    out << "Generals\n";
    for (const auto& name : generals) out << ' ' << name << "\n";
  }
  out << "End\n";
}

void export_lp_file(const LinModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open LP file for writing: " + path);
  export_lp(model, out);
  if (!out) throw std::runtime_error("failed writing LP file: " + path);
}

}  // namespace gtsp
