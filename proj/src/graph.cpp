#include "gtsp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <tuple>

namespace gtsp {

NodeId SparseGraph::add_node(std::string name, NodeKind kind) {
  const NodeId id = node_count();
  nodes_.push_back(Node{id, std::move(name), kind});
  adjacency_.emplace_back();
  return id;
}

EdgeId SparseGraph::add_edge(NodeId u, NodeId v, double cost) {
  if (u < 0 || u >= node_count() || v < 0 || v >= node_count())
    throw std::invalid_argument("edge endpoint out of range");
  if (u == v) throw std::invalid_argument("self-loops are not allowed");
  if (!(cost >= 0.0))
    throw std::invalid_argument("edge costs must be nonnegative");
  const EdgeId id = edge_count();
  edges_.push_back(Edge{id, u, v, cost});
  adjacency_[u].push_back(id);
  adjacency_[v].push_back(id);
  return id;
}

int SparseGraph::max_degree() const {
  int d = 0;
  for (NodeId v = 0; v < node_count(); ++v) d = std::max(d, degree(v));
  return d;
}

NodeId SparseGraph::other_end(EdgeId e, NodeId v) const {
  const Edge& ed = edges_.at(e);
  if (ed.u == v) return ed.v;
  if (ed.v == v) return ed.u;
  throw std::invalid_argument("node is not an endpoint of edge");
}

bool SparseGraph::has_integer_costs() const {
  for (const Edge& e : edges_) {
    if (e.cost != std::floor(e.cost) || std::abs(e.cost) > 1e15) return false;
  }
  return true;
}

void Instance::validate() const {
  const int n = graph.node_count();
  std::vector<char> seen(n, 0);
  if (destinations.empty())
    throw std::invalid_argument("instance has no destinations");
  for (NodeId v : destinations) {
    if (v < 0 || v >= n || seen[v])
      throw std::invalid_argument("bad destination list");
    if (graph.node(v).kind != NodeKind::Destination)
      throw std::invalid_argument("destination node not marked Destination");
    seen[v] = 1;
  }
  for (NodeId v : steiners) {
    if (v < 0 || v >= n || seen[v]) throw std::invalid_argument("bad Steiner list");
    if (graph.node(v).kind != NodeKind::Steiner)
      throw std::invalid_argument("Steiner node not marked Steiner");
    seen[v] = 1;
  }
  for (NodeId v = 0; v < n; ++v)
    if (!seen[v]) throw std::invalid_argument("node missing from instance partition");
  if (home < 0 || home >= n || graph.node(home).kind != NodeKind::Destination)
    throw std::invalid_argument("home must be a destination node");

  // Connectivity over the full edge set.
  if (n > 0) {
    std::vector<char> visited(n, 0);
    std::queue<NodeId> q;
    q.push(0);
    visited[0] = 1;
    int count = 1;
    while (!q.empty()) {
      NodeId v = q.front();
      q.pop();
      for (EdgeId e : graph.incident(v)) {
        NodeId w = graph.other_end(e, v);
        if (!visited[w]) {
          visited[w] = 1;
          ++count;
          q.push(w);
        }
      }
    }
    if (count != n)
      throw std::invalid_argument("instance graph is not connected");
  }
}

Instance make_instance(SparseGraph graph, NodeId home, std::string name) {
  Instance inst;
  inst.graph = std::move(graph);
  inst.name = std::move(name);
  for (NodeId v = 0; v < inst.graph.node_count(); ++v) {
    if (inst.graph.node(v).kind == NodeKind::Destination)
      inst.destinations.push_back(v);
    else
      inst.steiners.push_back(v);
  }
  inst.home = (home == kNoNode && !inst.destinations.empty())
                  ? inst.destinations.back()
                  : home;
  inst.validate();
  return inst;
}

ShortestPathTree shortest_path_tree(const SparseGraph& graph, NodeId source) {
  const int n = graph.node_count();
  ShortestPathTree out;
  out.source = source;
  out.dist.assign(n, ShortestPathTree::unreachable());
  out.parent_edge.assign(n, kNoEdge);
  std::vector<int> hops(n, 0);
  std::vector<char> settled(n, 0);

  using Item = std::pair<double, NodeId>;  // (dist, node); lower id pops first
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  out.dist[source] = 0.0;
  heap.push({0.0, source});

  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (settled[v]) continue;
    settled[v] = 1;
    for (EdgeId e : graph.incident(v)) {
      const NodeId w = graph.other_end(e, v);
      if (settled[w]) continue;
      const double nd = d + graph.edge(e).cost;
      const bool unreached = out.dist[w] == ShortestPathTree::unreachable() &&
                             w != source;
      if (unreached || nd < out.dist[w]) {
        out.dist[w] = nd;
        out.parent_edge[w] = e;
        hops[w] = hops[v] + 1;
        heap.push({nd, w});
      } else if (nd == out.dist[w] && out.parent_edge[w] != kNoEdge) {
        // Canonical tie-break: fewer hops, then lower parent node id.
        const NodeId cur_parent =
            graph.other_end(out.parent_edge[w], w);
        if (std::make_pair(hops[v] + 1, v) <
            std::make_pair(hops[w], cur_parent)) {
          out.parent_edge[w] = e;
          hops[w] = hops[v] + 1;
        }
      }
    }
  }
  return out;
}

std::vector<NodeId> tree_path(const SparseGraph& graph,
                              const ShortestPathTree& tree, NodeId target) {
  std::vector<NodeId> path;
  if (!tree.reached(target)) return path;
  NodeId v = target;
  path.push_back(v);
  while (v != tree.source) {
    const EdgeId e = tree.parent_edge[v];
    v = graph.other_end(e, v);
    path.push_back(v);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

Instance remove_steiner(const Instance& instance, SteinerRemovalStats* stats) {
  const SparseGraph& g = instance.graph;
  const auto& dests = instance.destinations;
  const int d = static_cast<int>(dests.size());

  SparseGraph out;
  std::vector<NodeId> new_id(g.node_count(), kNoNode);
  for (NodeId v : dests)
    new_id[v] = out.add_node(g.node(v).name, NodeKind::Destination);

  std::vector<ShortestPathTree> trees;
  trees.reserve(d);
  for (NodeId v : dests) trees.push_back(shortest_path_tree(g, v));

  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      const NodeId i = dests[a], j = dests[b];
      const auto& tree = trees[a];
      if (!tree.reached(j))
        throw std::runtime_error("destinations are disconnected: no path from " +
                                 g.node(i).name + " to " + g.node(j).name);
      const auto path = tree_path(g, tree, j);
      bool interior_all_steiner = true;
      for (std::size_t k = 1; k + 1 < path.size(); ++k) {
        if (g.node(path[k]).kind == NodeKind::Destination) {
          interior_all_steiner = false;
          break;
        }
      }
      if (interior_all_steiner) {
        out.add_edge(new_id[i], new_id[j], tree.dist[j]);
        if (stats) {
          // A second internally disjoint chain of the same cost would be
          // dropped here; count the event so callers can log it.
          int equal_chains = 0;
          for (EdgeId e : g.incident(j)) {
            const NodeId w = g.other_end(e, j);
            if (tree.dist[w] != ShortestPathTree::unreachable() &&
                tree.dist[w] + g.edge(e).cost == tree.dist[j])
              ++equal_chains;
          }
          if (equal_chains > 1) stats->dropped_ties += 1;
        }
      }
    }
  }

  Instance result = make_instance(std::move(out), new_id[instance.home],
                                  instance.name);
  return result;
}

SparseGraph subdivide_all_edges(const SparseGraph& graph, int times,
                                bool keep_unit_costs, bool mark_destinations) {
  if (times < 1) throw std::invalid_argument("times must be >= 1");
  SparseGraph out;
  for (const Node& v : graph.nodes()) out.add_node(v.name, v.kind);
  const NodeKind kind =
      mark_destinations ? NodeKind::Destination : NodeKind::Steiner;
  for (const Edge& e : graph.edges()) {
    const double piece = keep_unit_costs ? 1.0 : e.cost / (times + 1);
    NodeId prev = e.u;
    for (int k = 0; k < times; ++k) {
      const NodeId mid = out.add_node(
          "e" + std::to_string(e.id) + "m" + std::to_string(k), kind);
      out.add_edge(prev, mid, piece);
      prev = mid;
    }
    out.add_edge(prev, e.v, piece);
  }
  return out;
}

std::string EvenConnectedVerdict::describe() const {
  if (ok) return "ok";
  std::ostringstream os;
  if (!odd_nodes.empty()) {
    os << "odd-degree nodes:";
    for (NodeId v : odd_nodes) os << ' ' << v;
  }
  if (destination_components.size() > 1) {
    if (!odd_nodes.empty()) os << "; ";
    os << destination_components.size() << " destination components";
  }
  return os.str();
}

EvenConnectedVerdict check_even_connected(const Instance& instance,
                                          const EdgeVector& x) {
  const SparseGraph& g = instance.graph;
  EvenConnectedVerdict verdict;
  if (x.size() != g.edge_count())
    throw std::invalid_argument("edge vector size mismatch");

  std::vector<long long> deg(g.node_count(), 0);
  for (const Edge& e : g.edges()) {
    const double v = x[e.id];
    if (v < 0 || v != std::floor(v))
      throw std::invalid_argument("x must be integral and nonnegative");
    deg[e.u] += static_cast<long long>(v);
    deg[e.v] += static_cast<long long>(v);
  }
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const bool dest = g.node(v).kind == NodeKind::Destination;
    if (deg[v] % 2 != 0 || (dest && deg[v] == 0)) verdict.odd_nodes.push_back(v);
  }

  // Union destinations by support edges; zero-degree destinations end up as
  // singleton components.
  std::vector<NodeId> comp(g.node_count(), kNoNode);
  int comp_count = 0;
  for (NodeId s = 0; s < g.node_count(); ++s) {
    if (comp[s] != kNoNode) continue;
    const int c = comp_count++;
    comp[s] = c;
    std::queue<NodeId> q;
    q.push(s);
    while (!q.empty()) {
      NodeId v = q.front();
      q.pop();
      for (EdgeId e : g.incident(v)) {
        if (x[e] <= 0) continue;
        NodeId w = g.other_end(e, v);
        if (comp[w] == kNoNode) {
          comp[w] = c;
          q.push(w);
        }
      }
    }
  }
  std::vector<std::vector<NodeId>> by_comp(comp_count);
  for (NodeId v : instance.destinations) by_comp[comp[v]].push_back(v);
  for (auto& members : by_comp)
    if (!members.empty())
      verdict.destination_components.push_back(std::move(members));

  verdict.ok =
      verdict.odd_nodes.empty() && verdict.destination_components.size() <= 1;
  return verdict;
}

std::vector<NodeId> euler_walk(const Instance& instance, const EdgeVector& x) {
  const SparseGraph& g = instance.graph;
  const auto verdict = check_even_connected(instance, x);
  if (!verdict.ok)
    throw std::runtime_error("euler_walk precondition failed: " +
                             verdict.describe());

  std::vector<int> remaining(g.edge_count());
  long long total_uses = 0;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    remaining[e] = static_cast<int>(x[e]);
    total_uses += remaining[e];
  }

  std::vector<std::size_t> cursor(g.node_count(), 0);
  std::vector<NodeId> stack{instance.home};
  std::vector<NodeId> walk;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    const auto& inc = g.incident(v);
    bool advanced = false;
    while (cursor[v] < inc.size()) {
      const EdgeId e = inc[cursor[v]];
      if (remaining[e] > 0) {
        --remaining[e];
        stack.push_back(g.other_end(e, v));
        advanced = true;
        break;
      }
      ++cursor[v];
    }
    if (!advanced) {
      walk.push_back(v);
      stack.pop_back();
    }
  }
  std::reverse(walk.begin(), walk.end());

  if (static_cast<long long>(walk.size()) != total_uses + 1)
    throw std::runtime_error(
        "euler_walk failed: positive-x edges outside home's component");
  return walk;
}

double walk_cost(const Instance& instance, const EdgeVector& x) {
  double total = 0.0;
  for (const Edge& e : instance.graph.edges()) total += e.cost * x[e.id];
  return total;
}

}  // namespace gtsp
