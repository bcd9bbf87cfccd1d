#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gtsp {

using NodeId = int;
using EdgeId = int;

constexpr NodeId kNoNode = -1;
constexpr EdgeId kNoEdge = -1;

enum class NodeKind : std::uint8_t { Destination, Steiner };

struct Node {
  NodeId id = kNoNode;
  std::string name;
  NodeKind kind = NodeKind::Destination;
};

struct Edge {
  EdgeId id = kNoEdge;
  NodeId u = kNoNode;
  NodeId v = kNoNode;
  double cost = 0.0;
};

/// Undirected sparse multigraph. Parallel edges are allowed, self-loops are
/// not. Node and edge ids are dense 0-based indices; adjacency lists store
/// incident edge ids in insertion order. Immutable once built (the builder
/// API is add_node/add_edge during construction only by convention).
class SparseGraph {
 public:
  SparseGraph() = default;

  NodeId add_node(std::string name, NodeKind kind = NodeKind::Destination);
  EdgeId add_edge(NodeId u, NodeId v, double cost);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  const Node& node(NodeId v) const { return nodes_.at(v); }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Incident edge ids of v, in insertion order.
  const std::vector<EdgeId>& incident(NodeId v) const { return adjacency_.at(v); }
  int degree(NodeId v) const { return static_cast<int>(adjacency_.at(v).size()); }
  int max_degree() const;

  /// Endpoint of e that is not v; throws if v is not an endpoint.
  NodeId other_end(EdgeId e, NodeId v) const;

  void set_kind(NodeId v, NodeKind kind) { nodes_.at(v).kind = kind; }

  /// True when every edge cost is a (moderate) exact integer, which makes
  /// all path/objective arithmetic in this toolkit exact.
  bool has_integer_costs() const;

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> adjacency_;
};

/// A GTSP instance: graph, ordered destination list, Steiner list, home node.
struct Instance {
  SparseGraph graph;
  std::vector<NodeId> destinations;
  std::vector<NodeId> steiners;
  NodeId home = kNoNode;
  std::string name;

  bool is_destination(NodeId v) const {
    return graph.node(v).kind == NodeKind::Destination;
  }
  int destination_count() const { return static_cast<int>(destinations.size()); }

  /// Checks the structural invariants (partition, home membership,
  /// connectivity); throws std::invalid_argument on violation.
  void validate() const;
};

/// Builds an Instance from a graph whose node kinds are already marked.
/// Destination order follows node-id order; home defaults to the last
/// destination when not given.
Instance make_instance(SparseGraph graph, NodeId home = kNoNode,
                       std::string name = {});

/// Per-edge numeric vector (x, y, z or t values, indexed by edge id).
struct EdgeVector {
  std::vector<double> values;

  EdgeVector() = default;
  explicit EdgeVector(int edge_count, double fill = 0.0)
      : values(edge_count, fill) {}

  double& operator[](EdgeId e) { return values[e]; }
  double operator[](EdgeId e) const { return values[e]; }
  int size() const { return static_cast<int>(values.size()); }
};

struct ShortestPathTree {
  std::vector<double> dist;           // dist[v]; unreachable() when no path
  std::vector<EdgeId> parent_edge;    // kNoEdge at source/unreachable nodes
  NodeId source = kNoNode;

  static double unreachable() { return -1.0; }
  bool reached(NodeId v) const { return parent_edge[v] != kNoEdge || v == source; }
};

/// Dijkstra from `source` (costs must be nonnegative). Ties between equal
/// cost paths are broken toward fewer hops, then the lower parent node id,
/// so the chosen tree is canonical for a given graph.
ShortestPathTree shortest_path_tree(const SparseGraph& graph, NodeId source);

/// Recovers source->target node sequence from a tree; empty if unreachable.
std::vector<NodeId> tree_path(const SparseGraph& graph,
                              const ShortestPathTree& tree, NodeId target);

struct SteinerRemovalStats {
  int dropped_ties = 0;  // destination pairs with several equal-cost chains
};

/// Contracts Steiner nodes: the result keeps only destination nodes and one
/// edge per destination pair whose canonical shortest path has no
/// intermediate destination, with the path cost as the edge cost.
/// Throws std::runtime_error when some destination pair is disconnected.
Instance remove_steiner(const Instance& instance,
                        SteinerRemovalStats* stats = nullptr);

/// Replaces every edge of cost c by a path of (times+1) edges. New interior
/// nodes are Steiner unless mark_destinations is set. Each new edge costs
/// c/(times+1), or exactly 1 when keep_unit_costs is set.
SparseGraph subdivide_all_edges(const SparseGraph& graph, int times,
                                bool keep_unit_costs = false,
                                bool mark_destinations = false);

struct EvenConnectedVerdict {
  bool ok = false;
  std::vector<NodeId> odd_nodes;  // odd x-degree, or zero-degree destinations
  std::vector<std::vector<NodeId>> destination_components;  // >1 when split

  std::string describe() const;
};

/// Checks that x (integral, nonnegative) gives every destination positive
/// even degree, every Steiner node even degree, and connects all
/// destinations within its support.
EvenConnectedVerdict check_even_connected(const Instance& instance,
                                          const EdgeVector& x);

/// Hierholzer walk over the multigraph with each edge duplicated x_e times.
/// Returns the closed node sequence starting and ending at home. Throws
/// std::runtime_error when check_even_connected fails or some positive-x
/// edge lies outside home's support component.
std::vector<NodeId> euler_walk(const Instance& instance, const EdgeVector& x);

/// Exact inner product c.x over the instance's edge costs.
double walk_cost(const Instance& instance, const EdgeVector& x);

}  // namespace gtsp
