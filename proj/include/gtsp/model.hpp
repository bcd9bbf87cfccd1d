#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "gtsp/graph.hpp"

namespace gtsp {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind : std::uint8_t {
  X,             // edge use count, x_e = y_e + 2 z_e
  Y,             // edge used exactly once
  Z,             // edge used exactly twice
  T,             // undirected spanning-tree indicator
  TDirected,     // directed tree arc
  PhiFlow,       // unit tree flows, one commodity per non-home node
  SubtourFlow,   // 2-unit connectivity flows, one commodity per destination
};

/// Identifies one model column: an edge variable (X/Y/Z/T), a directed arc
/// variable (TDirected), or a per-commodity arc flow (PhiFlow/SubtourFlow).
struct VarRef {
  VarKind kind = VarKind::X;
  EdgeId edge = kNoEdge;      // X, Y, Z, T
  NodeId tail = kNoNode;      // arc variables
  NodeId head = kNoNode;
  NodeId commodity = kNoNode; // flow variables

  friend bool operator<(const VarRef& a, const VarRef& b) {
    return std::tie(a.kind, a.edge, a.tail, a.head, a.commodity) <
           std::tie(b.kind, b.edge, b.tail, b.head, b.commodity);
  }
  friend bool operator==(const VarRef& a, const VarRef& b) {
    return std::tie(a.kind, a.edge, a.tail, a.head, a.commodity) ==
           std::tie(b.kind, b.edge, b.tail, b.head, b.commodity);
  }

  static VarRef x(EdgeId e) { return {VarKind::X, e, kNoNode, kNoNode, kNoNode}; }
  static VarRef y(EdgeId e) { return {VarKind::Y, e, kNoNode, kNoNode, kNoNode}; }
  static VarRef z(EdgeId e) { return {VarKind::Z, e, kNoNode, kNoNode, kNoNode}; }
  static VarRef t(EdgeId e) { return {VarKind::T, e, kNoNode, kNoNode, kNoNode}; }
  static VarRef t_arc(EdgeId e, NodeId tail, NodeId head) {
    return {VarKind::TDirected, e, tail, head, kNoNode};
  }
  static VarRef phi(NodeId k, EdgeId e, NodeId tail, NodeId head) {
    return {VarKind::PhiFlow, e, tail, head, k};
  }
  static VarRef flow(NodeId k, EdgeId e, NodeId tail, NodeId head) {
    return {VarKind::SubtourFlow, e, tail, head, k};
  }

  std::string to_string() const;
};

struct Column {
  VarRef ref;
  double lower = 0.0;
  double upper = kInf;
  double objective = 0.0;
  bool integral = false;
};

enum class RowSense : std::uint8_t { LE, EQ, GE };

struct Row {
  std::string name;
  std::vector<std::pair<int, double>> coeffs;  // (column index, coefficient)
  RowSense sense = RowSense::GE;
  double rhs = 0.0;

  double activity(const std::vector<double>& primal) const {
    double a = 0.0;
    for (auto [col, c] : coeffs) a += c * primal[col];
    return a;
  }
  /// Amount by which `primal` violates this row (0 when satisfied).
  double violation(const std::vector<double>& primal) const {
    const double a = activity(primal);
    switch (sense) {
      case RowSense::LE: return a - rhs;
      case RowSense::GE: return rhs - a;
      case RowSense::EQ: return std::abs(a - rhs);
    }
    return 0.0;
  }
};

enum class Formulation : std::uint8_t { CFN, YZ, DFJ };
enum class SubtourMode : std::uint8_t { CompactFlow, CuttingPlane };
enum class ParityMode : std::uint8_t { Enumerate, Separate };

struct BuildOptions {
  Formulation formulation = Formulation::YZ;
  SubtourMode subtour_mode = SubtourMode::CompactFlow;
  ParityMode parity_mode = ParityMode::Enumerate;
  bool include_tree = false;    // spanning-tree domination + unit tree flows
  bool include_halfz = false;   // degree/z cut excluding half-z paths
  int enumerate_cap = 10;       // max degree for enumerated parity rows
};

/// Variables plus linear rows; the target of all formulation builders and
/// the input of the LP engine. Immutable by convention once built; cut
/// loops append rows to their own copy.
class LinModel {
 public:
  explicit LinModel(const Instance* instance = nullptr,
                    BuildOptions options = {})
      : instance_(instance), options_(options) {}

  int add_column(const VarRef& ref, double lower, double upper,
                 double objective, bool integral);
  int add_row(Row row);

  /// Tightens a column's bounds in place (branch-and-bound works on its own
  /// copy; shared models stay immutable).
  void set_bounds(int column, double lower, double upper);

  int column_index(const VarRef& ref) const;       // -1 when absent
  bool has_column(const VarRef& ref) const { return column_index(ref) >= 0; }

  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<Row>& rows() const { return rows_; }
  const Column& column(int j) const { return columns_.at(j); }
  const Row& row(int i) const { return rows_.at(i); }
  int column_count() const { return static_cast<int>(columns_.size()); }
  int row_count() const { return static_cast<int>(rows_.size()); }

  const Instance* instance() const { return instance_; }
  const BuildOptions& options() const { return options_; }

  /// Per-edge values of one variable kind out of a primal vector.
  EdgeVector edge_values(VarKind kind, const std::vector<double>& primal) const;

 private:
  const Instance* instance_;
  BuildOptions options_;
  std::vector<Column> columns_;
  std::vector<Row> rows_;
  std::map<VarRef, int> index_;
};

}  // namespace gtsp
