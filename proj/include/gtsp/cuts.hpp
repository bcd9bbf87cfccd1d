#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "gtsp/model.hpp"
#include "gtsp/simplex.hpp"

namespace gtsp {

struct ViolatedCut {
  enum class Kind : std::uint8_t { Parity, Subtour, HalfZ } kind = Kind::Parity;
  NodeId node = kNoNode;           // parity: the node
  std::vector<EdgeId> edge_subset; // parity: odd subset F
  std::vector<NodeId> node_set;    // subtour: cut side containing k
  EdgeId edge = kNoEdge;           // half-z: the edge
  double violation = 0.0;
  Row row;

  std::string describe() const;
};

/// Parity separation: for each node, builds the unconstrained left-hand-side
/// minimizer F* (edges with y_e > 1/2), then repairs |F*| to odd parity by
/// flipping the edge with |y_e - 1/2| smallest (lowest edge id on ties).
/// Linear work in the node degree; reported LHS equals the odd-subset
/// minimum.
std::vector<ViolatedCut> separate_parity(const LinModel& model,
                                         const EdgeVector& y,
                                         double tolerance = 1e-9);

/// Connectivity separation: a max-flow/min-cut between home and each other
/// destination under capacities x; cuts of value < 2 - tolerance are
/// returned (one per destination, deduplicated by node set).
std::vector<ViolatedCut> separate_subtour(const LinModel& model,
                                          const EdgeVector& x,
                                          double tolerance = 1e-6);

struct MaxFlowResult {
  double value = 0.0;
  std::vector<char> source_side;  // residual reachability from s
};

/// Max flow between s and t on the undirected graph with per-edge
/// capacities; stops early once `target` flow is reached.
MaxFlowResult max_flow_min_cut(const SparseGraph& graph, const EdgeVector& cap,
                               NodeId s, NodeId t, double target = kInf);

using Separator = std::function<std::vector<ViolatedCut>(
    const LinModel&, const LpSolution&)>;

/// Separator wrappers over the model's own solution vectors.
Separator parity_separator(double tolerance = 1e-9);
Separator subtour_separator(double tolerance = 1e-6);

/// Deduplicating pool of globally valid cut rows.
class CutPool {
 public:
  /// Renames the row to a unique pool name and stores it; returns false
  /// when an identical row (same coefficients, sense, rhs) is present.
  bool add(Row row);
  const std::vector<Row>& rows() const { return rows_; }
  int size() const { return static_cast<int>(rows_.size()); }

 private:
  std::string signature(const Row& row) const;
  std::vector<Row> rows_;
  std::set<std::string> seen_;
};

struct CutLoopLimits {
  int max_rounds = 200;
};

struct CutLoopResult {
  LpSolution solution;
  std::vector<ViolatedCut> cuts;  // everything added, in order
  int rounds = 0;
  bool hit_round_limit = false;
};

/// Solve / separate / add loop: every separator runs each round, all
/// returned cuts are appended together, until no separator fires or the
/// round limit is reached. `model` grows by the added rows.
CutLoopResult cutting_plane(LinModel& model,
                            const std::vector<Separator>& separators,
                            const CutLoopLimits& limits = {},
                            const SolverConfig& lp_config = {});

/// Relaxation solve honoring the model's BuildOptions: plain LP for
/// CompactFlow, subtour (and parity, when ParityMode::Separate) cutting
/// planes otherwise.
CutLoopResult solve_relaxation(LinModel& model,
                               const CutLoopLimits& limits = {},
                               const SolverConfig& lp_config = {});

}  // namespace gtsp
