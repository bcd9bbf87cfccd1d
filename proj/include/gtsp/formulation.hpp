#pragma once

#include <vector>

#include "gtsp/model.hpp"

namespace gtsp {

/// Classic relaxation: x in [0,2], destination degrees >= 2, connectivity
/// by 2-unit flows (CompactFlow) or by cutting planes added later.
LinModel build_cfn(const Instance& instance, const BuildOptions& options);

/// Mixed formulation with the single-use/double-use split x = y + 2z:
/// linking rows, degree rows, enumerated or separated degree-parity rows,
/// optional spanning-tree domination (Martin flows) and half-z path cuts,
/// plus connectivity per options.subtour_mode.
LinModel build_yz(const Instance& instance, const BuildOptions& options);

/// Reference one-visit TSP model: x in {0,1}, degree exactly 2 everywhere.
/// Requires an instance without Steiner nodes.
LinModel build_dfj(const Instance& instance, const BuildOptions& options);

/// Parity row for node v and odd subset F of its incident edges:
///   sum_{delta(v)\F} y_e - sum_F y_e >= 1 - |F|.
/// F entries must be incident to v and pairwise distinct.
Row make_parity_row(const LinModel& model, NodeId v,
                    const std::vector<EdgeId>& odd_subset);

/// All 2^(deg(v)-1) parity rows of node v. Throws when deg(v) exceeds
/// options().enumerate_cap.
std::vector<Row> enumerate_parity_rows(const LinModel& model, NodeId v);

/// Half-z path cut for edge e = {i,j}, both endpoints destinations:
///   x(delta(i)) + x(delta(j)) - 2 z_e >= 4.
Row make_halfz_row(const LinModel& model, EdgeId e);

/// Subtour/connectivity cut x(delta(S)) >= 2 for a node set S that contains
/// at least one destination and not all of them.
Row make_subtour_row(const LinModel& model, const std::vector<NodeId>& node_set,
                     const std::string& name);

/// Degree-sum row sum_{e in delta(v)} x_e <sense> rhs (parity branching).
Row make_degree_row(const LinModel& model, NodeId v, RowSense sense, double rhs,
                    const std::string& name);

/// Appends the spanning-tree domination system: t / directed-t columns,
/// unit flows phi^k with the home node indexed last, t_e <= y_e + z_e and
/// sum t_e <= n-1. Requires an instance whose nodes are all destinations.
void add_tree_system(LinModel& model);

/// Appends the 2-unit connectivity flow system f^k (one commodity per
/// non-home destination) capacitated by x.
void add_subtour_flow_system(LinModel& model);

}  // namespace gtsp
