#include "gtsp/branch_bound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <numeric>
#include <queue>

#include "gtsp/formulation.hpp"

namespace gtsp {

const char* to_string(MipStatus status) {
  switch (status) {
    case MipStatus::Optimal: return "Optimal";
    case MipStatus::Infeasible: return "Infeasible";
    case MipStatus::GapLimit: return "GapLimit";
  }
  return "?";
}

namespace {

constexpr double kFracTol = 1e-6;  // fractionality tolerance for branching

bool near_integer(double v) { return std::abs(v - std::round(v)) <= kFracTol; }

struct BoundOverride {
  int column;
  double lower, upper;
};

struct SearchNode {
  std::vector<BoundOverride> overrides;
  std::vector<Row> extra_rows;
  double bound = -kInf;  // inherited LP bound
  long long bound_key = std::numeric_limits<long long>::min();
  int depth = 0;
  long seq = 0;
  BasisDescriptor basis;  // parent basis, usable while the pool is unchanged
  int pool_size = 0;

  void set_bound(double b) {
    bound = b;
    // Quantized at the optimality tolerance so equal-bound nodes tie and
    // the depth rule below makes the search dive.
    bound_key = std::isfinite(b) ? static_cast<long long>(std::llround(b * 1e6))
                                 : std::numeric_limits<long long>::min();
  }
};

struct NodeOrder {
  // Best bound first, then deepest, then most recent.
  bool operator()(const SearchNode& a, const SearchNode& b) const {
    if (a.bound_key != b.bound_key) return a.bound_key > b.bound_key;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.seq < b.seq;
  }
};

struct Candidate {
  EdgeVector x, y, z;
  double objective = kInf;
  bool valid = false;
};

/// Zeroes positive-x components detached from home. Pure Steiner junk is
/// cost-free to drop; a detached destination means connectivity is
/// genuinely violated and the caller must cut instead.
bool strip_detached(const Instance& inst, EdgeVector& x, EdgeVector& y,
                    EdgeVector& z) {
  const SparseGraph& g = inst.graph;
  std::vector<char> reach(g.node_count(), 0);
  std::queue<NodeId> q;
  q.push(inst.home);
  reach[inst.home] = 1;
  while (!q.empty()) {
    NodeId v = q.front();
    q.pop();
    for (EdgeId e : g.incident(v)) {
      if (x[e] <= 0) continue;
      NodeId w = g.other_end(e, v);
      if (!reach[w]) {
        reach[w] = 1;
        q.push(w);
      }
    }
  }
  for (NodeId v : inst.destinations) {
    if (reach[v]) continue;
    double deg = 0;
    for (EdgeId e : g.incident(v)) deg += x[e];
    if (deg > 0) return false;
  }
  for (const Edge& e : g.edges()) {
    if (x[e.id] > 0 && !reach[e.u]) {
      x[e.id] = 0;
      y[e.id] = 0;
      z[e.id] = 0;
    }
  }
  return true;
}

class MipSearch {
 public:
  MipSearch(const LinModel& model, BranchStrategy strategy,
            const MipLimits& limits, const SolverConfig& lp_config)
      : base_(model),
        inst_(*model.instance()),
        strategy_(strategy),
        limits_(limits),
        lp_(lp_config) {
    integral_costs_ = true;
    for (const Column& c : base_.columns())
      if (c.objective != std::floor(c.objective)) integral_costs_ = false;
  }

  MipSolution run();

 private:
  const LinModel& base_;
  const Instance& inst_;
  BranchStrategy strategy_;
  MipLimits limits_;
  SolverConfig lp_;

  CutPool pool_;
  Candidate incumbent_;
  std::priority_queue<SearchNode, std::vector<SearchNode>, NodeOrder> open_;
  long node_count_ = 0;
  long z_branches_ = 0;
  long seq_ = 0;
  std::chrono::steady_clock::time_point deadline_;
  bool hit_limit_ = false;
  double lost_bound_ = kInf;  // bounds of subtrees given up on (LP limits)
  bool integral_costs_ = false;

  bool out_of_budget() {
    return node_count_ >= limits_.max_nodes ||
           std::chrono::steady_clock::now() >= deadline_;
  }

  LinModel assemble(const SearchNode& node) const {
    LinModel model = base_;
    for (const Row& row : pool_.rows()) model.add_row(row);
    for (const Row& row : node.extra_rows) model.add_row(row);
    for (const BoundOverride& ov : node.overrides)
      model.set_bounds(ov.column, ov.lower, ov.upper);
    return model;
  }

  std::vector<Separator> node_separators() const {
    std::vector<Separator> seps;
    if (base_.options().subtour_mode == SubtourMode::CuttingPlane)
      seps.push_back(subtour_separator());
    if (base_.options().formulation == Formulation::YZ &&
        base_.options().parity_mode == ParityMode::Separate)
      seps.push_back(parity_separator());
    return seps;
  }

  /// Solve + per-node separation. Cuts are globally valid, so they land in
  /// the shared pool; the node keeps resolving until quiet.
  LpSolution solve_node(LinModel& model, const SearchNode& node) {
    // Without extra rows the layout is base|pool and stays prefix-compatible
    // as the pool grows; extra rows shift once new cuts land after them.
    const bool basis_usable =
        !node.basis.empty() &&
        (node.extra_rows.empty() || node.pool_size == pool_.size());
    LpSolution sol;
    if (basis_usable)
      sol = solve_lp_from_basis(model, node.basis, lp_);
    else
      sol = solve_lp(model, lp_);

    const auto separators = node_separators();
    for (int round = 0; round < limits_.node_cut_rounds; ++round) {
      if (sol.status != LpStatus::Optimal || separators.empty()) break;
      if (incumbent_.valid &&
          lifted(sol.objective) >= incumbent_.objective - limits_.gap_tol)
        break;  // node will be pruned; no point separating further
      std::vector<Row> fresh;
      for (const auto& separate : separators)
        for (ViolatedCut& cut : separate(model, sol))
          if (pool_.add(cut.row)) fresh.push_back(pool_.rows().back());
      if (fresh.empty()) break;
      sol = resolve_with_rows(model, sol, std::move(fresh), lp_);
    }
    return sol;
  }

  /// Fractional column of `kind` whose value sits closest to 1/2 (by
  /// |value - floor - 0.5|); kNoEdge when all are integral.
  EdgeId most_fractional(VarKind kind, const LpSolution& sol) const {
    EdgeId best = kNoEdge;
    double best_score = kInf;
    for (EdgeId e = 0; e < inst_.graph.edge_count(); ++e) {
      const int col = base_.column_index({kind, e, kNoNode, kNoNode, kNoNode});
      const double v = sol.primal[col];
      if (near_integer(v)) continue;
      const double frac = v - std::floor(v);
      const double score = std::abs(frac - 0.5);
      if (score < best_score) {
        best_score = score;
        best = e;
      }
    }
    return best;
  }

  void push_child(const SearchNode& parent, double child_bound,
                  const BasisDescriptor& basis,
                  std::vector<BoundOverride> extra_override,
                  std::vector<Row> extra_rows) {
    SearchNode child;
    child.overrides = parent.overrides;
    for (auto& ov : extra_override) child.overrides.push_back(ov);
    child.extra_rows = parent.extra_rows;
    for (auto& row : extra_rows) child.extra_rows.push_back(std::move(row));
    child.set_bound(std::max(parent.bound, child_bound));
    child.depth = parent.depth + 1;
    child.seq = ++seq_;
    child.basis = basis;
    child.pool_size = pool_.size();
    open_.push(std::move(child));
  }

  /// With an all-integer objective every integer solution has integer cost,
  /// so a fractional LP bound rounds up.
  double lifted(double bound) const {
    return integral_costs_ && std::isfinite(bound)
               ? std::ceil(bound - limits_.gap_tol)
               : bound;
  }

  void branch_on_column(const SearchNode& node, double bound,
                        const BasisDescriptor& basis, VarKind kind, EdgeId e,
                        double value) {
    const int col = base_.column_index({kind, e, kNoNode, kNoNode, kNoNode});
    const double lo = std::floor(value), hi = std::ceil(value);
    double cur_lo = base_.column(col).lower;
    double cur_up = base_.column(col).upper;
    for (const BoundOverride& ov : node.overrides) {
      if (ov.column == col) {
        cur_lo = ov.lower;
        cur_up = ov.upper;
      }
    }
    push_child(node, bound, basis, {{col, cur_lo, lo}}, {});
    push_child(node, bound, basis, {{col, hi, cur_up}}, {});
  }

  /// Accepts an integral LP point as the new incumbent when it is a valid
  /// tour; returns false when connectivity cuts are still missing.
  bool try_incumbent(const LpSolution& sol) {
    const int m = inst_.graph.edge_count();
    EdgeVector x(m), y(m), z(m);
    if (strategy_ == BranchStrategy::YBranch) {
      y = base_.edge_values(VarKind::Y, sol.primal);
      z = base_.edge_values(VarKind::Z, sol.primal);
      for (EdgeId e = 0; e < m; ++e) {
        y[e] = std::round(y[e]);
        z[e] = std::round(z[e]);
        x[e] = y[e] + 2 * z[e];
      }
    } else {
      x = base_.edge_values(VarKind::X, sol.primal);
      for (EdgeId e = 0; e < m; ++e) {
        x[e] = std::round(x[e]);
        y[e] = x[e] == 1 ? 1 : 0;
        z[e] = x[e] == 2 ? 1 : 0;
      }
    }
    if (!strip_detached(inst_, x, y, z)) return false;
    if (!check_even_connected(inst_, x).ok) return false;

    const double cost = walk_cost(inst_, x);
    if (!incumbent_.valid || cost < incumbent_.objective) {
      incumbent_.x = std::move(x);
      incumbent_.y = std::move(y);
      incumbent_.z = std::move(z);
      incumbent_.objective = cost;
      incumbent_.valid = true;
    }
    return true;
  }

  void process(SearchNode node) {
    ++node_count_;
    const int pool_at_entry = pool_.size();
    LinModel model = assemble(node);
    LpSolution sol = solve_node(model, node);
    // Cuts found at this node land after the node's extra rows, so the
    // basis row layout no longer matches a child's base|pool|extras order.
    if (!node.extra_rows.empty() && pool_.size() != pool_at_entry)
      sol.basis = BasisDescriptor{};

    if (sol.status == LpStatus::Infeasible) return;
    if (sol.status == LpStatus::Unbounded)
      throw std::runtime_error("MIP node LP unbounded; model is malformed");

    const bool solved = sol.status == LpStatus::Optimal;
    const double bound = solved ? std::max(node.bound, sol.objective)
                                : node.bound;

    if (limits_.log_nodes)
      std::cerr << "node " << node_count_ << " depth " << node.depth
                << " bound " << bound << " status " << to_string(sol.status)
                << "\n";

    if (incumbent_.valid &&
        lifted(bound) >= incumbent_.objective - limits_.gap_tol)
      return;

    if (!solved) {
      // LP iteration budget ran out: branch on whatever looks fractional so
      // smaller LPs get a fresh chance, or give up on the subtree honestly.
      hit_limit_ = true;
      const VarKind kind = strategy_ == BranchStrategy::YBranch ? VarKind::Y
                                                                : VarKind::X;
      const EdgeId e = most_fractional(kind, sol);
      if (e != kNoEdge) {
        branch_on_column(node, bound, BasisDescriptor{}, kind, e,
                         sol.primal[base_.column_index(
                             {kind, e, kNoNode, kNoNode, kNoNode})]);
      } else {
        lost_bound_ = std::min(lost_bound_, bound);
      }
      return;
    }

    if (strategy_ == BranchStrategy::YBranch) {
      const EdgeId ye = most_fractional(VarKind::Y, sol);
      if (ye != kNoEdge) {
        branch_on_column(node, bound, sol.basis, VarKind::Y, ye,
                         sol.primal[base_.column_index(VarRef::y(ye))]);
        return;
      }
      const EdgeId ze = most_fractional(VarKind::Z, sol);
      if (ze != kNoEdge) {
        // Integral y with fractional z at an LP optimum is not expected on
        // the formulations built here; branch on z as a safeguard.
        ++z_branches_;
        if (limits_.log_nodes)
          std::cerr << "safeguard z-branch on edge " << ze << "\n";
        branch_on_column(node, bound, sol.basis, VarKind::Z, ze,
                         sol.primal[base_.column_index(VarRef::z(ze))]);
        return;
      }
      if (!try_incumbent(sol)) force_connectivity(std::move(node), model, sol);
      return;
    }

    // ParityBranch: bound fractional x first.
    const EdgeId xe = most_fractional(VarKind::X, sol);
    if (xe != kNoEdge) {
      branch_on_column(node, bound, sol.basis, VarKind::X, xe,
                       sol.primal[base_.column_index(VarRef::x(xe))]);
      return;
    }

    // Integral x: split the lowest node whose degree sum is odd.
    const EdgeVector x = base_.edge_values(VarKind::X, sol.primal);
    for (NodeId v = 0; v < inst_.graph.node_count(); ++v) {
      long long degree = 0;
      for (EdgeId e : inst_.graph.incident(v))
        degree += static_cast<long long>(std::llround(x[e]));
      if (degree % 2 == 0) continue;
      const std::string tag =
          std::to_string(v) + "_n" + std::to_string(node.seq);
      Row le = make_degree_row(base_, v, RowSense::LE,
                               static_cast<double>(degree - 1), "oddle_" + tag);
      Row ge = make_degree_row(base_, v, RowSense::GE,
                               static_cast<double>(degree + 1), "oddge_" + tag);
      push_child(node, bound, sol.basis, {}, {std::move(le)});
      push_child(node, bound, sol.basis, {}, {std::move(ge)});
      return;
    }

    if (!try_incumbent(sol)) force_connectivity(std::move(node), model, sol);
  }

  /// Integral but disconnected point that slipped past the per-node round
  /// cap: derive its subtour cuts and re-queue the node.
  void force_connectivity(SearchNode node, const LinModel& model,
                          const LpSolution& sol) {
    const EdgeVector x = base_.edge_values(VarKind::X, sol.primal);
    bool added = false;
    for (ViolatedCut& cut : separate_subtour(model, x))
      added |= pool_.add(cut.row);
    if (!added)
      throw std::runtime_error(
          "integral LP point is disconnected but no subtour cut separates it");
    node.basis = BasisDescriptor{};
    node.pool_size = pool_.size();
    node.seq = ++seq_;
    open_.push(std::move(node));
  }
};

MipSolution MipSearch::run() {
  deadline_ = std::chrono::steady_clock::now() +
              std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                  std::chrono::duration<double>(
                      std::min(limits_.time_limit_sec, 1e9)));

  // A doubled spanning tree is feasible whenever doubled edges are allowed.
  if (base_.options().formulation != Formulation::DFJ) {
    const auto tree = minimum_spanning_tree(inst_.graph);
    Candidate start;
    const int m = inst_.graph.edge_count();
    start.x = EdgeVector(m);
    start.y = EdgeVector(m);
    start.z = EdgeVector(m);
    for (EdgeId e : tree) {
      start.x[e] = 2;
      start.z[e] = 1;
    }
    start.objective = walk_cost(inst_, start.x);
    start.valid = true;
    incumbent_ = std::move(start);
  }

  SearchNode root;
  root.set_bound(-kInf);
  root.seq = ++seq_;
  open_.push(std::move(root));

  bool proven = false;
  while (!open_.empty()) {
    if (out_of_budget()) {
      hit_limit_ = true;
      break;
    }
    if (incumbent_.valid &&
        lifted(open_.top().bound) >= incumbent_.objective - limits_.gap_tol) {
      proven = true;  // best-bound order: every open node is prunable
      break;
    }
    SearchNode node = open_.top();
    open_.pop();
    process(std::move(node));
  }

  (void)proven;  // recovered below from the remaining-bound analysis
  const double remaining =
      std::min(lost_bound_, open_.empty() ? kInf : open_.top().bound);

  MipSolution out;
  out.node_count = node_count_;
  out.z_branches = z_branches_;
  if (!incumbent_.valid) {
    const bool closed = open_.empty() && lost_bound_ == kInf;
    out.status = closed ? MipStatus::Infeasible : MipStatus::GapLimit;
    out.best_bound = remaining;
    return out;
  }

  out.objective = incumbent_.objective;
  out.x = incumbent_.x;
  out.y = incumbent_.y;
  out.z = incumbent_.z;
  out.best_bound = std::min(remaining, incumbent_.objective);
  out.status = std::min(lifted(remaining), incumbent_.objective) >=
                       out.objective - limits_.gap_tol
                   ? MipStatus::Optimal
                   : MipStatus::GapLimit;
  if (out.status == MipStatus::Optimal) out.best_bound = out.objective;
  out.walk = euler_walk(inst_, out.x);
  return out;
}

}  // namespace

MipSolution solve_mip(const LinModel& model, BranchStrategy strategy,
                      const MipLimits& limits, const SolverConfig& lp_config) {
  if (!model.instance())
    throw std::invalid_argument("model lacks an instance back-reference");
  if (strategy == BranchStrategy::YBranch &&
      model.options().formulation != Formulation::YZ)
    throw std::invalid_argument("YBranch requires a y/z model");
  if (strategy == BranchStrategy::ParityBranch &&
      model.options().formulation == Formulation::YZ)
    throw std::invalid_argument("ParityBranch requires a CFN or DFJ model");
  MipSearch search(model, strategy, limits, lp_config);
  return search.run();
}

std::vector<EdgeId> minimum_spanning_tree(const SparseGraph& graph) {
  std::vector<EdgeId> order(graph.edge_count());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
    return graph.edge(a).cost < graph.edge(b).cost;
  });

  std::vector<NodeId> parent(graph.node_count());
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](NodeId v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };

  std::vector<EdgeId> tree;
  for (EdgeId e : order) {
    const NodeId ru = find(graph.edge(e).u), rv = find(graph.edge(e).v);
    if (ru == rv) continue;
    parent[ru] = rv;
    tree.push_back(e);
  }
  return tree;
}

MipSolution heuristic_tour(const Instance& instance) {
  instance.validate();
  const int m = instance.graph.edge_count();
  MipSolution out;
  out.x = EdgeVector(m);
  out.y = EdgeVector(m);
  out.z = EdgeVector(m);
  for (EdgeId e : minimum_spanning_tree(instance.graph)) {
    out.x[e] = 2;
    out.z[e] = 1;
  }
  out.objective = walk_cost(instance, out.x);
  out.best_bound = 0.0;
  out.status = MipStatus::GapLimit;  // feasible, not proven optimal
  out.walk = euler_walk(instance, out.x);
  return out;
}

Certificate certify_solution(const Instance& instance, const EdgeVector& y,
                             const EdgeVector& z) {
  const SparseGraph& g = instance.graph;
  if (y.size() != g.edge_count() || z.size() != g.edge_count())
    throw std::invalid_argument("edge vector size mismatch");
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if ((y[e] != 0 && y[e] != 1) || (z[e] != 0 && z[e] != 1))
      throw std::invalid_argument("y and z must be 0/1 integral");
    if (y[e] + z[e] > 1)
      throw std::invalid_argument("y_e + z_e <= 1 violated on edge " +
                                  std::to_string(e));
  }

  // Spanning tree inside the y+z support, grown from home.
  std::vector<char> reached(g.node_count(), 0);
  std::vector<EdgeId> tree;
  std::queue<NodeId> bfs;
  bfs.push(instance.home);
  reached[instance.home] = 1;
  while (!bfs.empty()) {
    const NodeId v = bfs.front();
    bfs.pop();
    for (EdgeId e : g.incident(v)) {
      if (y[e] + z[e] < 1) continue;
      const NodeId w = g.other_end(e, v);
      if (reached[w]) continue;
      reached[w] = 1;
      tree.push_back(e);
      bfs.push(w);
    }
  }
  for (NodeId v : instance.destinations)
    if (!reached[v])
      throw std::runtime_error("no-spanning-tree: destination " +
                               std::to_string(v) + " outside the y+z support");
  for (const Edge& e : g.edges())
    if (y[e.id] + z[e.id] >= 1 && (!reached[e.u] || !reached[e.v]))
      throw std::runtime_error("no-spanning-tree: support edge " +
                               std::to_string(e.id) +
                               " detached from home's component");

  for (NodeId v = 0; v < g.node_count(); ++v) {
    long long ydeg = 0;
    for (EdgeId e : g.incident(v)) ydeg += static_cast<long long>(y[e]);
    if (ydeg % 2 != 0)
      throw std::runtime_error("odd-parity: node " + std::to_string(v) +
                               " has odd y-degree " + std::to_string(ydeg));
  }

  Certificate cert;
  cert.tree_edges = std::move(tree);
  cert.x = EdgeVector(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) cert.x[e] = y[e] + 2 * z[e];
  cert.walk = euler_walk(instance, cert.x);
  return cert;
}

}  // namespace gtsp
