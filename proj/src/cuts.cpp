#include "gtsp/cuts.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include "gtsp/formulation.hpp"

namespace gtsp {

std::string ViolatedCut::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Parity: {
      os << "parity node " << node << " F={";
      for (std::size_t i = 0; i < edge_subset.size(); ++i)
        os << (i ? "," : "") << edge_subset[i];
      os << "}";
      break;
    }
    case Kind::Subtour: {
      os << "subtour S={";
      for (std::size_t i = 0; i < node_set.size(); ++i)
        os << (i ? "," : "") << node_set[i];
      os << "}";
      break;
    }
    case Kind::HalfZ:
      os << "halfz edge " << edge;
      break;
  }
  os << " violation " << violation;
  return os.str();
}

std::vector<ViolatedCut> separate_parity(const LinModel& model,
                                         const EdgeVector& y,
                                         double tolerance) {
  const SparseGraph& g = model.instance()->graph;
  std::vector<ViolatedCut> cuts;

  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto& incident = g.incident(v);
    if (incident.empty()) continue;

    // Unconstrained minimizer: edges with y > 1/2 go to F (exactly 1/2
    // stays outside; the flip step repairs parity either way).
    std::vector<EdgeId> subset;
    for (EdgeId e : incident)
      if (y[e] > 0.5) subset.push_back(e);

    if (subset.size() % 2 == 0) {
      EdgeId flip = kNoEdge;
      double best = kInf;
      for (EdgeId e : incident) {
        const double gap = std::abs(y[e] - 0.5);
        if (gap < best) {  // strict: lowest edge id wins ties
          best = gap;
          flip = e;
        }
      }
      const auto it = std::find(subset.begin(), subset.end(), flip);
      if (it != subset.end()) subset.erase(it);
      else subset.insert(std::lower_bound(subset.begin(), subset.end(), flip), flip);
    }

    // Evaluate the final subset directly so the reported value matches an
    // exhaustive check term for term.
    double lhs = 0.0;
    std::size_t cursor = 0;
    for (EdgeId e : incident) {
      const bool in_f = cursor < subset.size() && subset[cursor] == e;
      if (in_f) {
        lhs += 1.0 - y[e];
        ++cursor;
      } else {
        lhs += y[e];
      }
    }
    if (lhs >= 1.0 - tolerance) continue;

    ViolatedCut cut;
    cut.kind = ViolatedCut::Kind::Parity;
    cut.node = v;
    cut.edge_subset = subset;
    cut.violation = 1.0 - lhs;
    cut.row = make_parity_row(model, v, subset);
    cuts.push_back(std::move(cut));
  }
  return cuts;
}

MaxFlowResult max_flow_min_cut(const SparseGraph& graph, const EdgeVector& cap,
                               NodeId s, NodeId t, double target) {
  const int n = graph.node_count();
  std::vector<double> flow(graph.edge_count(), 0.0);  // signed along u->v
  MaxFlowResult result;

  auto residual = [&](EdgeId e, NodeId from) {
    const Edge& ed = graph.edge(e);
    return from == ed.u ? cap[e] - flow[e] : cap[e] + flow[e];
  };

  while (result.value < target) {
    // BFS for a shortest augmenting path.
    std::vector<EdgeId> via(n, kNoEdge);
    std::vector<char> seen(n, 0);
    std::queue<NodeId> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty() && !seen[t]) {
      const NodeId v = q.front();
      q.pop();
      for (EdgeId e : graph.incident(v)) {
        const NodeId w = graph.other_end(e, v);
        if (seen[w] || residual(e, v) <= 1e-12) continue;
        seen[w] = 1;
        via[w] = e;
        q.push(w);
      }
    }
    if (!seen[t]) break;

    double push = kInf;
    for (NodeId v = t; v != s;) {
      const EdgeId e = via[v];
      const NodeId u = graph.other_end(e, v);
      push = std::min(push, residual(e, u));
      v = u;
    }
    push = std::min(push, target - result.value);
    for (NodeId v = t; v != s;) {
      const EdgeId e = via[v];
      const NodeId u = graph.other_end(e, v);
      flow[e] += (graph.edge(e).u == u) ? push : -push;
      v = u;
    }
    result.value += push;
  }

  result.source_side.assign(n, 0);
  std::queue<NodeId> q;
  q.push(s);
  result.source_side[s] = 1;
  while (!q.empty()) {
    const NodeId v = q.front();
    q.pop();
    for (EdgeId e : graph.incident(v)) {
      const NodeId w = graph.other_end(e, v);
      if (result.source_side[w] || residual(e, v) <= 1e-12) continue;
      result.source_side[w] = 1;
      q.push(w);
    }
  }
  return result;
}

std::vector<ViolatedCut> separate_subtour(const LinModel& model,
                                          const EdgeVector& x,
                                          double tolerance) {
  const Instance& inst = *model.instance();
  const SparseGraph& g = inst.graph;
  std::vector<ViolatedCut> cuts;
  std::set<std::vector<NodeId>> seen_sets;

  for (NodeId k : inst.destinations) {
    if (k == inst.home) continue;
    const auto mf = max_flow_min_cut(g, x, inst.home, k, 2.0);
    if (mf.value >= 2.0 - tolerance) continue;

    std::vector<NodeId> cut_side;  // complement of the home side
    for (NodeId v = 0; v < g.node_count(); ++v)
      if (!mf.source_side[v]) cut_side.push_back(v);
    if (!seen_sets.insert(cut_side).second) continue;

    ViolatedCut cut;
    cut.kind = ViolatedCut::Kind::Subtour;
    cut.node_set = cut_side;
    cut.violation = 2.0 - mf.value;
    cut.row = make_subtour_row(model, cut_side, "sub");
    cuts.push_back(std::move(cut));
  }
  return cuts;
}

Separator parity_separator(double tolerance) {
  return [tolerance](const LinModel& model, const LpSolution& sol) {
    return separate_parity(model, model.edge_values(VarKind::Y, sol.primal),
                           tolerance);
  };
}

Separator subtour_separator(double tolerance) {
  return [tolerance](const LinModel& model, const LpSolution& sol) {
    return separate_subtour(model, model.edge_values(VarKind::X, sol.primal),
                            tolerance);
  };
}

std::string CutPool::signature(const Row& row) const {
  auto sorted = row.coeffs;
  std::sort(sorted.begin(), sorted.end());
  std::ostringstream os;
  os << static_cast<int>(row.sense) << '|' << row.rhs;
  for (auto [col, coef] : sorted) os << '|' << col << ':' << coef;
  return os.str();
}

bool CutPool::add(Row row) {
  if (!seen_.insert(signature(row)).second) return false;
  row.name = row.name + "_" + std::to_string(rows_.size());
  rows_.push_back(std::move(row));
  return true;
}

CutLoopResult cutting_plane(LinModel& model,
                            const std::vector<Separator>& separators,
                            const CutLoopLimits& limits,
                            const SolverConfig& lp_config) {
  CutLoopResult result;
  CutPool pool;
  result.solution = solve_lp(model, lp_config);

  for (result.rounds = 0; result.rounds < limits.max_rounds; ++result.rounds) {
    if (result.solution.status != LpStatus::Optimal) return result;

    std::vector<Row> fresh;
    for (const Separator& separate : separators) {
      for (ViolatedCut& cut : separate(model, result.solution)) {
        Row row = cut.row;
        if (pool.add(row)) {
          fresh.push_back(pool.rows().back());
          result.cuts.push_back(std::move(cut));
        }
      }
    }
    if (fresh.empty()) return result;
    result.solution = resolve_with_rows(model, result.solution,
                                        std::move(fresh), lp_config);
  }
  result.hit_round_limit = true;
  return result;
}

CutLoopResult solve_relaxation(LinModel& model, const CutLoopLimits& limits,
                               const SolverConfig& lp_config) {
  std::vector<Separator> separators;
  if (model.options().subtour_mode == SubtourMode::CuttingPlane)
    separators.push_back(subtour_separator());
  if (model.options().formulation == Formulation::YZ &&
      model.options().parity_mode == ParityMode::Separate)
    separators.push_back(parity_separator());
  if (separators.empty()) {
    CutLoopResult result;
    result.solution = solve_lp(model, lp_config);
    return result;
  }
  return cutting_plane(model, separators, limits, lp_config);
}

}  // namespace gtsp
