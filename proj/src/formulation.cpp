#include "gtsp/formulation.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace gtsp {

namespace {

void add_edge_columns(LinModel& model, const Instance& instance,
                      bool with_yz, bool x_integral, double x_upper) {
  const SparseGraph& g = instance.graph;
  for (const Edge& e : g.edges())
    model.add_column(VarRef::x(e.id), 0.0, x_upper, e.cost, x_integral);
  if (!with_yz) return;
  for (const Edge& e : g.edges())
    model.add_column(VarRef::y(e.id), 0.0, 1.0, 0.0, true);
  for (const Edge& e : g.edges())
    model.add_column(VarRef::z(e.id), 0.0, 1.0, 0.0, false);
}

void add_degree_rows(LinModel& model, const Instance& instance,
                     RowSense sense, bool all_nodes) {
  const SparseGraph& g = instance.graph;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (!all_nodes && g.node(v).kind != NodeKind::Destination) continue;
    model.add_row(make_degree_row(model, v, sense, 2.0,
                                  "deg_" + std::to_string(v)));
  }
}

void add_parity_rows(LinModel& model, const Instance& instance) {
  for (NodeId v = 0; v < instance.graph.node_count(); ++v)
    for (Row& row : enumerate_parity_rows(model, v))
      model.add_row(std::move(row));
}

void add_halfz_rows(LinModel& model, const Instance& instance) {
  // A two-destination tour legitimately doubles its only edge, which this
  // family would forbid; emit the rows only from three destinations up.
  if (instance.destination_count() < 3) return;
  const SparseGraph& g = instance.graph;
  for (const Edge& e : g.edges()) {
    if (g.node(e.u).kind != NodeKind::Destination ||
        g.node(e.v).kind != NodeKind::Destination)
      continue;
    model.add_row(make_halfz_row(model, e.id));
  }
}

/// Internal node order for the flow systems: everything except home in
/// ascending id order, home last.
std::vector<NodeId> order_home_last(const std::vector<NodeId>& nodes,
                                    NodeId home) {
  std::vector<NodeId> order;
  order.reserve(nodes.size());
  for (NodeId v : nodes)
    if (v != home) order.push_back(v);
  order.push_back(home);
  return order;
}

}  // namespace

Row make_degree_row(const LinModel& model, NodeId v, RowSense sense, double rhs,
                    const std::string& name) {
  Row row;
  row.name = name;
  row.sense = sense;
  row.rhs = rhs;
  for (EdgeId e : model.instance()->graph.incident(v))
    row.coeffs.push_back({model.column_index(VarRef::x(e)), 1.0});
  return row;
}

Row make_parity_row(const LinModel& model, NodeId v,
                    const std::vector<EdgeId>& odd_subset) {
  if (odd_subset.size() % 2 == 0)
    throw std::invalid_argument("parity row needs an odd edge subset");
  const auto& incident = model.instance()->graph.incident(v);
  unsigned long mask = 0;
  for (EdgeId e : odd_subset) {
    const auto it = std::find(incident.begin(), incident.end(), e);
    if (it == incident.end())
      throw std::invalid_argument("parity subset edge not incident to node");
    mask |= 1ul << (it - incident.begin());
  }
  if (static_cast<std::size_t>(std::popcount(mask)) != odd_subset.size())
    throw std::invalid_argument("parity subset has repeated edges");

  Row row;
  row.name = "par_" + std::to_string(v) + "_" + std::to_string(mask);
  row.sense = RowSense::GE;
  row.rhs = 1.0 - static_cast<double>(odd_subset.size());
  for (std::size_t i = 0; i < incident.size(); ++i) {
    const int col = model.column_index(VarRef::y(incident[i]));
    row.coeffs.push_back({col, (mask >> i) & 1 ? -1.0 : 1.0});
  }
  return row;
}

std::vector<Row> enumerate_parity_rows(const LinModel& model, NodeId v) {
  const auto& incident = model.instance()->graph.incident(v);
  const int deg = static_cast<int>(incident.size());
  if (deg > model.options().enumerate_cap)
    throw std::runtime_error("degree cap exceeded at node " + std::to_string(v) +
                             ": degree " + std::to_string(deg) +
                             " > " + std::to_string(model.options().enumerate_cap));
  std::vector<Row> rows;
  if (deg == 0) return rows;
  rows.reserve(1u << (deg - 1));
  for (unsigned long mask = 1; mask < (1ul << deg); ++mask) {
    if (std::popcount(mask) % 2 == 0) continue;
    std::vector<EdgeId> subset;
    for (int i = 0; i < deg; ++i)
      if ((mask >> i) & 1) subset.push_back(incident[i]);
    rows.push_back(make_parity_row(model, v, subset));
  }
  return rows;
}

Row make_halfz_row(const LinModel& model, EdgeId e) {
  const SparseGraph& g = model.instance()->graph;
  const Edge& edge = g.edge(e);
  if (g.node(edge.u).kind != NodeKind::Destination ||
      g.node(edge.v).kind != NodeKind::Destination)
    throw std::invalid_argument("half-z row needs destination endpoints");

  Row row;
  row.name = "halfz_" + std::to_string(e);
  row.sense = RowSense::GE;
  row.rhs = 4.0;
  std::vector<double> coeff_x(g.edge_count(), 0.0);
  for (EdgeId inc : g.incident(edge.u)) coeff_x[inc] += 1.0;
  for (EdgeId inc : g.incident(edge.v)) coeff_x[inc] += 1.0;
  for (EdgeId other = 0; other < g.edge_count(); ++other)
    if (coeff_x[other] != 0.0)
      row.coeffs.push_back({model.column_index(VarRef::x(other)), coeff_x[other]});
  row.coeffs.push_back({model.column_index(VarRef::z(e)), -2.0});
  return row;
}

Row make_subtour_row(const LinModel& model, const std::vector<NodeId>& node_set,
                     const std::string& name) {
  const SparseGraph& g = model.instance()->graph;
  std::vector<char> in_set(g.node_count(), 0);
  for (NodeId v : node_set) in_set[v] = 1;
  Row row;
  row.name = name;
  row.sense = RowSense::GE;
  row.rhs = 2.0;
  for (const Edge& e : g.edges())
    if (in_set[e.u] != in_set[e.v])
      row.coeffs.push_back({model.column_index(VarRef::x(e.id)), 1.0});
  return row;
}

void add_tree_system(LinModel& model) {
  const Instance& inst = *model.instance();
  const SparseGraph& g = inst.graph;
  if (!inst.steiners.empty())
    throw std::invalid_argument(
        "tree system spans every node and requires an all-destination instance");

  std::vector<NodeId> all_nodes(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) all_nodes[v] = v;
  const auto order = order_home_last(all_nodes, inst.home);
  const int n = static_cast<int>(order.size());
  std::vector<int> internal(g.node_count(), 0);  // 1-based, home == n
  for (int i = 0; i < n; ++i) internal[order[i]] = i + 1;

  for (const Edge& e : g.edges())
    model.add_column(VarRef::t(e.id), 0.0, 1.0, 0.0, false);
  for (const Edge& e : g.edges()) {
    model.add_column(VarRef::t_arc(e.id, e.u, e.v), 0.0, 1.0, 0.0, false);
    model.add_column(VarRef::t_arc(e.id, e.v, e.u), 0.0, 1.0, 0.0, false);
  }

  // Unit flow toward each non-home node k from the nodes above it; flow
  // into any higher node and flow out of k are pinned to zero.
  for (int ki = 1; ki <= n - 1; ++ki) {
    const NodeId k = order[ki - 1];
    for (const Edge& e : g.edges()) {
      for (const auto [tail, head] :
           {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
        const bool pinned = internal[head] > ki || tail == k;
        model.add_column(VarRef::phi(k, e.id, tail, head), 0.0,
                         pinned ? 0.0 : 1.0, 0.0, false);
      }
    }
  }

  for (int ki = 1; ki <= n - 1; ++ki) {
    const NodeId k = order[ki - 1];
    Row inflow;
    inflow.name = "phi_in_" + std::to_string(k);
    inflow.sense = RowSense::EQ;
    inflow.rhs = 1.0;
    for (EdgeId e : g.incident(k))
      inflow.coeffs.push_back(
          {model.column_index(VarRef::phi(k, e, g.other_end(e, k), k)), 1.0});
    model.add_row(std::move(inflow));

    for (int ji = 1; ji < ki; ++ji) {
      const NodeId j = order[ji - 1];
      Row balance;
      balance.name = "phi_bal_" + std::to_string(k) + "_" + std::to_string(j);
      balance.sense = RowSense::EQ;
      balance.rhs = 0.0;
      for (EdgeId e : g.incident(j)) {
        const NodeId w = g.other_end(e, j);
        balance.coeffs.push_back(
            {model.column_index(VarRef::phi(k, e, w, j)), 1.0});
        balance.coeffs.push_back(
            {model.column_index(VarRef::phi(k, e, j, w)), -1.0});
      }
      model.add_row(std::move(balance));
    }

    for (const Edge& e : g.edges()) {
      for (const auto [tail, head] :
           {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
        const int phi_col = model.column_index(VarRef::phi(k, e.id, tail, head));
        if (model.column(phi_col).upper == 0.0) continue;  // pinned
        Row cap;
        cap.name = "phi_cap_" + std::to_string(k) + "_" + std::to_string(tail) +
                   "_" + std::to_string(head) + "_e" + std::to_string(e.id);
        cap.sense = RowSense::LE;
        cap.rhs = 0.0;
        cap.coeffs = {{phi_col, 1.0},
                      {model.column_index(VarRef::t_arc(e.id, tail, head)), -1.0}};
        model.add_row(std::move(cap));
      }
    }
  }

  for (const Edge& e : g.edges()) {
    Row split;
    split.name = "tsplit_" + std::to_string(e.id);
    split.sense = RowSense::EQ;
    split.rhs = 0.0;
    split.coeffs = {{model.column_index(VarRef::t(e.id)), 1.0},
                    {model.column_index(VarRef::t_arc(e.id, e.u, e.v)), -1.0},
                    {model.column_index(VarRef::t_arc(e.id, e.v, e.u)), -1.0}};
    model.add_row(std::move(split));
  }

  Row tsum;
  tsum.name = "tsum";
  tsum.sense = RowSense::LE;
  tsum.rhs = n - 1.0;
  for (const Edge& e : g.edges())
    tsum.coeffs.push_back({model.column_index(VarRef::t(e.id)), 1.0});
  model.add_row(std::move(tsum));

  for (const Edge& e : g.edges()) {
    Row dom;
    dom.name = "tdom_" + std::to_string(e.id);
    dom.sense = RowSense::LE;
    dom.rhs = 0.0;
    dom.coeffs = {{model.column_index(VarRef::t(e.id)), 1.0},
                  {model.column_index(VarRef::y(e.id)), -1.0},
                  {model.column_index(VarRef::z(e.id)), -1.0}};
    model.add_row(std::move(dom));
  }
}

void add_subtour_flow_system(LinModel& model) {
  const Instance& inst = *model.instance();
  const SparseGraph& g = inst.graph;
  const auto order = order_home_last(inst.destinations, inst.home);
  const int d = static_cast<int>(order.size());
  std::vector<int> dest_internal(g.node_count(), 0);  // 0 for Steiner nodes
  for (int i = 0; i < d; ++i) dest_internal[order[i]] = i + 1;

  // Two units of x-capacitated flow reach each non-home destination from
  // the destinations indexed above it; Steiner nodes only relay.
  for (int ki = 1; ki <= d - 1; ++ki) {
    const NodeId k = order[ki - 1];
    for (const Edge& e : g.edges()) {
      for (const auto [tail, head] :
           {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
        const bool pinned = dest_internal[head] > ki || tail == k;
        model.add_column(VarRef::flow(k, e.id, tail, head), 0.0,
                         pinned ? 0.0 : 2.0, 0.0, false);
      }
    }
  }

  for (int ki = 1; ki <= d - 1; ++ki) {
    const NodeId k = order[ki - 1];
    Row inflow;
    inflow.name = "f_in_" + std::to_string(k);
    inflow.sense = RowSense::EQ;
    inflow.rhs = 2.0;
    for (EdgeId e : g.incident(k))
      inflow.coeffs.push_back(
          {model.column_index(VarRef::flow(k, e, g.other_end(e, k), k)), 1.0});
    model.add_row(std::move(inflow));

    for (NodeId j = 0; j < g.node_count(); ++j) {
      const bool lower_dest = dest_internal[j] > 0 && dest_internal[j] < ki;
      const bool steiner = g.node(j).kind == NodeKind::Steiner;
      if (!lower_dest && !steiner) continue;
      Row balance;
      balance.name = "f_bal_" + std::to_string(k) + "_" + std::to_string(j);
      balance.sense = RowSense::EQ;
      balance.rhs = 0.0;
      for (EdgeId e : g.incident(j)) {
        const NodeId w = g.other_end(e, j);
        balance.coeffs.push_back(
            {model.column_index(VarRef::flow(k, e, w, j)), 1.0});
        balance.coeffs.push_back(
            {model.column_index(VarRef::flow(k, e, j, w)), -1.0});
      }
      model.add_row(std::move(balance));
    }

    for (const Edge& e : g.edges()) {
      const int fwd = model.column_index(VarRef::flow(k, e.id, e.u, e.v));
      const int rev = model.column_index(VarRef::flow(k, e.id, e.v, e.u));
      if (model.column(fwd).upper == 0.0 && model.column(rev).upper == 0.0)
        continue;
      Row cap;
      cap.name = "f_cap_" + std::to_string(k) + "_e" + std::to_string(e.id);
      cap.sense = RowSense::LE;
      cap.rhs = 0.0;
      cap.coeffs = {{fwd, 1.0},
                    {rev, 1.0},
                    {model.column_index(VarRef::x(e.id)), -1.0}};
      model.add_row(std::move(cap));
    }
  }
}

LinModel build_cfn(const Instance& instance, const BuildOptions& options) {
  instance.validate();
  BuildOptions opts = options;
  opts.formulation = Formulation::CFN;
  LinModel model(&instance, opts);
  add_edge_columns(model, instance, /*with_yz=*/false, /*x_integral=*/true, 2.0);
  add_degree_rows(model, instance, RowSense::GE, /*all_nodes=*/false);
  if (opts.subtour_mode == SubtourMode::CompactFlow)
    add_subtour_flow_system(model);
  return model;
}

LinModel build_yz(const Instance& instance, const BuildOptions& options) {
  instance.validate();
  BuildOptions opts = options;
  opts.formulation = Formulation::YZ;
  LinModel model(&instance, opts);
  add_edge_columns(model, instance, /*with_yz=*/true, /*x_integral=*/false, 2.0);

  const SparseGraph& g = instance.graph;
  for (const Edge& e : g.edges()) {
    Row link;
    link.name = "link_" + std::to_string(e.id);
    link.sense = RowSense::EQ;
    link.rhs = 0.0;
    link.coeffs = {{model.column_index(VarRef::x(e.id)), 1.0},
                   {model.column_index(VarRef::y(e.id)), -1.0},
                   {model.column_index(VarRef::z(e.id)), -2.0}};
    model.add_row(std::move(link));
  }
  for (const Edge& e : g.edges()) {
    Row use;
    use.name = "use_" + std::to_string(e.id);
    use.sense = RowSense::LE;
    use.rhs = 1.0;
    use.coeffs = {{model.column_index(VarRef::y(e.id)), 1.0},
                  {model.column_index(VarRef::z(e.id)), 1.0}};
    model.add_row(std::move(use));
  }

  add_degree_rows(model, instance, RowSense::GE, /*all_nodes=*/false);
  if (opts.parity_mode == ParityMode::Enumerate) add_parity_rows(model, instance);
  if (opts.include_halfz) add_halfz_rows(model, instance);
  if (opts.include_tree) add_tree_system(model);
  if (opts.subtour_mode == SubtourMode::CompactFlow)
    add_subtour_flow_system(model);
  return model;
}

LinModel build_dfj(const Instance& instance, const BuildOptions& options) {
  instance.validate();
  if (!instance.steiners.empty())
    throw std::invalid_argument("one-visit TSP model needs all-destination instance");
  BuildOptions opts = options;
  opts.formulation = Formulation::DFJ;
  LinModel model(&instance, opts);
  add_edge_columns(model, instance, /*with_yz=*/false, /*x_integral=*/true, 1.0);
  add_degree_rows(model, instance, RowSense::EQ, /*all_nodes=*/true);
  if (opts.subtour_mode == SubtourMode::CompactFlow)
    add_subtour_flow_system(model);
  return model;
}

}  // namespace gtsp
