#include "gtsp/model.hpp"

#include <stdexcept>

namespace gtsp {

std::string VarRef::to_string() const {
  switch (kind) {
    case VarKind::X: return "x" + std::to_string(edge);
    case VarKind::Y: return "y" + std::to_string(edge);
    case VarKind::Z: return "z" + std::to_string(edge);
    case VarKind::T: return "t" + std::to_string(edge);
    case VarKind::TDirected:
      return "td_" + std::to_string(tail) + "_" + std::to_string(head);
    case VarKind::PhiFlow:
      return "phi" + std::to_string(commodity) + "_" + std::to_string(tail) +
             "_" + std::to_string(head);
    case VarKind::SubtourFlow:
      return "f" + std::to_string(commodity) + "_" + std::to_string(tail) +
             "_" + std::to_string(head);
  }
  return "?";
}

int LinModel::add_column(const VarRef& ref, double lower, double upper,
                         double objective, bool integral) {
  if (lower > upper) throw std::invalid_argument("column bounds crossed");
  if (index_.count(ref)) throw std::invalid_argument("duplicate column " + ref.to_string());
  const int j = column_count();
  columns_.push_back(Column{ref, lower, upper, objective, integral});
  index_[ref] = j;
  return j;
}

int LinModel::add_row(Row row) {
  for (auto [col, coef] : row.coeffs) {
    if (col < 0 || col >= column_count())
      throw std::invalid_argument("row " + row.name + " references missing column");
    if (coef == 0.0)
      throw std::invalid_argument("row " + row.name + " stores a zero coefficient");
  }
  rows_.push_back(std::move(row));
  return row_count() - 1;
}

void LinModel::set_bounds(int column, double lower, double upper) {
  if (lower > upper) throw std::invalid_argument("column bounds crossed");
  columns_.at(column).lower = lower;
  columns_.at(column).upper = upper;
}

int LinModel::column_index(const VarRef& ref) const {
  auto it = index_.find(ref);
  return it == index_.end() ? -1 : it->second;
}

EdgeVector LinModel::edge_values(VarKind kind,
                                 const std::vector<double>& primal) const {
  if (!instance_) throw std::logic_error("model has no instance");
  EdgeVector out(instance_->graph.edge_count());
  for (EdgeId e = 0; e < out.size(); ++e) {
    const int j = column_index({kind, e, kNoNode, kNoNode, kNoNode});
    if (j >= 0) out[e] = primal[j];
  }
  return out;
}

}  // namespace gtsp
