#include "gtsp/simplex.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace gtsp {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
    case LpStatus::IterationLimit: return "IterationLimit";
  }
  return "?";
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kDegenerateStep = 1e-10;

/// Model folded into equality form: structural columns (fixed ones
/// substituted out), one slack per row, artificials appended on demand.
struct StandardForm {
  int n_struct = 0;
  int m = 0;
  std::vector<std::vector<std::pair<int, double>>> cols;  // per column (row, coef)
  std::vector<double> lower, upper;
  std::vector<double> rhs;
  std::vector<int> model_col;     // structural column -> model column
  std::vector<int> std_col;       // model column -> structural column or -1
  std::vector<double> fixed_value;  // per model column, valid when std_col < 0
  double objective_constant = 0.0;
  bool const_infeasible = false;  // a row with no free columns fails its rhs

  int slack(int row) const { return n_struct + row; }
  int total() const { return static_cast<int>(cols.size()); }
};

StandardForm build_standard_form(const LinModel& model, double tol,
                                 const BasisDescriptor* warm = nullptr) {
  StandardForm sf;
  const int nm = model.column_count();
  sf.std_col.assign(nm, -1);
  sf.fixed_value.assign(nm, 0.0);

  for (int j = 0; j < nm; ++j) {
    const Column& c = model.column(j);
    // Fixed columns are substituted out, except ones the warm basis holds
    // basic; keeping those intact preserves the basis factor.
    const bool keep_for_basis =
        warm && j < static_cast<int>(warm->column_state.size()) &&
        warm->column_state[j] == VarStatus::Basic;
    if (c.lower == c.upper && !keep_for_basis) {
      sf.fixed_value[j] = c.lower;
      sf.objective_constant += c.objective * c.lower;
      continue;
    }
    sf.std_col[j] = sf.n_struct;
    sf.model_col.push_back(j);
    sf.cols.emplace_back();
    sf.lower.push_back(c.lower);
    sf.upper.push_back(c.upper);
    ++sf.n_struct;
  }

  sf.m = model.row_count();
  sf.rhs.assign(sf.m, 0.0);
  for (int i = 0; i < sf.m; ++i) {
    const Row& row = model.row(i);
    double b = row.rhs;
    bool empty = true;
    for (auto [j, coef] : row.coeffs) {
      if (sf.std_col[j] >= 0) {
        sf.cols[sf.std_col[j]].push_back({i, coef});
        empty = false;
      } else {
        b -= coef * sf.fixed_value[j];
      }
    }
    sf.rhs[i] = b;
    if (empty) {
      const bool bad = (row.sense == RowSense::LE && b < -tol) ||
                       (row.sense == RowSense::GE && b > tol) ||
                       (row.sense == RowSense::EQ && std::abs(b) > tol);
      if (bad) sf.const_infeasible = true;
    }
  }

  // Slack columns: a.x + s = b with s sign-restricted by the row sense.
  for (int i = 0; i < sf.m; ++i) {
    sf.cols.push_back({{i, 1.0}});
    switch (model.row(i).sense) {
      case RowSense::LE: sf.lower.push_back(0.0); sf.upper.push_back(kInf); break;
      case RowSense::GE: sf.lower.push_back(-kInf); sf.upper.push_back(0.0); break;
      case RowSense::EQ: sf.lower.push_back(0.0); sf.upper.push_back(0.0); break;
    }
  }
  return sf;
}

class Simplex {
 public:
  Simplex(const LinModel& model, const SolverConfig& cfg,
          const BasisDescriptor* warm)
      : model_(model),
        cfg_(cfg),
        sf_(build_standard_form(model, cfg.tol_feas, warm)) {}

  LpSolution run(const BasisDescriptor* warm);

 private:
  enum class StepResult { Moved, OptimalReached, Unbounded, LimitHit };

  const LinModel& model_;
  const SolverConfig& cfg_;
  StandardForm sf_;

  int m_ = 0;
  std::vector<double> binv_;      // row-major m x m basis inverse
  std::vector<int> basic_;        // row -> column
  std::vector<VarStatus> state_;  // per column
  std::vector<double> xb_;        // basic values per row
  std::vector<double> cost_;      // active objective (phase 1 or 2)
  int n_artificial_ = 0;
  long iterations_ = 0;
  int degenerate_streak_ = 0;
  int pivots_since_refactor_ = 0;

  double bound_value(int j) const {
    switch (state_[j]) {
      case VarStatus::AtLower: return sf_.lower[j];
      case VarStatus::AtUpper: return sf_.upper[j];
      default: return 0.0;
    }
  }

  void set_default_nonbasic(int j) {
    const double lo = sf_.lower[j], up = sf_.upper[j];
    if (std::isfinite(lo) && std::isfinite(up))
      state_[j] = (std::abs(up) < std::abs(lo)) ? VarStatus::AtUpper
                                                : VarStatus::AtLower;
    else if (std::isfinite(lo))
      state_[j] = VarStatus::AtLower;
    else if (std::isfinite(up))
      state_[j] = VarStatus::AtUpper;
    else
      state_[j] = VarStatus::FreeZero;
  }

  void add_artificial(int row, double sign) {
    sf_.cols.push_back({{row, sign}});
    sf_.lower.push_back(0.0);
    sf_.upper.push_back(kInf);
    state_.push_back(VarStatus::Basic);
    cost_.push_back(0.0);
    ++n_artificial_;
  }

  bool is_artificial(int j) const { return j >= sf_.n_struct + sf_.m; }

  std::vector<double> multiply_binv(int col) const {  // B^-1 * A_col
    std::vector<double> w(m_, 0.0);
    for (auto [i, a] : sf_.cols[col])
      for (int r = 0; r < m_; ++r) w[r] += a * binv_[r * m_ + i];
    return w;
  }

  void compute_basic_values() {
    std::vector<double> b = sf_.rhs;
    for (int j = 0; j < sf_.total(); ++j) {
      if (state_[j] == VarStatus::Basic) continue;
      const double v = bound_value(j);
      if (v != 0.0)
        for (auto [i, a] : sf_.cols[j]) b[i] -= a * v;
    }
    for (int r = 0; r < m_; ++r) {
      double s = 0.0;
      for (int i = 0; i < m_; ++i) s += binv_[r * m_ + i] * b[i];
      xb_[r] = s;
    }
  }

  /// Rebuilds B^-1 from the basic column set by Gauss-Jordan elimination.
  /// Basis slots are permuted so near-unit (slack) columns pivot first,
  /// which keeps fill-in low. Returns false when the matrix is singular.
  bool refactorize() {
    std::stable_sort(basic_.begin(), basic_.end(), [&](int a, int b) {
      return sf_.cols[a].size() < sf_.cols[b].size();
    });
    std::vector<double> mat(m_ * m_, 0.0);
    for (int r = 0; r < m_; ++r)
      for (auto [i, a] : sf_.cols[basic_[r]]) mat[i * m_ + r] = a;
    std::vector<double> inv(m_ * m_, 0.0);
    for (int i = 0; i < m_; ++i) inv[i * m_ + i] = 1.0;

    for (int k = 0; k < m_; ++k) {
      int piv = -1;
      double best = 1e-11;
      for (int r = k; r < m_; ++r) {
        const double v = std::abs(mat[r * m_ + k]);
        if (v > best) {
          best = v;
          piv = r;
        }
      }
      if (piv < 0) return false;
      if (piv != k) {
        for (int c = 0; c < m_; ++c) {
          std::swap(mat[piv * m_ + c], mat[k * m_ + c]);
          std::swap(inv[piv * m_ + c], inv[k * m_ + c]);
        }
      }
      const double scale = 1.0 / mat[k * m_ + k];
      for (int c = 0; c < m_; ++c) {
        mat[k * m_ + c] *= scale;
        inv[k * m_ + c] *= scale;
      }
      for (int r = 0; r < m_; ++r) {
        if (r == k) continue;
        const double f = mat[r * m_ + k];
        if (f == 0.0) continue;
        for (int c = 0; c < m_; ++c) {
          mat[r * m_ + c] -= f * mat[k * m_ + c];
          inv[r * m_ + c] -= f * inv[k * m_ + c];
        }
      }
    }
    binv_ = std::move(inv);
    pivots_since_refactor_ = 0;
    return true;
  }

  std::vector<double> compute_duals() const {  // y = c_B B^-1
    std::vector<double> y(m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      const double cb = cost_[basic_[r]];
      if (cb == 0.0) continue;
      for (int i = 0; i < m_; ++i) y[i] += cb * binv_[r * m_ + i];
    }
    return y;
  }

  double reduced_cost(int j, const std::vector<double>& y) const {
    double d = cost_[j];
    for (auto [i, a] : sf_.cols[j]) d -= y[i] * a;
    return d;
  }

  double row_dot(int j, const std::vector<double>& y) const {
    double d = 0.0;
    for (auto [i, a] : sf_.cols[j]) d += y[i] * a;
    return d;
  }

  /// Gradient of the total bound violation w.r.t. basic variable values.
  double infeasibility_gradient(int r) const {
    const int j = basic_[r];
    if (xb_[r] < sf_.lower[j] - cfg_.tol_feas) return -1.0;
    if (xb_[r] > sf_.upper[j] + cfg_.tol_feas) return 1.0;
    return 0.0;
  }

  double total_infeasibility() const {
    double f = 0.0;
    for (int r = 0; r < m_; ++r) {
      const int j = basic_[r];
      f += std::max(0.0, sf_.lower[j] - xb_[r]);
      f += std::max(0.0, xb_[r] - sf_.upper[j]);
    }
    return f;
  }

  std::vector<double> composite_duals() const {  // g^T B^-1
    std::vector<double> y(m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      const double g = infeasibility_gradient(r);
      if (g == 0.0) continue;
      for (int i = 0; i < m_; ++i) y[i] += g * binv_[r * m_ + i];
    }
    return y;
  }

  StepResult iterate(bool bland, bool composite) {
    const auto y = composite ? composite_duals() : compute_duals();
    int entering = -1;
    double best_score = cfg_.tol_opt;
    int direction = 0;
    for (int j = 0; j < sf_.total(); ++j) {
      if (state_[j] == VarStatus::Basic) continue;
      if (sf_.lower[j] == sf_.upper[j]) continue;  // fixed, never enters
      const double d = composite ? -row_dot(j, y) : reduced_cost(j, y);
      int dir = 0;
      if (state_[j] == VarStatus::AtLower && d < -cfg_.tol_opt) dir = +1;
      else if (state_[j] == VarStatus::AtUpper && d > cfg_.tol_opt) dir = -1;
      else if (state_[j] == VarStatus::FreeZero && std::abs(d) > cfg_.tol_opt)
        dir = d < 0 ? +1 : -1;
      if (dir == 0) continue;
      if (bland) {
        entering = j;
        direction = dir;
        break;
      }
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        entering = j;
        direction = dir;
      }
    }
    if (entering < 0) return StepResult::OptimalReached;

    const auto w = multiply_binv(entering);

    // Ratio test: the entering variable moves by t >= 0 in `direction`;
    // basic variable r changes at rate -direction*w[r].
    double t_best = kInf;
    int leave_row = -1;
    bool leave_at_upper = false;
    if (std::isfinite(sf_.lower[entering]) && std::isfinite(sf_.upper[entering]))
      t_best = sf_.upper[entering] - sf_.lower[entering];

    double best_piv = 0.0;
    for (int r = 0; r < m_; ++r) {
      const double beta = direction * w[r];
      if (std::abs(beta) <= kPivotTol) continue;
      const int jb = basic_[r];
      const bool below = composite && xb_[r] < sf_.lower[jb] - cfg_.tol_feas;
      const bool above = composite && xb_[r] > sf_.upper[jb] + cfg_.tol_feas;
      double t;
      bool at_upper;
      if (below) {
        // Violated basic: blocks only when climbing back to its lower bound.
        if (beta >= 0) continue;
        t = (xb_[r] - sf_.lower[jb]) / beta;
        at_upper = false;
      } else if (above) {
        if (beta <= 0) continue;
        t = (xb_[r] - sf_.upper[jb]) / beta;
        at_upper = true;
      } else if (beta > 0) {  // basic value decreases toward its lower bound
        if (!std::isfinite(sf_.lower[jb])) continue;
        t = (xb_[r] - sf_.lower[jb]) / beta;
        at_upper = false;
      } else {  // increases toward its upper bound
        if (!std::isfinite(sf_.upper[jb])) continue;
        t = (xb_[r] - sf_.upper[jb]) / beta;
        at_upper = true;
      }
      if (t < 0) t = 0;  // drift guard
      const bool better =
          bland ? (t < t_best - kDegenerateStep ||
                   (t <= t_best + kDegenerateStep && leave_row >= 0 &&
                    jb < basic_[leave_row]) ||
                   (t <= t_best + kDegenerateStep && leave_row < 0 && t < t_best))
                : (t < t_best - 1e-12 ||
                   (t <= t_best + 1e-12 &&
                    (leave_row < 0 || std::abs(w[r]) > best_piv)));
      if (better) {
        t_best = t;
        leave_row = r;
        leave_at_upper = at_upper;
        best_piv = std::abs(w[r]);
      }
    }

    if (!std::isfinite(t_best)) return StepResult::Unbounded;

    ++iterations_;
    degenerate_streak_ = (t_best <= kDegenerateStep) ? degenerate_streak_ + 1 : 0;

    if (leave_row < 0) {
      // Bound flip: entering runs to its opposite bound, basis unchanged.
      for (int r = 0; r < m_; ++r) xb_[r] -= t_best * direction * w[r];
      state_[entering] = (direction > 0) ? VarStatus::AtUpper : VarStatus::AtLower;
      return StepResult::Moved;
    }

    const double enter_value = bound_value(entering) + direction * t_best;
    for (int r = 0; r < m_; ++r) xb_[r] -= t_best * direction * w[r];
    const int leaving = basic_[leave_row];
    state_[leaving] = leave_at_upper ? VarStatus::AtUpper : VarStatus::AtLower;
    basic_[leave_row] = entering;
    state_[entering] = VarStatus::Basic;
    xb_[leave_row] = enter_value;

    // Product-form update of B^-1.
    const double piv = w[leave_row];
    for (int r = 0; r < m_; ++r) {
      if (r == leave_row) continue;
      const double f = w[r] / piv;
      if (f == 0.0) continue;
      for (int c = 0; c < m_; ++c)
        binv_[r * m_ + c] -= f * binv_[leave_row * m_ + c];
    }
    for (int c = 0; c < m_; ++c) binv_[leave_row * m_ + c] /= piv;

    if (++pivots_since_refactor_ >= cfg_.refactor_interval) {
      if (!refactorize())
        throw std::runtime_error("simplex: basis refactorization failed");
      compute_basic_values();
    }
    return StepResult::Moved;
  }

  /// Runs pivots until optimal/unbounded/limit for the active cost vector.
  StepResult optimize(bool composite = false) {
    bool bland = false;
    while (true) {
      if (iterations_ >= cfg_.max_iterations) return StepResult::LimitHit;
      if (composite && total_infeasibility() <= cfg_.tol_feas)
        return StepResult::OptimalReached;
      const StepResult res = iterate(bland, composite);
      if (res != StepResult::Moved) return res;
      if (degenerate_streak_ >= cfg_.bland_streak) bland = true;
      else if (degenerate_streak_ == 0) bland = false;
    }
  }

  void drive_out_artificials() {
    for (int r = 0; r < m_; ++r) {
      const int j = basic_[r];
      if (!is_artificial(j)) continue;
      const auto y_row = std::vector<double>(binv_.begin() + r * m_,
                                             binv_.begin() + (r + 1) * m_);
      int replacement = -1;
      double best = 1e-7;
      for (int c = 0; c < sf_.n_struct + sf_.m; ++c) {
        if (state_[c] == VarStatus::Basic) continue;
        if (sf_.lower[c] == sf_.upper[c]) continue;
        double alpha = 0.0;
        for (auto [i, a] : sf_.cols[c]) alpha += y_row[i] * a;
        if (std::abs(alpha) > best) {
          best = std::abs(alpha);
          replacement = c;
        }
      }
      if (replacement < 0) continue;  // redundant row, artificial stays at 0
      const auto w = multiply_binv(replacement);
      const double piv = w[r];
      state_[j] = VarStatus::AtLower;
      basic_[r] = replacement;
      state_[replacement] = VarStatus::Basic;
      for (int rr = 0; rr < m_; ++rr) {
        if (rr == r) continue;
        const double f = w[rr] / piv;
        if (f == 0.0) continue;
        for (int c = 0; c < m_; ++c) binv_[rr * m_ + c] -= f * binv_[r * m_ + c];
      }
      for (int c = 0; c < m_; ++c) binv_[r * m_ + c] /= piv;
      compute_basic_values();
    }
  }

  LpSolution extract(LpStatus status) {
    LpSolution sol;
    sol.status = status;
    sol.iterations = iterations_;

    std::vector<double> x(sf_.n_struct + sf_.m, 0.0);
    for (int j = 0; j < sf_.n_struct + sf_.m; ++j)
      if (state_[j] != VarStatus::Basic) x[j] = bound_value(j);
    for (int r = 0; r < m_; ++r)
      if (basic_[r] < sf_.n_struct + sf_.m) x[basic_[r]] = xb_[r];

    const int nm = model_.column_count();
    sol.primal.assign(nm, 0.0);
    for (int j = 0; j < nm; ++j)
      sol.primal[j] = sf_.std_col[j] >= 0 ? x[sf_.std_col[j]] : sf_.fixed_value[j];

    double obj = sf_.objective_constant;
    for (int j = 0; j < sf_.n_struct; ++j)
      obj += model_.column(sf_.model_col[j]).objective * x[j];
    sol.objective = obj;

    const auto y = compute_duals();
    sol.duals = y;
    sol.reduced.assign(nm, 0.0);
    for (int j = 0; j < nm; ++j)
      if (sf_.std_col[j] >= 0) sol.reduced[j] = reduced_cost(sf_.std_col[j], y);

    sol.basis.basic.resize(m_);
    for (int r = 0; r < m_; ++r) {
      const int j = basic_[r];
      if (j < sf_.n_struct)
        sol.basis.basic[r] = {BasisEntry::Structural, sf_.model_col[j]};
      else if (j < sf_.n_struct + sf_.m)
        sol.basis.basic[r] = {BasisEntry::Slack, j - sf_.n_struct};
      else
        sol.basis.basic[r] = {BasisEntry::Artificial, sf_.cols[j][0].first};
    }
    sol.basis.column_state.assign(nm, VarStatus::AtLower);
    for (int j = 0; j < nm; ++j)
      if (sf_.std_col[j] >= 0) sol.basis.column_state[j] = state_[sf_.std_col[j]];
    sol.basis.slack_state.resize(sf_.m);
    for (int i = 0; i < sf_.m; ++i)
      sol.basis.slack_state[i] = state_[sf_.slack(i)];
    return sol;
  }

  /// Clamps out-of-bound basic slacks to their nearest bound and absorbs the
  /// residual into a fresh artificial; returns the phase-1 row set.
  bool install_artificials() {
    bool any = false;
    for (int r = 0; r < m_; ++r) {
      const int j = basic_[r];
      const double v = xb_[r];
      double target = v;
      if (v < sf_.lower[j] - cfg_.tol_feas) target = sf_.lower[j];
      else if (v > sf_.upper[j] + cfg_.tol_feas) target = sf_.upper[j];
      else continue;
      const double residual = v - target;  // signed violation
      state_[j] = (target == sf_.lower[j]) ? VarStatus::AtLower : VarStatus::AtUpper;
      add_artificial(r, residual > 0 ? 1.0 : -1.0);
      basic_[r] = sf_.total() - 1;
      xb_[r] = std::abs(residual);
      any = true;
    }
    return any;
  }
};

LpSolution Simplex::run(const BasisDescriptor* warm) {
  m_ = sf_.m;
  if (sf_.const_infeasible) {
    LpSolution sol;
    sol.status = LpStatus::Infeasible;
    sol.primal.assign(model_.column_count(), 0.0);
    sol.duals.assign(m_, 0.0);
    sol.reduced.assign(model_.column_count(), 0.0);
    return sol;
  }

  state_.assign(sf_.total(), VarStatus::AtLower);
  basic_.assign(m_, -1);
  xb_.assign(m_, 0.0);
  cost_.assign(sf_.total(), 0.0);

  bool warm_ok = false;
  if (warm && !warm->empty() &&
      static_cast<int>(warm->column_state.size()) == model_.column_count() &&
      static_cast<int>(warm->basic.size()) <= m_) {
    // Restore as much of the previous basis as still applies; rows beyond
    // the stored basis keep their slacks basic.
    warm_ok = true;
    for (int j = 0; j < sf_.total(); ++j) set_default_nonbasic(j);
    const auto restore_state = [&](int col, VarStatus st) {
      if (st == VarStatus::Basic) return;
      if (st == VarStatus::AtLower && !std::isfinite(sf_.lower[col])) return;
      if (st == VarStatus::AtUpper && !std::isfinite(sf_.upper[col])) return;
      state_[col] = st;
    };
    for (int j = 0; j < model_.column_count(); ++j)
      if (sf_.std_col[j] >= 0)
        restore_state(sf_.std_col[j], warm->column_state[j]);
    for (int i = 0; i < static_cast<int>(warm->slack_state.size()) && i < m_; ++i)
      restore_state(sf_.slack(i), warm->slack_state[i]);
    std::vector<char> row_used(m_, 0);
    for (int r = 0; r < static_cast<int>(warm->basic.size()) && warm_ok; ++r) {
      const BasisEntry& be = warm->basic[r];
      int col = -1;
      if (be.kind == BasisEntry::Structural) {
        if (be.index < model_.column_count()) col = sf_.std_col[be.index];
        if (col < 0) continue;  // column got fixed since; fill with a slack
      } else if (be.kind == BasisEntry::Slack) {
        if (be.index < m_) col = sf_.slack(be.index);
      } else {
        if (be.index < m_) {
          add_artificial(be.index, 1.0);
          sf_.upper.back() = 0.0;  // fixed at zero, kept only to fill the basis
          col = sf_.total() - 1;
        }
      }
      if (col < 0 || state_[col] == VarStatus::Basic) { warm_ok = false; break; }
      basic_[r] = col;
      state_[col] = VarStatus::Basic;
      row_used[r] = 1;
    }
    for (int r = 0; r < m_ && warm_ok; ++r) {
      if (row_used[r]) continue;
      // Prefer this row's own slack; fall back to the first free slack.
      int col = sf_.slack(r);
      if (state_[col] == VarStatus::Basic) {
        col = -1;
        for (int i = 0; i < m_; ++i) {
          if (state_[sf_.slack(i)] != VarStatus::Basic) {
            col = sf_.slack(i);
            break;
          }
        }
      }
      if (col < 0) { warm_ok = false; break; }
      basic_[r] = col;
      state_[col] = VarStatus::Basic;
    }
    if (warm_ok) {
      binv_.assign(m_ * m_, 0.0);
      warm_ok = refactorize();
    }
  }

  bool slack_basis = !warm_ok;
  if (!warm_ok) {
    // All-slack start: structurals rest at their nearest finite bound.
    n_artificial_ = 0;
    state_.assign(sf_.total(), VarStatus::AtLower);
    for (int j = 0; j < sf_.total(); ++j) set_default_nonbasic(j);
    for (int r = 0; r < m_; ++r) {
      basic_[r] = sf_.slack(r);
      state_[sf_.slack(r)] = VarStatus::Basic;
    }
    binv_.assign(m_ * m_, 0.0);
    for (int r = 0; r < m_; ++r) binv_[r * m_ + r] = 1.0;
  }
  compute_basic_values();

  double scale = 1.0;
  for (double b : sf_.rhs) scale = std::max(scale, std::abs(b));

  for (int attempt = 0; attempt < 3; ++attempt) {
    if (slack_basis) {
      // Artificial-variable phase 1 on the all-slack basis: out-of-bound
      // slacks are clamped and their residuals absorbed by artificials.
      if (install_artificials()) {
        std::fill(cost_.begin(), cost_.end(), 0.0);
        for (int j = sf_.n_struct + sf_.m; j < sf_.total(); ++j)
          if (sf_.upper[j] > 0) cost_[j] = 1.0;
        const StepResult p1 = optimize();
        if (p1 == StepResult::LimitHit) return extract(LpStatus::IterationLimit);
        double infeas = 0.0;
        for (int r = 0; r < m_; ++r)
          if (is_artificial(basic_[r]) && sf_.upper[basic_[r]] > 0)
            infeas += xb_[r];
        if (infeas > cfg_.tol_feas * scale * 10)
          return extract(LpStatus::Infeasible);
        for (int j = sf_.n_struct + sf_.m; j < sf_.total(); ++j)
          sf_.upper[j] = 0.0;
        drive_out_artificials();
      }
    } else if (total_infeasibility() > cfg_.tol_feas) {
      // Warm basis: minimize the total bound violation directly.
      const StepResult pc = optimize(/*composite=*/true);
      if (pc == StepResult::LimitHit) return extract(LpStatus::IterationLimit);
      if (pc == StepResult::Unbounded || total_infeasibility() > cfg_.tol_feas * scale * 10) {
        if (pc != StepResult::Unbounded)
          return extract(LpStatus::Infeasible);
        // Numerical dead end: restart from scratch.
        slack_basis = true;
        cost_.assign(sf_.total(), 0.0);
        state_.assign(sf_.total(), VarStatus::AtLower);
        for (int j = 0; j < sf_.total(); ++j) set_default_nonbasic(j);
        for (int r = 0; r < m_; ++r) {
          basic_[r] = sf_.slack(r);
          state_[sf_.slack(r)] = VarStatus::Basic;
        }
        binv_.assign(m_ * m_, 0.0);
        for (int r = 0; r < m_; ++r) binv_[r * m_ + r] = 1.0;
        compute_basic_values();
        continue;
      }
    }

    std::fill(cost_.begin(), cost_.end(), 0.0);
    for (int j = 0; j < sf_.n_struct; ++j)
      cost_[j] = model_.column(sf_.model_col[j]).objective;
    const StepResult p2 = optimize();
    if (p2 == StepResult::LimitHit) return extract(LpStatus::IterationLimit);
    if (p2 == StepResult::Unbounded) return extract(LpStatus::Unbounded);

    // Confirm feasibility; refactorize only when enough pivots have gone by
    // for drift to matter. Drift sends us back to the repair step.
    if (pivots_since_refactor_ >= 32) {
      if (!refactorize())
        throw std::runtime_error("simplex: basis refactorization failed");
    }
    compute_basic_values();
    bool feasible = true;
    for (int r = 0; r < m_; ++r) {
      const int j = basic_[r];
      if (xb_[r] < sf_.lower[j] - cfg_.tol_feas ||
          xb_[r] > sf_.upper[j] + cfg_.tol_feas) {
        feasible = false;
        break;
      }
    }
    if (feasible) return extract(LpStatus::Optimal);
    slack_basis = false;  // repair the drifted basis compositely
  }
  throw std::runtime_error("simplex: failed to reach a stable feasible basis");
}

}  // namespace

LpSolution solve_lp(const LinModel& model, const SolverConfig& config) {
  Simplex solver(model, config, nullptr);
  return solver.run(nullptr);
}

LpSolution solve_lp_from_basis(const LinModel& model,
                               const BasisDescriptor& basis,
                               const SolverConfig& config) {
  Simplex solver(model, config, &basis);
  return solver.run(&basis);
}

LpSolution resolve_with_rows(LinModel& model, const LpSolution& previous,
                             std::vector<Row> new_rows,
                             const SolverConfig& config) {
  for (auto& row : new_rows) model.add_row(std::move(row));
  return solve_lp_from_basis(model, previous.basis, config);
}

}  // namespace gtsp
