#pragma once

#include <vector>

#include "gtsp/model.hpp"

namespace gtsp {

enum class LpStatus : std::uint8_t { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(LpStatus status);

struct SolverConfig {
  double tol_feas = 1e-7;   // primal feasibility tolerance
  double tol_opt = 1e-9;    // reduced-cost optimality tolerance
  long max_iterations = 200000;
  int bland_streak = 50;    // degenerate pivots before Bland's rule kicks in
  int refactor_interval = 128;
};

/// Basis entry that survives appending rows to the model: structural
/// entries reference model columns, slack/artificial entries reference rows.
struct BasisEntry {
  enum Kind : std::uint8_t { Structural, Slack, Artificial } kind = Slack;
  int index = -1;  // model column (Structural) or row (Slack/Artificial)
};

enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper, FreeZero };

struct BasisDescriptor {
  std::vector<BasisEntry> basic;        // one entry per row
  std::vector<VarStatus> column_state;  // per model column
  std::vector<VarStatus> slack_state;   // per row
  bool empty() const { return basic.empty(); }
};

struct LpSolution {
  LpStatus status = LpStatus::IterationLimit;
  double objective = 0.0;
  std::vector<double> primal;    // per model column
  std::vector<double> duals;     // per model row
  std::vector<double> reduced;   // per model column
  BasisDescriptor basis;
  long iterations = 0;

  bool optimal() const { return status == LpStatus::Optimal; }
};

/// Bounded-variable primal simplex (Dantzig pricing, Bland fallback,
/// phase-1 artificials, all-slack start). Deterministic for fixed input.
LpSolution solve_lp(const LinModel& model, const SolverConfig& config = {});

/// Appends `new_rows` to `model` and re-solves, warm-starting from
/// `previous`'s basis. Result is semantically identical to a cold solve of
/// the extended model.
LpSolution resolve_with_rows(LinModel& model, const LpSolution& previous,
                             std::vector<Row> new_rows,
                             const SolverConfig& config = {});

/// Warm-started solve from an explicit basis (falls back to a cold start
/// when the basis is stale or singular).
LpSolution solve_lp_from_basis(const LinModel& model,
                               const BasisDescriptor& basis,
                               const SolverConfig& config = {});

}  // namespace gtsp
