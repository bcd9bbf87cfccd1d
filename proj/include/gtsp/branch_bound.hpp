#pragma once

#include <optional>
#include <vector>

#include "gtsp/cuts.hpp"
#include "gtsp/model.hpp"
#include "gtsp/simplex.hpp"

namespace gtsp {

enum class BranchStrategy : std::uint8_t {
  YBranch,      // fix fractional y (and, as a safeguard, z) variables
  ParityBranch, // bound fractional x; split odd degree sums q into <=q-1 / >=q+1
};

enum class MipStatus : std::uint8_t { Optimal, Infeasible, GapLimit };

const char* to_string(MipStatus status);

struct MipLimits {
  long max_nodes = 2'000'000;
  double time_limit_sec = 1e18;
  double gap_tol = 1e-6;        // bound gap proving optimality
  int node_cut_rounds = 40;     // separation rounds per node
  bool log_nodes = false;       // one line per node on stderr
};

struct MipSolution {
  MipStatus status = MipStatus::Infeasible;
  double objective = 0.0;
  EdgeVector x, y, z;
  std::vector<NodeId> walk;     // closed walk from home (empty if infeasible)
  long node_count = 0;
  double best_bound = 0.0;
  long z_branches = 0;          // safeguard z branches taken (normally 0)
};

/// Branch and bound (with cutting planes per the model's BuildOptions) on a
/// model from build_yz (YBranch) or build_cfn / build_dfj (ParityBranch).
MipSolution solve_mip(const LinModel& model, BranchStrategy strategy,
                      const MipLimits& limits = {},
                      const SolverConfig& lp_config = {});

/// Doubled minimum spanning tree: x = 2 on MST edges. Feasible by
/// construction; objective is twice the MST cost.
MipSolution heuristic_tour(const Instance& instance);

/// Minimum spanning tree edge ids (Kruskal, ties by edge id).
std::vector<EdgeId> minimum_spanning_tree(const SparseGraph& graph);

struct Certificate {
  std::vector<EdgeId> tree_edges;  // spanning tree inside the y+z support
  EdgeVector x;                    // y + 2z
  std::vector<NodeId> walk;
};

/// Verifies an integral (y, z) pair the way a solution extractor must: a
/// spanning tree exists inside the y+z support, every y-degree is even,
/// and x = y + 2z supports a closed walk from home. Throws
/// std::runtime_error naming the violation otherwise.
Certificate certify_solution(const Instance& instance, const EdgeVector& y,
                             const EdgeVector& z);

}  // namespace gtsp
