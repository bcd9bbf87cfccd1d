#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gtsp/branch_bound.hpp"
#include "gtsp/cuts.hpp"
#include "gtsp/io.hpp"
#include "gtsp/model.hpp"

namespace gtsp {

struct GapReport {
  std::string name;
  int destinations = 0;
  int steiner = 0;
  int edges_with_steiner = 0;
  int edges_without_steiner = 0;
  double lp_cfn = std::numeric_limits<double>::quiet_NaN();
  double lp_yz = std::numeric_limits<double>::quiet_NaN();
  double ip = std::numeric_limits<double>::quiet_NaN();
  double gap_abs = std::numeric_limits<double>::quiet_NaN();   // ip - lp_yz
  double gap_pct = std::numeric_limits<double>::quiet_NaN();   // 100 gap / ip
  double closure_pct = std::numeric_limits<double>::quiet_NaN();
  double z_edge_pct = std::numeric_limits<double>::quiet_NaN();
};

enum class SolveMode : std::uint8_t { Relax, Ip, Both };
enum class OutputStyle : std::uint8_t { Table, Csv };

struct GeneratorSpec {
  enum class Kind : std::uint8_t { Paths, Cubic } kind = Kind::Paths;
  int paths = 3, len = 4;
  double cost = 1.0;
  CubicBase base = CubicBase::K4;
  int times = 1;
};

struct RunConfig {
  std::string graph_path;     // with instance_path, one instance source
  std::string instance_path;
  std::optional<GeneratorSpec> generator;  // the other instance source
  BuildOptions options;
  SolveMode mode = SolveMode::Both;
  OutputStyle output = OutputStyle::Table;
  bool remove_steiner = false;
  MipLimits mip_limits;
  CutLoopLimits cut_limits;
};

Instance load_instance(const RunConfig& config);

/// Builds the instance, solves the requested relaxations/IPs (CFN baseline
/// and the y/z formulation when mode == Both) and fills one report row.
GapReport run(const RunConfig& config);

/// Same, on an already-built instance.
GapReport run_on_instance(const Instance& instance, const BuildOptions& options,
                          SolveMode mode = SolveMode::Both,
                          const MipLimits& mip_limits = {},
                          const CutLoopLimits& cut_limits = {});

std::string report_csv_header();
std::string report_csv_row(const GapReport& report);
std::string report_table(const GapReport& report);

/// Fig-style scatter data: closure % against share of support edges
/// carrying z > 0, one CSV row per report.
std::string emit_scatter_data(const std::vector<GapReport>& reports);

}  // namespace gtsp
