#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "gmhd/config.hpp"

namespace gmhd {

/// Exit statuses of the command-line verbs.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitResult = 2 };

/// Command-line values that take precedence over the config file.
struct CliOverrides {
  std::optional<std::string> out_dir;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
};

/// Runs one simulation. Writes <out>/series.csv, <out>/report.txt,
/// checkpoints (checkpoint_t<time>.bin) and <out>/final.bin.
/// 0 on completion, 2 on blow-up (series up to the event is written),
/// 1 on usage or configuration errors.
int cmd_run(const std::string& config_path, const CliOverrides& cli, std::ostream& out,
            std::ostream& err);

/// Runs the alpha x beta x n grid (at most 200 cells) on a worker pool, one
/// subdirectory per cell, and writes <out>/summary.csv in cell order.
/// Workers: --workers, then GMHD2D_WORKERS, then sweep.workers, then the
/// machine parallelism.
int cmd_sweep(const std::string& config_path, const CliOverrides& cli, std::ostream& out,
              std::ostream& err);

/// Kernel tables (kernel_beta_<beta>.csv) and the L^1 bound report
/// (kernel_l1.csv) for every beta in [kernel]. 2 on quadrature failure.
int cmd_kernel(const std::string& config_path, const CliOverrides& cli, std::ostream& out,
               std::ostream& err);

/// Prints a checkpoint header.
int cmd_inspect(const std::string& checkpoint_path, std::ostream& out, std::ostream& err);

/// Outcome of one run as reported by cmd_run and the sweep summary.
struct RunOutcome {
  std::string status;  // completed, blowup, or failed: <message>
  BkmSummary summary;
  Real energy_residual = 0.0;
  std::size_t steps = 0;
  Real final_time = 0.0;
};

/// cmd_run without the argument handling; throws gmhd::Error on bad input.
RunOutcome execute_run(const RunConfig& config, std::ostream& log);

}  // namespace gmhd
