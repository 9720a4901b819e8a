#pragma once

#include <string>

#include "hslab/config.hpp"

namespace hslab {

/// Exit codes shared by all commands.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,        // parse/validation problems, unwritable outputs
    kExitNoFixedPoint = 3,
    kExitMaxIterations = 4,
};

/// classify: derived exponents, rate laws, and the regime, as JSON on stdout
/// (and to `out_path` when non-empty).
int cmd_classify(const RunConfig& cfg, const std::string& out_path = {});

/// solve: runs the fixed-point solver and writes the solution bundle JSON.
int cmd_solve(const RunConfig& cfg, const std::string& out_path = {},
              const std::string& cache_dir = {});

/// analyze: reads a solution bundle and emits the report JSON plus a CSV of
/// (r, u, v, local slopes).
int cmd_analyze(const RunConfig& cfg, const std::string& solution_path,
                const std::string& report_path = {},
                const std::string& csv_path = {},
                const std::string& cache_dir = {});

/// sweep: Cartesian sweep over the [sweep] lists; one CSV row per tuple in
/// deterministic order. Tuple failures are recorded in-row.
int cmd_sweep(const RunConfig& cfg, const std::string& csv_path = {},
              int jobs = 1, const std::string& cache_dir = {});

/// hls-check: index checks plus the dilation-invariance table.
int cmd_hls_check(const RunConfig& cfg, const std::string& out_path = {},
                  const std::string& cache_dir = {});

} // namespace hslab
