#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <utility>

#include <allee/regime.hpp>

#include "allee_cli/scenario.hpp"

namespace allee::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumeric = 3,
  kExitHypothesis = 4,
};

struct RunOptions {
  std::filesystem::path out_dir;
  unsigned jobs = 0;
  std::optional<std::pair<int, int>> seed_grid;
  bool backward = false;
  bool skip_verify = false;
  std::optional<std::pair<double, double>> tol;
};

/// Runs one command, writing artifacts under options.out_dir and a short
/// summary to `out`. Exceptions are mapped onto the exit-code contract.
int run_command(Command command, const Scenario& scenario, const RunOptions& options,
                std::ostream& out);

/// Machine-readable regime report.
std::string regime_json(const RegimeReport& report);

/// Gnuplot script for trajectory.csv: N(t), P(t) and the (N, P, t) curve.
std::string plot_script(const std::string& csv_name, const std::string& title);

}  // namespace allee::cli
