#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <allee/linalg.hpp>
#include <allee/seasonal.hpp>

namespace allee::cli {

/// Malformed or inconsistent scenario file (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { Simulate, Orbits, Regime, Sweep, Verify };

std::string_view to_string(Command c) noexcept;
std::optional<Command> parse_command(std::string_view name);

struct SimulateConfig {
  State initial{0.2, 0.1};
  double periods = 50.0;
  int samples_per_period = 100;
  /// Section analysis after the run, when n_max is set.
  std::optional<int> detect_n_max;
  int transient = 200;
};

struct OrbitsConfig {
  int period_multiple = 1;
  int nx = 20;
  int ny = 20;
  int backward_periods = 20;
  std::vector<State> backward_starts;
  int basin_periods = 100;
  std::vector<State> basin_starts;
};

struct SweepConfig {
  std::string parameter = "p.mean";
  double lo = 0.5;
  double hi = 2.0;
  int samples = 16;
};

struct Scenario {
  std::string name;
  std::optional<Command> command;
  ModelSystem model;
  SimulateConfig simulate;
  OrbitsConfig orbits;
  SweepConfig sweep;
  std::string output;
};

/// `source` names the file in error messages.
Scenario parse_scenario(std::string_view yaml, std::string_view source = "<scenario>");

/// A file path, or the name of a builtin scenario when no such file exists.
Scenario load_scenario(const std::string& path_or_name);

std::vector<std::string> builtin_names();
std::optional<std::string_view> builtin_text(std::string_view name);

/// "20x30" -> {20, 30}
std::pair<int, int> parse_seed_grid(std::string_view text);
/// "1e-9,1e-12" -> {1e-9, 1e-12}
std::pair<double, double> parse_tolerances(std::string_view text);

}  // namespace allee::cli
