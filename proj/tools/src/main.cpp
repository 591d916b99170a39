#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "allee_cli/commands.hpp"
#include "allee_cli/scenario.hpp"

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("floquet-allee");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("%^[%l]%$ %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("FLOQUET_ALLEE_LOG")) {
    spdlog::set_level(spdlog::level::from_str(env));
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace allee::cli;
  setup_logging();

  CLI::App app{"Floquet analysis of seasonally forced predator-prey models with Allee effects"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  unsigned jobs = 0;
  std::string seed_grid;
  std::string tol;
  bool backward = false;
  bool skip_verify = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "Scenario file or builtin name")->required();
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--jobs", jobs, "Worker threads (0 = all processors)");
    sub->add_option("--seed-grid", seed_grid, "Newton seed grid NxM");
    sub->add_option("--tol", tol, "Integrator tolerances REL,ABS");
    sub->add_flag("--backward", backward, "Write backward-time curves (orbits)");
    sub->add_flag("--skip-verify", skip_verify, "Skip hypothesis verification");
  };
  std::optional<Command> chosen;
  for (Command c : {Command::Simulate, Command::Orbits, Command::Regime, Command::Sweep,
                    Command::Verify}) {
    auto* sub = app.add_subcommand(std::string(to_string(c)));
    add_common(sub);
    sub->callback([&chosen, c] { chosen = c; });
  }
  bool run_scenario = false;
  auto* run = app.add_subcommand("run", "Run the scenario's own command");
  add_common(run);
  run->callback([&run_scenario] { run_scenario = true; });
  auto* list = app.add_subcommand("list", "List builtin scenarios");
  list->callback([] {
    for (const auto& name : builtin_names()) std::cout << name << '\n';
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  if (!chosen && !run_scenario) return kExitOk;

  RunOptions options;
  Scenario scenario;
  try {
    scenario = load_scenario(config);
    if (run_scenario) {
      if (!scenario.command) throw ConfigError(config + ": scenario has no 'command'");
      chosen = scenario.command;
    }
    if (!seed_grid.empty()) options.seed_grid = parse_seed_grid(seed_grid);
    if (!tol.empty()) options.tol = parse_tolerances(tol);
  } catch (const ConfigError& e) {
    spdlog::error("config: {}", e.what());
    return kExitConfig;
  }
  options.out_dir = !out_dir.empty()          ? out_dir
                    : !scenario.output.empty() ? scenario.output
                                               : "out/" + scenario.name;
  options.jobs = jobs;
  options.backward = backward;
  options.skip_verify = skip_verify;
  return run_command(*chosen, scenario, options, std::cout);
}
