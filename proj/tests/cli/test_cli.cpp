#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include <allee/orbits.hpp>
#include <allee/presets.hpp>

#include "allee_cli/commands.hpp"
#include "allee_cli/scenario.hpp"

using namespace allee;
using namespace allee::cli;
namespace fs = std::filesystem;
using doctest::Approx;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("floquet-allee-test-" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> row;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

int run(Command c, const Scenario& sc, const fs::path& out, RunOptions o = {}) {
  o.out_dir = out;
  std::ostringstream sink;
  return run_command(c, sc, o, sink);
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(FLOQUET_ALLEE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void check_same(const SeasonalCoefficient& a, const SeasonalCoefficient& b) {
  CHECK(a.mean() == b.mean());
  for (double t : {0.0, 50.0, 123.0, 300.0}) CHECK(a(t) == Approx(b(t)).epsilon(1e-15));
}

const char* kMinimal = R"(
name: minimal
command: simulate
model:
  family: predator_prey
  period: 365
  growth:
    kind: gilpin_strong
    r: 0.11
    K_minus: 0.02
    K_plus: 1.0
  response:
    kind: holling_ii
    b: 0.88
    p: 1.3
  gamma: 0.39
  delta1: 0.19
  delta2: 0.0
simulate:
  initial: [0.2, 0.1]
  periods: 0
)";

}  // namespace

TEST_CASE("builtin scenarios parse") {
  const auto names = builtin_names();
  for (const char* expect : {"table1", "table2", "fig-a", "fig-b", "fig-c", "fig-d", "fig-e", "fig-f"}) {
    CHECK(std::find(names.begin(), names.end(), expect) != names.end());
  }
  for (const auto& n : names) {
    INFO(n);
    CHECK_NOTHROW(load_scenario(n));
  }
  const fs::path file = fs::path(FLOQUET_ALLEE_SCENARIO_DIR) / "fig-b.yaml";
  CHECK(load_scenario(file.string()).name == "fig-b");
}

TEST_CASE("parameter tables are encoded verbatim") {
  const Scenario t1 = load_scenario("table1");
  presets::PredatorPreyTable pt;
  pt.p = 1.3;
  const ModelSystem ref = presets::predator_prey(pt);
  check_same(t1.model.growth.r, ref.growth.r);
  check_same(t1.model.growth.k_minus, ref.growth.k_minus);
  check_same(t1.model.growth.k_plus, ref.growth.k_plus);
  check_same(t1.model.response.b, ref.response.b);
  check_same(t1.model.response.p, ref.response.p);
  check_same(t1.model.gamma, ref.gamma);
  check_same(t1.model.delta1, ref.delta1);
  CHECK(t1.model.period == 365.0);

  const Scenario t2 = load_scenario("table2");
  const ModelSystem lg = presets::leslie_gower();
  CHECK(t2.model.family == Family::LeslieGowerPM);
  check_same(t2.model.growth.r, lg.growth.r);
  check_same(t2.model.growth.k_minus, lg.growth.k_minus);
  check_same(t2.model.growth.k_plus, lg.growth.k_plus);
  check_same(t2.model.response.b, lg.response.b);
  check_same(t2.model.response.h, lg.response.h);
  check_same(t2.model.response.p, lg.response.p);
  check_same(t2.model.c, lg.c);
  check_same(t2.model.c2_or_a, lg.c2_or_a);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_scenario("model: [1, 2"), ConfigError);
  CHECK_THROWS_AS(load_scenario("/nonexistent/file.yaml"), ConfigError);
  std::string bad = kMinimal;
  bad.replace(bad.find("predator_prey"), 13, "nonsense");
  try {
    parse_scenario(bad, "bad.yaml");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("bad.yaml:") == 0);
  }
  std::string negative = kMinimal;
  negative.replace(negative.find("[0.2, 0.1]"), 10, "[-0.2, 0.1]");
  CHECK_THROWS_AS(parse_scenario(negative), ConfigError);

  CHECK(parse_seed_grid("20x30") == std::pair{20, 30});
  CHECK_THROWS_AS(parse_seed_grid("20"), ConfigError);
  CHECK_THROWS_AS(parse_seed_grid("0x3"), ConfigError);
  const auto tol = parse_tolerances("1e-9,1e-12");
  CHECK(tol.first == 1e-9);
  CHECK(tol.second == 1e-12);
  CHECK_THROWS_AS(parse_tolerances("1e-9"), ConfigError);
}

TEST_CASE("simulate") {
  SUBCASE("zero horizon gives the initial state") {
    const Scenario sc = parse_scenario(kMinimal);
    const fs::path out = scratch("zero");
    CHECK(run(Command::Simulate, sc, out) == kExitOk);
    const auto rows = read_csv(out / "trajectory.csv");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"t", "N", "P"});
    CHECK(std::stod(rows[1][0]) == 0.0);
    CHECK(std::stod(rows[1][1]) == 0.2);
    CHECK(std::stod(rows[1][2]) == 0.1);
    CHECK(fs::exists(out / "trajectory.gp"));
  }
  SUBCASE("predator extinction at p = 1") {
    const Scenario sc = load_scenario("fig-a");
    const fs::path out = scratch("fig-a");
    CHECK(run(Command::Simulate, sc, out) == kExitOk);
    const auto rows = read_csv(out / "trajectory.csv");
    const auto& last = rows.back();
    const double n_end = std::stod(last[1]), p_end = std::stod(last[2]);
    const BoundaryOrbits b = prey_only_orbits_strong(sc.model);
    CHECK(p_end < 1e-6);
    // the horizon is a whole number of periods
    CHECK(std::abs(n_end - b.upper.initial_state.n) < 1e-3);
    CHECK(slurp(out / "period.txt").find("extinct") != std::string::npos);
  }
  SUBCASE("identical runs give identical files") {
    const Scenario sc = load_scenario("fig-b");
    const fs::path a = scratch("det-a"), b = scratch("det-b");
    REQUIRE(run(Command::Simulate, sc, a) == kExitOk);
    REQUIRE(run(Command::Simulate, sc, b) == kExitOk);
    CHECK(slurp(a / "trajectory.csv") == slurp(b / "trajectory.csv"));
  }
  SUBCASE("tolerance override") {
    Scenario sc = parse_scenario(kMinimal);
    sc.simulate.periods = 1;
    RunOptions o;
    o.tol = {{1e-6, 1e-9}};
    CHECK(run(Command::Simulate, sc, scratch("tol"), o) == kExitOk);
  }
}

TEST_CASE("exit codes") {
  SUBCASE("verify") {
    const Scenario sc = load_scenario("table1");
    const fs::path out = scratch("verify");
    CHECK(run(Command::Verify, sc, out) == kExitOk);
    CHECK(slurp(out / "verify.txt").find("all checks passed") != std::string::npos);

    std::string text = kMinimal;
    text.replace(text.find("K_minus: 0.02"), 13, "K_minus: 2.00");
    const Scenario broken = parse_scenario(text);
    CHECK(run(Command::Verify, broken, scratch("verify-bad")) == kExitHypothesis);
    CHECK(run(Command::Simulate, broken, scratch("verify-gate")) == kExitHypothesis);
    RunOptions skip;
    skip.skip_verify = true;
    CHECK(run(Command::Simulate, broken, scratch("verify-skip"), skip) == kExitOk);
  }
  SUBCASE("numeric failure") {
    std::string text = kMinimal;
    text.replace(text.find("r: 0.11"), 7, "r: 1e12");
    Scenario sc = parse_scenario(text);
    sc.simulate.periods = 1;
    CHECK(run(Command::Simulate, sc, scratch("numeric")) == kExitNumeric);
  }
  SUBCASE("sweep needs the predator-prey family") {
    const Scenario sc = load_scenario("table2");
    CHECK(run(Command::Sweep, sc, scratch("sweep-lg")) == kExitConfig);
  }
  SUBCASE("binary") {
    CHECK(run_binary("list") == 0);
    CHECK(run_binary("simulate --config does-not-exist --out " + scratch("bin").string()) == kExitConfig);
    CHECK(run_binary("simulate --config fig-a --tol nope --out " + scratch("bin").string()) == kExitConfig);
    CHECK(run_binary("simulate") != 0);
    CHECK(run_binary("verify --config table1 --out " + scratch("bin-verify").string()) == 0);
  }
}

TEST_CASE("orbits") {
  SUBCASE("p = 1 lists only boundary orbits") {
    const Scenario sc = load_scenario("fig-a");
    const fs::path out = scratch("orbits-a");
    RunOptions o;
    o.seed_grid = {{8, 8}};
    CHECK(run(Command::Orbits, sc, out, o) == kExitOk);
    const auto rows = read_csv(out / "orbits.csv");
    CHECK(rows[0][0] == "n");
    CHECK(rows.size() == 4);
    CHECK(slurp(out / "ledger.txt").find("total 1") != std::string::npos);
  }
  SUBCASE("p = 1.3 adds a stable interior orbit; backward curves on request") {
    const Scenario sc = load_scenario("fig-b");
    const fs::path out = scratch("orbits-b");
    RunOptions o;
    o.seed_grid = {{10, 10}};
    o.backward = true;
    CHECK(run(Command::Orbits, sc, out, o) == kExitOk);
    const auto rows = read_csv(out / "orbits.csv");
    REQUIRE(rows.size() == 5);
    int stable_interior = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (std::stod(rows[i][1]) > 0 && std::stod(rows[i][2]) > 0 && rows[i][7] == "stable") {
        ++stable_interior;
      }
    }
    CHECK(stable_interior == 1);
    const auto back = read_csv(out / "backward.csv");
    CHECK(back[0] == std::vector<std::string>{"curve", "t", "N", "P"});
    CHECK(back.size() > 10);
  }
}

TEST_CASE("regime report") {
  const Scenario sc = load_scenario("fig-b");
  const fs::path out = scratch("regime");
  RunOptions o;
  o.seed_grid = {{10, 10}};
  CHECK(run(Command::Regime, sc, out, o) == kExitOk);
  CHECK(slurp(out / "regime.txt").find("case: B") != std::string::npos);
  const auto j = nlohmann::json::parse(slurp(out / "regime.json"));
  CHECK(j["case"] == "B");
  CHECK(j["lambda2_minus"].get<double>() < 1.0);
  CHECK(j["lambda2_plus"].get<double>() > 1.0);
  CHECK(j["index_ledger"]["total"] == 1);
  CHECK(j["interior_orbits"].size() >= 1);
}

TEST_CASE("sweep over the first threshold") {
  Scenario sc = load_scenario("table1");
  sc.sweep.lo = 0.5;
  sc.sweep.hi = 2.0;
  sc.sweep.samples = 7;
  const fs::path out = scratch("sweep");
  CHECK(run(Command::Sweep, sc, out) == kExitOk);
  const auto rows = read_csv(out / "sweep.csv");
  CHECK(rows.size() == 8);
  const std::string th = slurp(out / "thresholds.txt");
  std::istringstream is(th);
  int crossings = 0;
  double value = 0.0;
  for (std::string line; std::getline(is, line);) {
    if (line.find("lambda2_plus=1") != std::string::npos) {
      ++crossings;
      value = std::stod(line.substr(line.rfind(' ') + 1));
    }
  }
  CHECK(crossings == 1);
  CHECK(value == Approx(1.21).epsilon(0.05 / 1.21));
}
