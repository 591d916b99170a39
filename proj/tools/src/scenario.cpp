#include "allee_cli/scenario.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include <allee/errors.hpp>

namespace allee::cli {

std::string_view to_string(Command c) noexcept {
  switch (c) {
    case Command::Simulate: return "simulate";
    case Command::Orbits: return "orbits";
    case Command::Regime: return "regime";
    case Command::Sweep: return "sweep";
    case Command::Verify: return "verify";
  }
  return "?";
}

std::optional<Command> parse_command(std::string_view name) {
  for (Command c : {Command::Simulate, Command::Orbits, Command::Regime, Command::Sweep,
                    Command::Verify}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view source) : source_(source) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& what) const {
    std::ostringstream os;
    os << source_;
    if (node.IsDefined() && node.Mark().line >= 0) os << ':' << node.Mark().line + 1;
    os << ": " << what;
    throw ConfigError(os.str());
  }

  template <class T>
  T scalar(const YAML::Node& node, const std::string& key) const {
    const YAML::Node v = node[key];
    if (!v) fail(node, "missing key '" + key + "'");
    try {
      return v.as<T>();
    } catch (const YAML::Exception&) {
      fail(v, "bad value for '" + key + "'");
    }
  }

  template <class T>
  T scalar_or(const YAML::Node& node, const std::string& key, T fallback) const {
    if (!node[key]) return fallback;
    return scalar<T>(node, key);
  }

  State state(const YAML::Node& node) const {
    if (!node.IsSequence() || node.size() != 2) fail(node, "expected a pair [N, P]");
    try {
      return {node[0].as<double>(), node[1].as<double>()};
    } catch (const YAML::Exception&) {
      fail(node, "expected numeric [N, P]");
    }
  }

  std::vector<State> states(const YAML::Node& node) const {
    std::vector<State> out;
    if (!node) return out;
    if (!node.IsSequence()) fail(node, "expected a list of [N, P] pairs");
    for (const auto& item : node) out.push_back(state(item));
    return out;
  }

  // A coefficient is a (mean, amplitude, phase) triple or a plain constant.
  SeasonalCoefficient coefficient(const YAML::Node& parent, const std::string& key,
                                  double period) const {
    const YAML::Node node = parent[key];
    if (!node) fail(parent, "missing coefficient '" + key + "'");
    try {
      if (node.IsScalar()) return SeasonalCoefficient::constant(node.as<double>(), period);
      const double mean = scalar<double>(node, "mean");
      const double amplitude = scalar_or<double>(node, "amplitude", 0.0);
      const std::string phase = scalar_or<std::string>(node, "phase", "constant");
      Phase ph = Phase::Constant;
      if (phase == "favorable") {
        ph = Phase::Favorable;
      } else if (phase == "unfavorable") {
        ph = Phase::Unfavorable;
      } else if (phase != "constant") {
        fail(node, "unknown phase '" + phase + "'");
      }
      return {mean, amplitude, ph, period};
    } catch (const ModelError& e) {
      fail(node, key + ": " + e.what());
    }
  }

  ModelSystem model(const YAML::Node& node) const {
    if (!node || !node.IsMap()) fail(node, "missing 'model' section");
    ModelSystem m;
    m.period = scalar_or<double>(node, "period", 365.0);
    if (!(m.period > 0.0)) fail(node, "period must be positive");
    const double t = m.period;
    const std::string family = scalar<std::string>(node, "family");

    const YAML::Node g = node["growth"];
    if (!g) fail(node, "missing 'growth'");
    const std::string gk = scalar<std::string>(g, "kind");
    if (gk == "gilpin_strong") {
      m.growth = GrowthFunction::gilpin_strong(coefficient(g, "r", t), coefficient(g, "K_minus", t),
                                               coefficient(g, "K_plus", t));
    } else if (gk == "allee_logistic") {
      m.growth = GrowthFunction::allee_logistic(coefficient(g, "r", t),
                                                coefficient(g, "K_minus", t),
                                                coefficient(g, "K_plus", t));
    } else if (gk == "gilpin_weak_like") {
      m.growth = GrowthFunction::gilpin_weak_like(coefficient(g, "r", t), coefficient(g, "m", t),
                                                  coefficient(g, "K_plus", t));
    } else {
      fail(g, "unknown growth kind '" + gk + "'");
    }

    const YAML::Node f = node["response"];
    if (!f) fail(node, "missing 'response'");
    const std::string fk = scalar<std::string>(f, "kind");
    if (fk == "holling_ii") {
      m.response = FunctionalResponse::holling_ii(coefficient(f, "b", t), coefficient(f, "p", t));
    } else if (fk == "beddington_deangelis") {
      m.response = FunctionalResponse::beddington_deangelis(
          coefficient(f, "b", t), coefficient(f, "h", t), coefficient(f, "p", t));
    } else {
      fail(f, "unknown response kind '" + fk + "'");
    }

    if (family == "predator_prey") {
      m.family = Family::PredatorPrey;
      m.gamma = coefficient(node, "gamma", t);
      m.delta1 = coefficient(node, "delta1", t);
      m.delta2 = node["delta2"] ? coefficient(node, "delta2", t)
                                : SeasonalCoefficient::constant(0.0, t);
    } else if (family == "leslie_gower") {
      m.family = Family::LeslieGower;
      m.c = coefficient(node, "c", t);
      m.c2_or_a = coefficient(node, "c2", t);
    } else if (family == "leslie_gower_pm") {
      m.family = Family::LeslieGowerPM;
      m.c = coefficient(node, "n", t);
      m.c2_or_a = coefficient(node, "a", t);
    } else {
      fail(node, "unknown family '" + family + "'");
    }
    try {
      m.validate();
    } catch (const ModelError& e) {
      fail(node, e.what());
    }
    return m;
  }

 private:
  std::string source_;
};

}  // namespace

Scenario parse_scenario(std::string_view yaml, std::string_view source) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  if (!root.IsMap()) throw ConfigError(std::string(source) + ": expected a mapping at top level");
  const Parser p(source);
  Scenario s;
  s.name = p.scalar_or<std::string>(root, "name", "scenario");
  if (root["command"]) {
    const auto name = p.scalar<std::string>(root, "command");
    s.command = parse_command(name);
    if (!s.command) p.fail(root["command"], "unknown command '" + name + "'");
  }
  s.model = p.model(root["model"]);
  s.output = p.scalar_or<std::string>(root, "output", "");

  if (const YAML::Node n = root["simulate"]) {
    if (n["initial"]) s.simulate.initial = p.state(n["initial"]);
    s.simulate.periods = p.scalar_or<double>(n, "periods", s.simulate.periods);
    s.simulate.samples_per_period =
        p.scalar_or<int>(n, "samples_per_period", s.simulate.samples_per_period);
    if (const YAML::Node d = n["detect_period"]) {
      s.simulate.detect_n_max = p.scalar_or<int>(d, "n_max", 16);
      s.simulate.transient = p.scalar_or<int>(d, "transient", s.simulate.transient);
    }
    if (s.simulate.periods < 0.0) p.fail(n, "periods must be nonnegative");
    if (s.simulate.samples_per_period < 1) p.fail(n, "samples_per_period must be positive");
    if (s.simulate.initial.n < 0.0 || s.simulate.initial.p < 0.0) {
      p.fail(n, "initial state must be nonnegative");
    }
  }
  if (const YAML::Node n = root["orbits"]) {
    s.orbits.period_multiple = p.scalar_or<int>(n, "period_multiple", 1);
    if (const YAML::Node g = n["seed_grid"]) {
      if (!g.IsSequence() || g.size() != 2) p.fail(g, "seed_grid must be [nx, ny]");
      s.orbits.nx = g[0].as<int>();
      s.orbits.ny = g[1].as<int>();
    }
    if (const YAML::Node b = n["backward"]) {
      s.orbits.backward_periods = p.scalar_or<int>(b, "periods", s.orbits.backward_periods);
      s.orbits.backward_starts = p.states(b["starts"]);
    }
    if (const YAML::Node b = n["basins"]) {
      s.orbits.basin_periods = p.scalar_or<int>(b, "periods", s.orbits.basin_periods);
      s.orbits.basin_starts = p.states(b["starts"]);
    }
    if (s.orbits.period_multiple < 1 || s.orbits.nx < 1 || s.orbits.ny < 1) {
      p.fail(n, "period_multiple and seed_grid entries must be positive");
    }
  }
  if (const YAML::Node n = root["sweep"]) {
    s.sweep.parameter = p.scalar_or<std::string>(n, "parameter", s.sweep.parameter);
    s.sweep.lo = p.scalar<double>(n, "lo");
    s.sweep.hi = p.scalar<double>(n, "hi");
    s.sweep.samples = p.scalar_or<int>(n, "samples", s.sweep.samples);
    if (!(s.sweep.lo < s.sweep.hi)) p.fail(n, "sweep requires lo < hi");
    if (s.sweep.samples < 2) p.fail(n, "sweep needs at least 2 samples");
    try {
      (void)s.model.parameter(s.sweep.parameter);
    } catch (const ModelError& e) {
      p.fail(n, e.what());
    }
  }
  return s;
}

Scenario load_scenario(const std::string& path_or_name) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::is_regular_file(path_or_name, ec)) {
    std::ifstream in(path_or_name);
    if (!in) throw ConfigError("cannot read " + path_or_name);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario(text.str(), path_or_name);
  }
  if (auto text = builtin_text(path_or_name)) return parse_scenario(*text, path_or_name);
  throw ConfigError("no such scenario file or builtin: " + path_or_name);
}

std::pair<int, int> parse_seed_grid(std::string_view text) {
  const auto x = text.find('x');
  int a = 0;
  int b = 0;
  if (x != std::string_view::npos) {
    const auto r1 = std::from_chars(text.data(), text.data() + x, a);
    const auto r2 = std::from_chars(text.data() + x + 1, text.data() + text.size(), b);
    if (r1.ec == std::errc{} && r1.ptr == text.data() + x && r2.ec == std::errc{} &&
        r2.ptr == text.data() + text.size() && a > 0 && b > 0) {
      return {a, b};
    }
  }
  throw ConfigError("--seed-grid expects NxM with positive integers, got '" + std::string(text) +
                    "'");
}

std::pair<double, double> parse_tolerances(std::string_view text) {
  const auto comma = text.find(',');
  if (comma != std::string_view::npos) {
    try {
      std::size_t used1 = 0;
      std::size_t used2 = 0;
      const std::string a(text.substr(0, comma));
      const std::string b(text.substr(comma + 1));
      const double rel = std::stod(a, &used1);
      const double abs = std::stod(b, &used2);
      if (used1 == a.size() && used2 == b.size() && rel > 0.0 && abs > 0.0) return {rel, abs};
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("--tol expects REL,ABS with positive numbers, got '" + std::string(text) + "'");
}

}  // namespace allee::cli
