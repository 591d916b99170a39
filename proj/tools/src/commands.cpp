#include "allee_cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include <allee/errors.hpp>
#include <allee/export.hpp>
#include <allee/hypotheses.hpp>
#include <allee/integrator.hpp>
#include <allee/orbits.hpp>

namespace allee::cli {

namespace fs = std::filesystem;

namespace {

struct Settings {
  IntegratorSettings integrator;
  OrbitSettings orbit;
};

Settings make_settings(const RunOptions& o) {
  Settings s;
  if (o.tol) {
    s.integrator.rel_tol = o.tol->first;
    s.integrator.abs_tol = o.tol->second;
    s.orbit.integrator.rel_tol = o.tol->first;
    s.orbit.integrator.abs_tol = o.tol->second;
  }
  return s;
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  std::ofstream f(dir / name);
  if (!f) throw ConfigError("cannot write " + (dir / name).string());
  return f;
}

GridSearchOptions grid_options(const Scenario& sc, const RunOptions& o) {
  GridSearchOptions g;
  g.period_multiple = sc.orbits.period_multiple;
  g.nx = o.seed_grid ? o.seed_grid->first : sc.orbits.nx;
  g.ny = o.seed_grid ? o.seed_grid->second : sc.orbits.ny;
  g.jobs = o.jobs;
  return g;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int run_simulate(const Scenario& sc, const RunOptions& o, std::ostream& out) {
  const Settings s = make_settings(o);
  const ModelSystem& m = sc.model;
  const double t1 = sc.simulate.periods * m.period;
  const auto intervals = static_cast<std::size_t>(
      std::llround(sc.simulate.periods * sc.simulate.samples_per_period));
  const auto times = sample_grid(0.0, t1, intervals);
  spdlog::info("simulating {} periods from ({}, {})", sc.simulate.periods, sc.simulate.initial.n,
               sc.simulate.initial.p);
  const Trajectory traj = integrate(m, 0.0, sc.simulate.initial, t1, s.integrator, times);
  {
    auto f = open_output(o.out_dir, "trajectory.csv");
    write_trajectory_csv(f, traj);
  }
  {
    auto f = open_output(o.out_dir, "trajectory.gp");
    f << plot_script("trajectory.csv", sc.name);
  }
  const State end = traj.back();
  out << "final state N=" << fmt17(end.n) << " P=" << fmt17(end.p) << " at t=" << fmt17(t1)
      << '\n';
  if (sc.simulate.detect_n_max) {
    const PeriodDetection d = detect_period(m, sc.simulate.initial, *sc.simulate.detect_n_max,
                                            sc.simulate.transient, s.integrator);
    auto f = open_output(o.out_dir, "period.txt");
    f << "classification " << to_string(d) << '\n'
      << "transient_periods " << sc.simulate.transient << '\n'
      << "section N=" << fmt17(d.after_transient.n) << " P=" << fmt17(d.after_transient.p)
      << '\n';
    out << "section dynamics: " << to_string(d) << '\n';
  }
  return kExitOk;
}

// Backward-time curves from the configured starts in steps of T/50,
// stopped when the flow leaves twice the absorbing box or blows up.
void write_backward(const Scenario& sc, const Settings& s, std::ostream& f) {
  const ModelSystem& m = sc.model;
  const InvariantBox box = invariant_box(m);
  std::vector<State> starts = sc.orbits.backward_starts;
  if (starts.empty()) {
    for (int i = 1; i <= 3; ++i) {
      for (int j = 1; j <= 3; ++j) starts.push_back({box.n_max * i / 4.0, box.p_max * j / 16.0});
    }
  }
  const int steps = sc.orbits.backward_periods * 50;
  const double dt = m.period / 50.0;
  f << "curve,t,N,P\n";
  char buf[128];
  for (std::size_t c = 0; c < starts.size(); ++c) {
    State x = starts[c];
    double t = steps * dt;
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", c, t, x.n, x.p);
    f << buf;
    for (int i = 0; i < steps; ++i) {
      try {
        x = flow(m, t, x, t - dt, s.integrator);
      } catch (const IntegrationError& e) {
        spdlog::debug("backward curve {} stopped at t={}: {}", c, t, e.what());
        break;
      }
      t -= dt;
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", c, t, x.n, x.p);
      f << buf;
      if (x.n > 2.0 * box.n_max || x.p > 2.0 * box.p_max) break;
    }
  }
}

int run_orbits(const Scenario& sc, const RunOptions& o, std::ostream& out) {
  const Settings s = make_settings(o);
  RegimeOptions ro;
  ro.verify = false;
  ro.grid = grid_options(sc, o);
  ro.orbit = s.orbit;
  spdlog::info("orbit search on a {}x{} seed grid", ro.grid.nx, ro.grid.ny);
  const RegimeReport r = classify_regime(sc.model, ro);

  std::vector<PeriodicOrbit> orbits = r.boundary_orbits;
  for (const auto& io : r.interior_orbits) orbits.push_back(io.orbit);
  {
    auto f = open_output(o.out_dir, "orbits.csv");
    write_orbits_csv(f, orbits);
  }
  {
    auto f = open_output(o.out_dir, "ledger.txt");
    if (r.ledger) write_index_ledger(f, *r.ledger);
    if (!r.ledger_note.empty()) f << "index ledger unavailable: " << r.ledger_note << '\n';
    f << "stable " << r.stable_interior << ", unstable " << r.unstable_interior << "; "
      << r.bound_note << (r.bound_holds ? " holds" : " violated") << '\n';
  }
  for (const auto& orb : orbits) {
    out << orb.label << " (" << fmt17(orb.initial_state.n) << ", " << fmt17(orb.initial_state.p)
        << ") " << to_string(orb.stability) << '\n';
  }
  if (o.backward) {
    auto f = open_output(o.out_dir, "backward.csv");
    write_backward(sc, s, f);
  }
  if (!sc.orbits.basin_starts.empty()) {
    std::vector<const PeriodicOrbit*> stable;
    for (const auto& orb : orbits) {
      if (orb.stability == Stability::Stable) stable.push_back(&orb);
    }
    auto f = open_output(o.out_dir, "basins.csv");
    f << "start,N0,P0,N_end,P_end,attractor\n";
    const double horizon = sc.orbits.basin_periods * sc.model.period;
    for (std::size_t i = 0; i < sc.orbits.basin_starts.size(); ++i) {
      const State x0 = sc.orbits.basin_starts[i];
      const State x = flow(sc.model, 0.0, x0, horizon, s.integrator);
      std::string label = "none";
      double best = 1e-3 * std::max(1.0, norm(x));
      for (const auto* orb : stable) {
        const double d = norm(x - orb->initial_state);
        if (d < best) {
          best = d;
          label = orb->label;
        }
      }
      f << i << ',' << fmt17(x0.n) << ',' << fmt17(x0.p) << ',' << fmt17(x.n) << ',' << fmt17(x.p)
        << ',' << label << '\n';
      out << "basin start (" << x0.n << ", " << x0.p << ") -> " << label << '\n';
    }
  }
  return kExitOk;
}

int run_regime(const Scenario& sc, const RunOptions& o, std::ostream& out) {
  const Settings s = make_settings(o);
  RegimeOptions ro;
  ro.verify = false;
  ro.grid = grid_options(sc, o);
  ro.orbit = s.orbit;
  const RegimeReport r = classify_regime(sc.model, ro);
  {
    auto f = open_output(o.out_dir, "regime.txt");
    write_regime_text(f, r);
  }
  {
    auto f = open_output(o.out_dir, "regime.json");
    f << regime_json(r) << '\n';
  }
  if (r.case_label) out << "case " << to_string(*r.case_label) << '\n';
  if (r.R0) out << "R0 " << fmt17(*r.R0) << '\n';
  out << r.verdict << '\n';
  return kExitOk;
}

int run_sweep(const Scenario& sc, const RunOptions& o, std::ostream& out) {
  if (sc.model.family != Family::PredatorPrey) {
    throw ConfigError("sweep requires a predator_prey model");
  }
  const Settings s = make_settings(o);
  SweepOptions so;
  so.jobs = o.jobs;
  so.orbit = s.orbit;
  const SweepResult r =
      sweep_parameter(sc.model, sc.sweep.parameter, sc.sweep.lo, sc.sweep.hi, sc.sweep.samples, so);
  {
    auto f = open_output(o.out_dir, "sweep.csv");
    write_sweep_csv(f, r);
  }
  {
    auto f = open_output(o.out_dir, "thresholds.txt");
    write_thresholds(f, r);
  }
  write_thresholds(out, r);
  for (const auto& sample : r.samples) {
    if (!sample.ok()) spdlog::warn("sample {} failed: {}", sample.value, sample.error);
  }
  return kExitOk;
}

int run_verify(const Scenario& sc, const RunOptions& o, std::ostream& out) {
  const HypothesisReport rep = verify_hypotheses(sc.model);
  {
    auto f = open_output(o.out_dir, "verify.txt");
    write_hypothesis_report(f, rep);
  }
  write_hypothesis_report(out, rep);
  return rep.passed() ? kExitOk : kExitHypothesis;
}

}  // namespace

std::string plot_script(const std::string& csv_name, const std::string& title) {
  std::ostringstream os;
  os << "# gnuplot -persist trajectory.gp\n"
     << "set datafile separator ','\n"
     << "set key top right\n"
     << "set multiplot layout 1,2 title '" << title << "'\n"
     << "set xlabel 't [days]'\n"
     << "plot '" << csv_name << "' using 1:2 skip 1 with lines title 'N', \\\n"
     << "     '" << csv_name << "' using 1:3 skip 1 with lines title 'P'\n"
     << "set xlabel 'N'\n"
     << "set ylabel 'P'\n"
     << "set zlabel 't'\n"
     << "splot '" << csv_name << "' using 2:3:1 skip 1 with lines title '(N, P, t)'\n"
     << "unset multiplot\n";
  return os.str();
}

std::string regime_json(const RegimeReport& r) {
  using nlohmann::json;
  auto orbit_json = [](const PeriodicOrbit& o) {
    json j;
    j["label"] = o.label;
    j["location"] = std::string(to_string(o.location));
    j["period_multiple"] = o.period_multiple;
    j["N0"] = o.initial_state.n;
    j["P0"] = o.initial_state.p;
    j["multipliers"] = json::array({json::array({o.multipliers[0].real(), o.multipliers[0].imag()}),
                                    json::array({o.multipliers[1].real(), o.multipliers[1].imag()})});
    j["stability"] = std::string(to_string(o.stability));
    j["residual"] = o.residual;
    return j;
  };
  json j;
  j["family"] = std::string(to_string(r.family));
  j["allee"] = r.allee_kind == AlleeKind::Strong ? "strong" : "weak";
  if (r.R0) j["R0"] = *r.R0;
  if (r.predator_persists) j["predator_persists"] = *r.predator_persists;
  if (r.multipliers) {
    j["lambda1_minus"] = r.multipliers->lambda1_minus;
    j["lambda1_plus"] = r.multipliers->lambda1_plus;
    j["lambda2_minus"] = r.multipliers->lambda2_minus;
    j["lambda2_plus"] = r.multipliers->lambda2_plus;
    j["crosscheck_error"] = r.multipliers->crosscheck_error;
  }
  if (r.case_label) j["case"] = std::string(to_string(*r.case_label));
  j["conjecture"] = r.conjecture;
  if (r.lg) {
    j["leslie_gower"] = {{"lambda2_prey_axis", r.lg->lambda2_prey_axis},
                         {"lambda1_predator_axis", r.lg->lambda1_predator_axis},
                         {"lambda2_predator_axis", r.lg->lambda2_predator_axis},
                         {"triangular", r.lg->triangular}};
  }
  j["verdict"] = r.verdict;
  j["boundary_orbits"] = json::array();
  for (const auto& o : r.boundary_orbits) j["boundary_orbits"].push_back(orbit_json(o));
  j["interior_orbits"] = json::array();
  for (const auto& io : r.interior_orbits) {
    json e = orbit_json(io.orbit);
    e["alpha"] = io.alpha;
    j["interior_orbits"].push_back(e);
  }
  if (r.ledger) {
    json entries = json::array();
    for (const auto& e : r.ledger->fixed_points) {
      entries.push_back({{"label", e.label}, {"index", e.index}, {"weight", e.weight}});
    }
    j["index_ledger"] = {{"entries", entries},
                         {"total", r.ledger->total},
                         {"consistent", r.ledger->consistent()},
                         {"assumption", r.ledger->assumption}};
  } else if (!r.ledger_note.empty()) {
    j["index_ledger"] = {{"note", r.ledger_note}};
  }
  j["stable_interior"] = r.stable_interior;
  j["unstable_interior"] = r.unstable_interior;
  j["stable_bound"] = r.stable_bound;
  j["bound_holds"] = r.bound_holds;
  j["bound_note"] = r.bound_note;
  j["invariant_box"] = {{"n_max", r.box.n_max},
                        {"p_max", r.box.p_max},
                        {"epsilon", r.box.epsilon},
                        {"r_bar", r.box.r_bar}};
  return j.dump(2);
}

int run_command(Command command, const Scenario& scenario, const RunOptions& options,
                std::ostream& out) {
  try {
    std::error_code ec;
    fs::create_directories(options.out_dir, ec);
    if (ec) throw ConfigError("cannot create " + options.out_dir.string() + ": " + ec.message());

    if (command != Command::Verify && !options.skip_verify) {
      const HypothesisReport rep = verify_hypotheses(scenario.model);
      if (!rep.passed()) {
        std::ostringstream os;
        write_hypothesis_report(os, rep);
        spdlog::error("hypothesis verification failed; use --skip-verify to override\n{}",
                      os.str());
        return kExitHypothesis;
      }
    }
    switch (command) {
      case Command::Simulate: return run_simulate(scenario, options, out);
      case Command::Orbits: return run_orbits(scenario, options, out);
      case Command::Regime: return run_regime(scenario, options, out);
      case Command::Sweep: return run_sweep(scenario, options, out);
      case Command::Verify: return run_verify(scenario, options, out);
    }
    return kExitConfig;
  } catch (const ConfigError& e) {
    spdlog::error("config: {}", e.what());
    return kExitConfig;
  } catch (const ModelError& e) {
    spdlog::error("model: {}", e.what());
    return kExitConfig;
  } catch (const HypothesisFailure& e) {
    spdlog::error("hypothesis: {}", e.what());
    return kExitHypothesis;
  } catch (const IntegrationError& e) {
    spdlog::error("integration failed ({}): {}", to_string(e.kind()), e.what());
    return kExitNumeric;
  } catch (const OrbitError& e) {
    spdlog::error("orbit solver failed ({}): {}", to_string(e.kind()), e.what());
    return kExitNumeric;
  } catch (const DomainError& e) {
    spdlog::error("domain error: {}", e.what());
    return kExitNumeric;
  } catch (const ResponseNotPreyDependentAtAxis& e) {
    spdlog::error("{}", e.what());
    return kExitNumeric;
  }
}

}  // namespace allee::cli
