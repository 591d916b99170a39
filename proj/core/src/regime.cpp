#include "allee/regime.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "allee/errors.hpp"
#include "allee/parallel.hpp"
#include "allee/quadrature.hpp"

namespace allee {

std::string_view to_string(RegimeCase c) noexcept {
  switch (c) {
    case RegimeCase::A: return "A";
    case RegimeCase::B: return "B";
    case RegimeCase::C: return "C";
  }
  return "?";
}

namespace {

constexpr double kQuadTol = 1e-10;

double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

bool is_strong_pp(const ModelSystem& m) {
  return m.family == Family::PredatorPrey && m.allee() == AlleeKind::Strong;
}

// Integral of g(t, x(t)) over one pass of the orbit.
template <class G>
double along(const ModelSystem& m, const PeriodicOrbit& orbit, const OrbitSettings& settings,
             G&& g) {
  const DensePath path = orbit_path(m, orbit, settings);
  return integrate_along(path, std::forward<G>(g), kQuadTol);
}

ScalarOrbit weak_prey_orbit(const ModelSystem& m, const OrbitSettings& settings) {
  return prey_only_orbit_weak(m, 0.0, settings);
}

// Diagonal of the monodromy matrix, from the log-scaled factor when exact.
std::array<double, 2> diagonal(const PeriodicOrbit& o) {
  const FundamentalMatrix& u = o.monodromy;
  if (u.triangular) return {std::exp(u.log_diag[0]), std::exp(u.log_diag[1])};
  return {u.entries.a11, u.entries.a22};
}

bool gilpin_holling(const ModelSystem& m) {
  return m.family == Family::PredatorPrey &&
         m.growth.kind == GrowthFunction::Kind::GilpinStrong &&
         m.response.kind == FunctionalResponse::Kind::HollingII;
}

}  // namespace

double compute_R0(const ModelSystem& m, const OrbitSettings& settings) {
  if (m.family != Family::PredatorPrey || m.allee() != AlleeKind::Weak) {
    throw OrbitError(OrbitError::Kind::WrongFamily,
                     "compute_R0: requires a weak-Allee predator-prey model");
  }
  const ScalarOrbit prey = weak_prey_orbit(m, settings);
  const PeriodicOrbit orbit = make_orbit(m, {prey.initial_value, 0.0}, 1, settings);
  const double gain = along(m, orbit, settings, [&](double t, State x) {
    return m.gamma(t) * m.response.value(t, x.n, 0.0);
  });
  const double loss = integrate_function([&](double t) { return m.delta1(t); }, 0.0, m.period,
                                         kQuadTol);
  return gain / loss;
}

BoundaryMultipliers compute_boundary_multipliers(const ModelSystem& m,
                                                 const OrbitSettings& settings) {
  if (!is_strong_pp(m)) {
    throw OrbitError(OrbitError::Kind::WrongFamily,
                     "compute_boundary_multipliers: requires a strong-Allee predator-prey model");
  }
  BoundaryMultipliers out{.orbits = prey_only_orbits_strong(m, settings)};
  auto lambda1 = [&](const PeriodicOrbit& o) {
    return std::exp(along(m, o, settings, [&](double t, State x) {
      return m.growth.dn(t, x.n) * x.n;
    }));
  };
  auto lambda2 = [&](const PeriodicOrbit& o) {
    return std::exp(along(m, o, settings, [&](double t, State x) {
      return m.gamma(t) * m.response.value(t, x.n, 0.0) - m.delta1(t);
    }));
  };
  out.lambda1_minus = lambda1(out.orbits.lower);
  out.lambda1_plus = lambda1(out.orbits.upper);
  out.lambda2_minus = lambda2(out.orbits.lower);
  out.lambda2_plus = lambda2(out.orbits.upper);
  // On the prey axis U is upper triangular: its diagonal holds the multipliers.
  const auto dm = diagonal(out.orbits.lower);
  const auto dp = diagonal(out.orbits.upper);
  out.crosscheck_error = std::max({relative_gap(out.lambda1_minus, dm[0]),
                                   relative_gap(out.lambda2_minus, dm[1]),
                                   relative_gap(out.lambda1_plus, dp[0]),
                                   relative_gap(out.lambda2_plus, dp[1])});
  return out;
}

std::optional<RegimeCase> case_from_multipliers(double lambda2_minus, double lambda2_plus) {
  if (!(lambda2_minus < lambda2_plus)) return std::nullopt;
  if (lambda2_plus < 1.0) return RegimeCase::A;
  if (lambda2_minus < 1.0 && lambda2_plus > 1.0) return RegimeCase::B;
  if (lambda2_minus > 1.0) return RegimeCase::C;
  return std::nullopt;
}

AlphaBreakdown alpha_breakdown(const ModelSystem& m, const PeriodicOrbit& orbit,
                               const OrbitSettings& settings) {
  if (orbit.location != OrbitLocation::Interior) {
    throw OrbitError(OrbitError::Kind::WrongFamily, "compute_alpha: orbit is not interior");
  }
  const DensePath path = orbit_path(m, orbit, settings);
  const GrowthFunction& g = m.growth;
  const FunctionalResponse& f = m.response;

  auto general = [&](double t, State x) {
    const double fv = f.value(t, x.n, x.p);
    double v = g.dn(t, x.n) * x.n - f.dn(t, x.n, x.p) * x.p + fv * x.p / x.n;
    switch (m.family) {
      case Family::PredatorPrey:
        v += m.gamma(t) * f.dp(t, x.n, x.p) * x.p - m.delta2(t) * x.p;
        break;
      case Family::LeslieGower:
        v -= m.c2_or_a(t) * x.p / m.predator_capacity(t, x.n);
        break;
      case Family::LeslieGowerPM:
        v -= x.p / m.predator_capacity(t, x.n);
        break;
    }
    return v;
  };

  AlphaBreakdown out;
  out.alpha = integrate_along(path, general, kQuadTol);
  if (gilpin_holling(m)) {
    out.corollary = integrate_along(path, [&](double t, State x) {
      const double r = g.r(t);
      const double b = f.b(t);
      const double p = f.p(t);
      const double q = 1.0 + p * x.n;
      return r * (g.k_plus(t) + g.k_minus(t) - 2.0 * x.n) * x.n +
             b * p * p * x.n * x.p / (q * q) - m.delta2(t) * x.p;
    }, kQuadTol);
  }
  out.log_det_monodromy = orbit.monodromy.log_det;
  const double det = std::exp(out.log_det_monodromy);
  out.liouville_error = std::abs(std::exp(out.alpha) - det) / det;
  return out;
}

double compute_alpha(const ModelSystem& m, const PeriodicOrbit& orbit,
                     const OrbitSettings& settings) {
  return alpha_breakdown(m, orbit, settings).alpha;
}

LgBoundaryReport lg_boundary_analysis(const ModelSystem& m, const OrbitSettings& settings,
                                      bool strict) {
  if (m.family == Family::PredatorPrey) {
    throw OrbitError(OrbitError::Kind::WrongFamily,
                     "lg_boundary_analysis: model is not of Leslie-Gower type");
  }
  LgBoundaryReport out;
  out.origin = make_orbit(m, {0.0, 0.0}, 1, settings);
  out.origin.label = "origin";

  if (m.allee() == AlleeKind::Strong) {
    auto b = prey_only_orbits_strong(m, settings);
    out.prey_axis = {b.lower, b.upper};
  } else {
    const ScalarOrbit prey = weak_prey_orbit(m, settings);
    PeriodicOrbit o = make_orbit(m, {prey.initial_value, 0.0}, 1, settings);
    o.label = "N*";
    out.prey_axis = {o};
  }
  out.lambda2_prey_axis = std::exp(
      integrate_function([&](double t) { return m.c2_or_a(t); }, 0.0, m.period, kQuadTol));

  out.predator_axis = predator_only_orbit_lg(m, settings);
  const DensePath path = orbit_path(m, out.predator_axis, settings);

  for (const auto& seg : path.segments()) {
    for (int i = 0; i <= 8; ++i) {
      const double t = seg.t0 + seg.h * i / 8.0;
      const double pp = std::max(seg(t)[1], 0.0);
      out.max_abs_dfdp = std::max(out.max_abs_dfdp, std::abs(m.response.dp(t, 0.0, pp)));
    }
  }
  out.triangular = out.max_abs_dfdp <= 1e-10;
  if (!out.triangular) {
    if (strict) {
      std::ostringstream os;
      os << "lg_boundary_analysis: |df/dP(t, 0, P0*)| reaches " << out.max_abs_dfdp;
      throw ResponseNotPreyDependentAtAxis(os.str());
    }
    out.lambda1_predator_axis = std::abs(out.predator_axis.multipliers[0]);
    out.lambda2_predator_axis = std::abs(out.predator_axis.multipliers[1]);
    return out;
  }
  out.lambda1_predator_axis = std::exp(integrate_along(path, [&](double t, State x) {
    return m.growth.value(t, 0.0) - m.response.dn(t, 0.0, x.p) * x.p;
  }, kQuadTol));
  out.lambda2_predator_axis = std::exp(integrate_along(path, [&](double t, State x) {
    if (m.family == Family::LeslieGower) return -m.c2_or_a(t) * x.p / m.c(t);
    return -x.p / m.c(t);
  }, kQuadTol));
  // Lower triangular at (0, P0*).
  const auto d = diagonal(out.predator_axis);
  out.crosscheck_error = std::max(relative_gap(out.lambda1_predator_axis, d[0]),
                                  relative_gap(out.lambda2_predator_axis, d[1]));
  return out;
}

namespace {

void attach_interior(const ModelSystem& m, const RegimeOptions& options, RegimeReport& report) {
  if (!options.search_interior) return;
  std::vector<PeriodicOrbit> all = report.boundary_orbits;
  const auto found = grid_search(m, options.grid, options.orbit);
  for (const auto& o : found) {
    if (o.location != OrbitLocation::Interior) continue;
    if (!merge_orbit(all, o, options.grid.dedup_tol)) continue;
    InteriorOrbit io{o, 0.0};
    io.orbit.label = "interior-" + std::to_string(report.interior_orbits.size() + 1);
    io.alpha = compute_alpha(m, io.orbit, options.orbit);
    report.interior_orbits.push_back(std::move(io));
  }
  for (const auto& io : report.interior_orbits) {
    if (io.orbit.stability == Stability::Stable) ++report.stable_interior;
    if (io.orbit.stability == Stability::Unstable) ++report.unstable_interior;
  }
  if (m.family == Family::PredatorPrey) {
    report.stable_bound = report.unstable_interior + 1;
    report.bound_note = "predator-prey bound: stable <= unstable + 1";
  } else {
    report.stable_bound = report.unstable_interior;
    report.bound_note = "Leslie-Gower bound: stable <= unstable";
  }
  report.bound_holds = report.stable_interior <= report.stable_bound;
}

void attach_ledger(const ModelSystem& m, RegimeReport& report) {
  std::vector<PeriodicOrbit> orbits = report.boundary_orbits;
  for (const auto& io : report.interior_orbits) orbits.push_back(io.orbit);
  try {
    report.ledger = index_ledger(m, orbits);
  } catch (const OrbitError& e) {
    report.ledger_note = e.what();
  }
}

}  // namespace

RegimeReport classify_regime(const ModelSystem& m, const RegimeOptions& options) {
  if (options.verify) {
    const HypothesisReport hyp = verify_hypotheses(m);
    if (!hyp.passed()) {
      std::string failed;
      for (const auto& c : hyp.checks) {
        if (c.status == CheckStatus::Fail) failed += (failed.empty() ? "" : ", ") + c.name;
      }
      throw HypothesisFailure("classify_regime: failed checks: " + failed);
    }
  }
  const OrbitSettings& os = options.orbit;
  RegimeReport report;
  report.family = m.family;
  report.allee_kind = m.allee();
  report.box = invariant_box(m);

  if (m.family != Family::PredatorPrey) {
    report.lg = lg_boundary_analysis(m, os, false);
    report.boundary_orbits.push_back(report.lg->origin);
    for (const auto& o : report.lg->prey_axis) report.boundary_orbits.push_back(o);
    report.boundary_orbits.push_back(report.lg->predator_axis);
    attach_interior(m, options, report);
    report.verdict = report.interior_orbits.empty()
                         ? "no coexistence orbit found"
                         : "coexistence orbit(s) found alongside the boundary orbits";
    attach_ledger(m, report);
    return report;
  }

  PeriodicOrbit origin = make_orbit(m, {0.0, 0.0}, 1, os);
  origin.label = "origin";
  report.boundary_orbits.push_back(origin);

  if (report.allee_kind == AlleeKind::Weak) {
    const ScalarOrbit prey = weak_prey_orbit(m, os);
    PeriodicOrbit o = make_orbit(m, {prey.initial_value, 0.0}, 1, os);
    o.label = "N*";
    report.boundary_orbits.push_back(o);
    report.R0 = compute_R0(m, os);
    if (*report.R0 > 1.0) {
      report.predator_persists = true;
      report.verdict = "R0 > 1: uniform persistence of prey and predator";
    } else if (*report.R0 < 1.0) {
      report.predator_persists = false;
      report.verdict = "R0 < 1: predator extinction";
    } else {
      report.verdict = "R0 = 1: threshold, no conclusion";
    }
    attach_interior(m, options, report);
    attach_ledger(m, report);
    return report;
  }

  report.multipliers = compute_boundary_multipliers(m, os);
  report.boundary_orbits.push_back(report.multipliers->orbits.lower);
  report.boundary_orbits.push_back(report.multipliers->orbits.upper);
  report.case_label =
      case_from_multipliers(report.multipliers->lambda2_minus, report.multipliers->lambda2_plus);
  if (!report.case_label) {
    report.verdict = "degenerate: a predator multiplier equals 1";
  } else {
    switch (*report.case_label) {
      case RegimeCase::A:
        report.verdict = "predator extinction; attractors: origin and (N+*, 0)";
        break;
      case RegimeCase::B:
        report.verdict = "at least one positive T-periodic orbit exists";
        break;
      case RegimeCase::C:
        report.conjecture = true;
        report.verdict = "no conclusion from theory; conjectured predator extinction";
        break;
    }
  }
  attach_interior(m, options, report);
  attach_ledger(m, report);
  return report;
}

namespace {

struct Evaluation {
  std::optional<BoundaryMultipliers> mult;
  std::optional<double> r0;
};

Evaluation evaluate(const ModelSystem& m, AlleeKind kind, const OrbitSettings& settings) {
  Evaluation e;
  if (kind == AlleeKind::Strong) {
    e.mult = compute_boundary_multipliers(m, settings);
  } else {
    e.r0 = compute_R0(m, settings);
  }
  return e;
}

}  // namespace

SweepResult sweep_parameter(const ModelSystem& m, std::string_view parameter_path, double lo,
                            double hi, int n_samples, const SweepOptions& options) {
  if (!(lo < hi)) throw std::invalid_argument("sweep_parameter: requires lo < hi");
  if (n_samples < 2) throw std::invalid_argument("sweep_parameter: need at least 2 samples");
  if (m.family != Family::PredatorPrey) {
    throw OrbitError(OrbitError::Kind::WrongFamily,
                     "sweep_parameter: requires a predator-prey model");
  }
  (void)m.parameter(parameter_path);  // validates the path

  SweepResult result;
  result.parameter_path = std::string(parameter_path);
  result.allee_kind = m.allee();
  result.samples.resize(static_cast<std::size_t>(n_samples));

  parallel_for(result.samples.size(), options.jobs, [&](std::size_t i) {
    SweepSample& s = result.samples[i];
    s.value = lo + (hi - lo) * static_cast<double>(i) / (n_samples - 1);
    try {
      const ModelSystem mi = m.with_parameter(parameter_path, s.value);
      const Evaluation e = evaluate(mi, result.allee_kind, options.orbit);
      if (e.mult) {
        s.lambda1_minus = e.mult->lambda1_minus;
        s.lambda1_plus = e.mult->lambda1_plus;
        s.lambda2_minus = e.mult->lambda2_minus;
        s.lambda2_plus = e.mult->lambda2_plus;
        s.case_label = case_from_multipliers(e.mult->lambda2_minus, e.mult->lambda2_plus);
      }
      s.R0 = e.r0;
    } catch (const std::exception& ex) {
      s.error = ex.what();
    }
  });

  struct Target {
    const char* name;
    std::optional<double> SweepSample::*field;
    double (*pick)(const Evaluation&);
  };
  const std::vector<Target> targets =
      result.allee_kind == AlleeKind::Strong
          ? std::vector<Target>{
                {"lambda2_plus=1", &SweepSample::lambda2_plus,
                 [](const Evaluation& e) { return std::log(e.mult->lambda2_plus); }},
                {"lambda2_minus=1", &SweepSample::lambda2_minus,
                 [](const Evaluation& e) { return std::log(e.mult->lambda2_minus); }}}
          : std::vector<Target>{{"R0=1", &SweepSample::R0,
                                 [](const Evaluation& e) { return *e.r0 - 1.0; }}};

  for (const auto& target : targets) {
    for (std::size_t i = 0; i + 1 < result.samples.size(); ++i) {
      const auto& a = result.samples[i];
      const auto& b = result.samples[i + 1];
      if (!a.ok() || !b.ok()) continue;
      const double fa = target.field == &SweepSample::R0 ? *(a.*target.field) - 1.0
                                                         : std::log(*(a.*target.field));
      const double fb = target.field == &SweepSample::R0 ? *(b.*target.field) - 1.0
                                                         : std::log(*(b.*target.field));
      if (fa == 0.0) {
        result.thresholds.push_back({a.value, target.name});
        continue;
      }
      if ((fa < 0.0) == (fb < 0.0) || fb == 0.0) continue;
      double x0 = a.value;
      double x1 = b.value;
      double f0 = fa;
      try {
        while (x1 - x0 > options.tolerance) {
          const double mid = 0.5 * (x0 + x1);
          const double fm =
              target.pick(evaluate(m.with_parameter(parameter_path, mid), result.allee_kind,
                                   options.orbit));
          if ((fm < 0.0) == (f0 < 0.0)) {
            x0 = mid;
            f0 = fm;
          } else {
            x1 = mid;
          }
        }
        result.thresholds.push_back({0.5 * (x0 + x1), target.name});
      } catch (const std::exception&) {
        // Bracket interior failed to evaluate; report the sample interval midpoint.
        result.thresholds.push_back({0.5 * (x0 + x1), target.name});
      }
    }
  }
  std::sort(result.thresholds.begin(), result.thresholds.end(),
            [](const Threshold& a, const Threshold& b) { return a.value < b.value; });
  return result;
}

}  // namespace allee
