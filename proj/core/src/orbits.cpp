#include "allee/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>

#include "allee/errors.hpp"
#include "allee/hypotheses.hpp"
#include "allee/parallel.hpp"
#include "allee/quadrature.hpp"

namespace allee {

const char* to_string(OrbitError::Kind kind) noexcept {
  switch (kind) {
    case OrbitError::Kind::SingularJacobian: return "SingularJacobian";
    case OrbitError::Kind::NoConvergence: return "NoConvergence";
    case OrbitError::Kind::LeftDomain: return "LeftDomain";
    case OrbitError::Kind::BracketFailure: return "BracketFailure";
    case OrbitError::Kind::NuAboveThreshold: return "NuAboveThreshold";
    case OrbitError::Kind::DegenerateOrbit: return "DegenerateOrbit";
    case OrbitError::Kind::WrongFamily: return "WrongFamily";
  }
  return "?";
}

std::string_view to_string(Stability s) noexcept {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    case Stability::Marginal: return "marginal";
  }
  return "?";
}

std::string_view to_string(OrbitLocation l) noexcept {
  switch (l) {
    case OrbitLocation::Origin: return "origin";
    case OrbitLocation::PreyAxis: return "prey_axis";
    case OrbitLocation::PredatorAxis: return "predator_axis";
    case OrbitLocation::Interior: return "interior";
  }
  return "?";
}

State poincare_map(const ModelSystem& m, State x0, int n, const IntegratorSettings& settings) {
  if (n < 1) throw std::invalid_argument("poincare_map: n must be at least 1");
  return flow(m, 0.0, x0, n * m.period, settings);
}

Stability classify_stability(const Multipliers& mu, double margin) {
  const double a = std::abs(mu[0]);
  const double b = std::abs(mu[1]);
  if (a < 1.0 - margin && b < 1.0 - margin) return Stability::Stable;
  if (a > 1.0 + margin || b > 1.0 + margin) return Stability::Unstable;
  return Stability::Marginal;
}

namespace {

OrbitLocation locate(State x) {
  if (x.n == 0.0 && x.p == 0.0) return OrbitLocation::Origin;
  if (x.p == 0.0) return OrbitLocation::PreyAxis;
  if (x.n == 0.0) return OrbitLocation::PredatorAxis;
  return OrbitLocation::Interior;
}

std::string default_label(OrbitLocation loc) {
  switch (loc) {
    case OrbitLocation::Origin: return "origin";
    case OrbitLocation::PreyAxis: return "prey-only";
    case OrbitLocation::PredatorAxis: return "predator-only";
    case OrbitLocation::Interior: return "interior";
  }
  return "orbit";
}

PeriodicOrbit orbit_from(const VariationalResult& var, State x0, int n, double margin) {
  PeriodicOrbit o;
  o.initial_state = x0;
  o.period_multiple = n;
  o.monodromy = var.fundamental;
  o.multipliers = var.fundamental.multipliers();
  o.stability = classify_stability(o.multipliers, margin);
  o.residual = norm(var.state - x0);
  o.location = locate(x0);
  o.trace_integral = var.trace_integral;
  o.label = default_label(o.location);
  return o;
}

double min_distance_to_one(const Multipliers& mu) {
  return std::min(std::abs(mu[0] - 1.0), std::abs(mu[1] - 1.0));
}

// Scalar flow on one axis with its variational derivative.
struct ScalarMapValue {
  double value;
  double derivative;
};

template <class Rate, class RateDerivative>
ScalarMapValue scalar_map(Rate&& rate, RateDerivative&& drate, double x0, double t0, double t1,
                          const IntegratorSettings& settings) {
  auto rhs = [&](double t, const Vec<2>& y, Vec<2>& dy) {
    dy[0] = rate(t, y[0]);
    dy[1] = drate(t, y[0]) * y[1];
  };
  SolveOptions opts;
  opts.endpoint_only = true;
  opts.clamp_count = 1;
  const auto sol = dopri5<2>(rhs, t0, Vec<2>{x0, 1.0}, t1, settings, opts);
  return {sol.y_final[0], sol.y_final[1]};
}

// Safeguarded Newton-bisection for g(x) = map(x) - x on [lo, hi].
template <class Map>
double scalar_fixed_point(Map&& map, double lo, double hi, double tol, const char* what) {
  auto eval = [&](double x) {
    const ScalarMapValue v = map(x);
    return std::pair{v.value - x, v.derivative - 1.0};
  };
  if (hi < lo) std::swap(lo, hi);
  if (hi - lo <= 1e-14 * std::max(1.0, hi)) {
    // Degenerate bracket (autonomous case): polish from the midpoint.
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 30; ++i) {
      const auto [g, dg] = eval(x);
      if (std::abs(g) < 0.01 * tol || dg == 0.0) break;
      x -= g / dg;
    }
    return x;
  }
  auto [glo, dglo] = eval(lo);
  auto [ghi, dghi] = eval(hi);
  if (std::abs(glo) < 0.01 * tol) return lo;
  if (std::abs(ghi) < 0.01 * tol) return hi;
  if ((glo < 0.0) == (ghi < 0.0)) {
    std::ostringstream os;
    os << what << ": no sign change of P_T(x) - x on [" << lo << ", " << hi << "]";
    throw OrbitError(OrbitError::Kind::BracketFailure, os.str());
  }
  const bool rising = glo < 0.0;  // orientation of g across the bracket
  double x = 0.5 * (lo + hi);
  double best = x;
  double best_g = INFINITY;
  for (int it = 0; it < 200; ++it) {
    const auto [g, dg] = eval(x);
    if (std::abs(g) < best_g) {
      best_g = std::abs(g);
      best = x;
    }
    if (std::abs(g) < 0.01 * tol) return x;
    if ((g < 0.0) == rising) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= 4e-16 * std::max(1.0, hi)) break;
    double next = dg != 0.0 ? x - g / dg : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return best;
}

State project(State x) { return {std::max(x.n, 0.0), std::max(x.p, 0.0)}; }

}  // namespace

namespace {

// Orbit record from a run over [nT, 0]: U(nT) is the inverse of the
// backward fundamental matrix.
PeriodicOrbit orbit_from_backward(const VariationalResult& back, State x0, int n, double margin) {
  VariationalResult var = back;
  const Mat2& b = back.fundamental.entries;
  const double det = b.det();
  var.fundamental.entries = {b.a22 / det, -b.a12 / det, -b.a21 / det, b.a11 / det};
  var.fundamental.log_det = -back.fundamental.log_det;
  var.fundamental.log_diag = {-back.fundamental.log_diag[0], -back.fundamental.log_diag[1]};
  var.trace_integral = -back.trace_integral;
  PeriodicOrbit o = orbit_from(var, x0, n, margin);
  o.reversed = true;
  return o;
}

}  // namespace

PeriodicOrbit make_orbit(const ModelSystem& m, State x0, int n, const OrbitSettings& settings) {
  const double t1 = n * m.period;
  std::optional<PeriodicOrbit> forward;
  try {
    const auto var = integrate_variational(m, 0.0, x0, t1, settings.integrator);
    forward = orbit_from(var, x0, n, settings.stability_margin);
    if (forward->residual <= settings.fixed_point_tol) return *forward;
  } catch (const IntegrationError&) {
  }
  try {
    const auto back = integrate_variational(m, t1, x0, 0.0, settings.integrator);
    const double residual = norm(back.state - x0);
    if (!forward || residual < forward->residual) {
      return orbit_from_backward(back, x0, n, settings.stability_margin);
    }
  } catch (const IntegrationError&) {
    if (!forward) throw;
  }
  return *forward;
}

PeriodicOrbit find_orbit_newton(const ModelSystem& m, State guess, int n,
                                const OrbitSettings& settings) {
  if (n < 1) throw std::invalid_argument("find_orbit_newton: n must be at least 1");
  if (guess.n < 0.0 || guess.p < 0.0) {
    throw DomainError("find_orbit_newton: guess must lie in the closed nonnegative quadrant");
  }
  // The inverse map has the same fixed points and contracts near sources.
  const double ta = settings.inverse_map ? n * m.period : 0.0;
  const double tb = settings.inverse_map ? 0.0 : n * m.period;
  const InvariantBox box = invariant_box(m);
  auto outside = [&](State x) { return x.n > 2.0 * box.n_max || x.p > 2.0 * box.p_max; };
  if (outside(guess)) {
    throw OrbitError(OrbitError::Kind::LeftDomain, "find_orbit_newton: guess outside the box S");
  }

  State x = guess;
  std::optional<PeriodicOrbit> converged;
  int polish = 0;
  for (int it = 0; it < settings.max_iterations; ++it) {
    const auto var = integrate_variational(m, ta, x, tb, settings.integrator);
    const State g = var.state - x;
    const double r = norm(g);
    if (r < settings.fixed_point_tol) {
      PeriodicOrbit candidate = settings.inverse_map
                                    ? make_orbit(m, x, n, settings)
                                    : orbit_from(var, x, n, settings.stability_margin);
      if (!converged || candidate.residual < converged->residual) converged = candidate;
      // A couple of extra steps push the residual to the integrator's floor.
      if (r == 0.0 || ++polish > 2) break;
    } else if (converged) {
      break;
    }
    const Mat2& u = var.fundamental.entries;
    const Multipliers mu = var.fundamental.multipliers();
    if (min_distance_to_one(mu) < settings.singular_tol) {
      if (converged) break;
      throw OrbitError(OrbitError::Kind::SingularJacobian,
                       "find_orbit_newton: monodromy has a multiplier at 1");
    }
    const State step = solve(u - Mat2::identity(), -1.0 * g);
    double lambda = 1.0;
    bool accepted = false;
    for (int h = 0; h <= settings.max_halvings; ++h, lambda *= 0.5) {
      const State trial = project(x + lambda * step);
      if (outside(trial)) continue;
      State mapped;
      try {
        mapped = flow(m, ta, trial, tb, settings.integrator);
      } catch (const IntegrationError&) {
        continue;
      }
      if (norm(mapped - trial) < r) {
        x = trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (converged) break;
      if (outside(project(x + step))) {
        throw OrbitError(OrbitError::Kind::LeftDomain, "find_orbit_newton: iterate left the box S");
      }
      throw OrbitError(OrbitError::Kind::NoConvergence,
                       "find_orbit_newton: damping could not reduce the residual");
    }
  }
  if (!converged) {
    throw OrbitError(OrbitError::Kind::NoConvergence,
                     "find_orbit_newton: no convergence after " +
                         std::to_string(settings.max_iterations) + " iterations");
  }
  return *converged;
}

double prey_only_fixed_point(const ModelSystem& m, double lo, double hi, double nu,
                             const OrbitSettings& settings) {
  const GrowthFunction& g = m.growth;
  auto rate = [&](double t, double n) { return (g.value(t, n) - nu) * n; };
  auto drate = [&](double t, double n) { return g.dn(t, n) * n + g.value(t, n) - nu; };
  const IntegratorSettings is = resolve(settings.integrator, m.period);
  const double t0 = settings.inverse_map ? m.period : 0.0;
  const double t1 = settings.inverse_map ? 0.0 : m.period;
  return scalar_fixed_point(
      [&](double x0) { return scalar_map(rate, drate, x0, t0, t1, is); }, lo, hi,
      settings.axis_tol, "prey-only orbit");
}

BoundaryOrbits prey_only_orbits_strong(const ModelSystem& m, const OrbitSettings& settings) {
  if (m.allee() != AlleeKind::Strong) {
    throw OrbitError(OrbitError::Kind::WrongFamily,
                     "prey_only_orbits_strong: growth function is not a strong Allee kind");
  }
  auto kminus = lower_root_bounds(m.growth, m.period);
  if (!kminus) {
    throw OrbitError(OrbitError::Kind::BracketFailure, "prey_only_orbits_strong: K-(t) not found");
  }
  RootBounds kplus = upper_root_bounds(m.growth, m.period);
  if (m.growth.kind == GrowthFunction::Kind::Custom) {
    // Grid extremes underestimate the true range slightly.
    auto widen = [](RootBounds& b) {
      const double w = 1e-3 * std::max(b.upper - b.lower, 1e-3 * b.upper);
      b.lower -= w;
      b.upper += w;
    };
    widen(*kminus);
    widen(kplus);
  }
  // N-* repels along the axis; its fixed point is solved on the inverse map.
  OrbitSettings inverse = settings;
  inverse.inverse_map = true;
  const double n_lower = prey_only_fixed_point(m, kminus->lower, kminus->upper, 0.0, inverse);
  const double n_upper = prey_only_fixed_point(m, kplus.lower, kplus.upper, 0.0, settings);
  BoundaryOrbits out{make_orbit(m, {n_lower, 0.0}, 1, settings),
                     make_orbit(m, {n_upper, 0.0}, 1, settings)};
  out.lower.label = "N-*";
  out.upper.label = "N+*";
  return out;
}

double nu_threshold(const ModelSystem& m) {
  return integrate_function([&](double t) { return m.growth.value(t, 0.0); }, 0.0, m.period) /
         m.period;
}

ScalarOrbit prey_only_orbit_weak(const ModelSystem& m, double nu, const OrbitSettings& settings) {
  if (nu < 0.0) throw std::invalid_argument("prey_only_orbit_weak: nu must be nonnegative");
  const double nu_star = nu_threshold(m);
  if (nu >= nu_star) {
    std::ostringstream os;
    os << "prey_only_orbit_weak: nu=" << nu << " is not below nu*=" << nu_star;
    throw OrbitError(OrbitError::Kind::NuAboveThreshold, os.str());
  }
  const GrowthFunction& g = m.growth;
  auto rate = [&](double t, double n) { return (g.value(t, n) - nu) * n; };
  auto drate = [&](double t, double n) { return g.dn(t, n) * n + g.value(t, n) - nu; };
  const IntegratorSettings is = resolve(settings.integrator, m.period);

  // The orbit attracts every positive start; run in from above K+.
  double x = upper_root_bounds(g, m.period).upper;
  ScalarMapValue v{};
  for (int k = 0; k < 400; ++k) {
    v = scalar_map(rate, drate, x, 0.0, m.period, is);
    const double change = std::abs(v.value - x);
    x = v.value;
    if (change < 1e-6 * std::max(x, 1e-12)) break;
  }
  // Newton polish on g(x) = P_T(x) - x.
  for (int it = 0; it < 50; ++it) {
    v = scalar_map(rate, drate, x, 0.0, m.period, is);
    const double gx = v.value - x;
    if (std::abs(gx) < 0.01 * settings.axis_tol) break;
    const double dg = v.derivative - 1.0;
    if (dg == 0.0) break;
    double next = x - gx / dg;
    if (!(next > 0.0)) next = 0.5 * x;
    x = next;
  }
  v = scalar_map(rate, drate, x, 0.0, m.period, is);
  ScalarOrbit o;
  o.initial_value = x;
  o.nu = nu;
  o.multiplier = v.derivative;
  o.residual = std::abs(v.value - x);
  if (!(x > 0.0) || o.residual >= settings.axis_tol) {
    throw OrbitError(OrbitError::Kind::NoConvergence,
                     "prey_only_orbit_weak: positive periodic solution not resolved");
  }
  return o;
}

std::vector<double> sample_prey_only(const ModelSystem& m, const ScalarOrbit& orbit,
                                     std::span<const double> times, const OrbitSettings& settings) {
  const GrowthFunction& g = m.growth;
  const double nu = orbit.nu;
  auto rhs = [&](double t, const Vec<1>& y, Vec<1>& dy) { dy[0] = (g.value(t, y[0]) - nu) * y[0]; };
  SolveOptions opts;
  opts.sample_times = times;
  opts.clamp_count = 1;
  double t_end = m.period;
  for (double t : times) t_end = std::max(t_end, t);
  const auto sol = dopri5<1>(rhs, 0.0, Vec<1>{orbit.initial_value}, t_end,
                             resolve(settings.integrator, m.period), opts);
  std::vector<double> out;
  out.reserve(sol.states.size());
  for (const auto& y : sol.states) out.push_back(y[0]);
  return out;
}

PeriodicOrbit predator_only_orbit_lg(const ModelSystem& m, const OrbitSettings& settings) {
  if (m.family == Family::PredatorPrey) {
    throw OrbitError(OrbitError::Kind::WrongFamily,
                     "predator_only_orbit_lg: model is not of Leslie-Gower type");
  }
  double lo = 0.0;
  double hi = 0.0;
  if (m.family == Family::LeslieGower) {
    lo = m.c.lower();
    hi = m.c.upper();
  } else {
    constexpr int kGrid = 2000;
    lo = INFINITY;
    hi = -INFINITY;
    for (int i = 0; i < kGrid; ++i) {
      const double t = m.period * i / kGrid;
      const double an = m.c2_or_a(t) * m.c(t);
      lo = std::min(lo, an);
      hi = std::max(hi, an);
    }
    if (hi > lo) {
      // Grid extremes of a product of two harmonics; pad by the grid resolution.
      const double pad = 1e-4 * (hi - lo);
      lo -= pad;
      hi += pad;
    }
  }
  auto rate = [&](double t, double pp) { return m.predator_axis_rate(t, pp); };
  auto drate = [&](double t, double pp) { return m.jacobian(t, {0.0, pp}).a22; };
  const IntegratorSettings is = resolve(settings.integrator, m.period);
  const double p0 = scalar_fixed_point([&](double x0) { return scalar_map(rate, drate, x0, 0.0, m.period, is); },
                                       lo, hi, settings.axis_tol, "predator-only orbit");
  PeriodicOrbit o = make_orbit(m, {0.0, p0}, 1, settings);
  o.label = "P0*";
  return o;
}

Multipliers floquet(const ModelSystem& m, const PeriodicOrbit& orbit,
                    const OrbitSettings& settings) {
  const double t1 = orbit.period_multiple * m.period;
  if (orbit.reversed) {
    const auto back = integrate_variational(m, t1, orbit.initial_state, 0.0, settings.integrator);
    return orbit_from_backward(back, orbit.initial_state, orbit.period_multiple,
                               settings.stability_margin)
        .multipliers;
  }
  const auto var = integrate_variational(m, 0.0, orbit.initial_state, t1, settings.integrator);
  return var.fundamental.multipliers();
}

DensePath orbit_path(const ModelSystem& m, const PeriodicOrbit& orbit,
                     const OrbitSettings& settings) {
  const double t1 = orbit.period_multiple * m.period;
  if (orbit.reversed) return integrate_dense(m, t1, orbit.initial_state, 0.0, settings.integrator);
  return integrate_dense(m, 0.0, orbit.initial_state, t1, settings.integrator);
}

std::string to_string(const PeriodDetection& d) {
  switch (d.kind) {
    case PeriodDetection::Kind::Periodic: return "periodic(" + std::to_string(d.period) + ")";
    case PeriodDetection::Kind::Extinct: return "extinct";
    case PeriodDetection::Kind::Aperiodic: return "aperiodic";
  }
  return "?";
}

PeriodDetection detect_period(const ModelSystem& m, State x0, int n_max, int transient_periods,
                              const IntegratorSettings& settings) {
  if (n_max < 1) throw std::invalid_argument("detect_period: n_max must be at least 1");
  if (transient_periods < 0) {
    throw std::invalid_argument("detect_period: transient_periods must be nonnegative");
  }
  PeriodDetection out;
  State x = x0;
  for (int k = 0; k < transient_periods; ++k) x = poincare_map(m, x, 1, settings);
  out.after_transient = x;
  if (x.p < PeriodDetection::kExtinctionThreshold) {
    out.kind = PeriodDetection::Kind::Extinct;
    return out;
  }
  constexpr int kSustain = 3;
  out.sections.reserve(static_cast<std::size_t>(n_max + kSustain));
  out.sections.push_back(x);
  for (int k = 1; k < n_max + kSustain; ++k) {
    x = poincare_map(m, x, 1, settings);
    out.sections.push_back(x);
  }
  for (int n = 1; n <= n_max; ++n) {
    bool sustained = true;
    for (int k = 0; k < kSustain && sustained; ++k) {
      sustained = norm(out.sections[k + n] - out.sections[k]) < PeriodDetection::kSectionTol;
    }
    if (sustained) {
      out.kind = PeriodDetection::Kind::Periodic;
      out.period = n;
      return out;
    }
  }
  out.kind = PeriodDetection::Kind::Aperiodic;
  return out;
}

IndexLedger index_ledger(const ModelSystem& /*m*/, const std::vector<PeriodicOrbit>& orbits) {
  IndexLedger ledger;
  ledger.assumption =
      "reflection weights: origin x1, axis orbits x2, interior orbits x4 (one per quadrant)";
  for (const auto& o : orbits) {
    if (min_distance_to_one(o.multipliers) <= 1e-6) {
      throw OrbitError(OrbitError::Kind::DegenerateOrbit,
                       "index_ledger: orbit '" + o.label + "' has a multiplier equal to 1");
    }
    // det(I - U) = (1 - mu1)(1 - mu2)
    const double d = ((1.0 - o.multipliers[0]) * (1.0 - o.multipliers[1])).real();
    IndexEntry e;
    e.label = o.label;
    e.location = o.location;
    e.index = d > 0.0 ? 1 : -1;
    switch (o.location) {
      case OrbitLocation::Origin: e.weight = 1; break;
      case OrbitLocation::PreyAxis:
      case OrbitLocation::PredatorAxis: e.weight = 2; break;
      case OrbitLocation::Interior: e.weight = 4; break;
    }
    ledger.total += e.index * e.weight;
    ledger.fixed_points.push_back(std::move(e));
  }
  return ledger;
}

bool merge_orbit(std::vector<PeriodicOrbit>& orbits, const PeriodicOrbit& orbit, double tol) {
  for (const auto& o : orbits) {
    if (o.period_multiple == orbit.period_multiple &&
        norm(o.initial_state - orbit.initial_state) < tol) {
      return false;
    }
  }
  orbits.push_back(orbit);
  return true;
}

std::vector<PeriodicOrbit> grid_search(const ModelSystem& m, const GridSearchOptions& grid,
                                       const OrbitSettings& settings) {
  if (grid.nx < 1 || grid.ny < 1) throw std::invalid_argument("grid_search: empty seed grid");
  const InvariantBox box = invariant_box(m);
  std::vector<State> seeds;
  seeds.reserve(static_cast<std::size_t>(grid.nx * grid.ny));
  for (int i = 0; i < grid.nx; ++i) {
    const double n = box.n_max * (i + 0.5) / grid.nx;
    for (int j = 0; j < grid.ny; ++j) {
      double p = 0.0;
      if (grid.log_predator && grid.ny > 1) {
        const double lo = std::log(grid.p_min);
        const double hi = std::log(box.p_max);
        p = std::exp(lo + (hi - lo) * j / (grid.ny - 1));
      } else {
        p = box.p_max * (j + 0.5) / grid.ny;
      }
      seeds.push_back({n, p});
    }
  }
  const std::size_t passes = grid.inverse_map ? 2 : 1;
  std::vector<std::optional<PeriodicOrbit>> found(seeds.size() * passes);
  parallel_for(found.size(), grid.jobs, [&](std::size_t i) {
    OrbitSettings s = settings;
    s.inverse_map = i >= seeds.size();
    try {
      found[i] = find_orbit_newton(m, seeds[i % seeds.size()], grid.period_multiple, s);
    } catch (const OrbitError&) {
    } catch (const IntegrationError&) {
    } catch (const DomainError&) {
    }
  });
  std::vector<PeriodicOrbit> orbits;
  for (const auto& o : found) {
    if (o) merge_orbit(orbits, *o, grid.dedup_tol);
  }
  std::sort(orbits.begin(), orbits.end(), [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
    if (a.initial_state.n != b.initial_state.n) return a.initial_state.n < b.initial_state.n;
    return a.initial_state.p < b.initial_state.p;
  });
  return orbits;
}

void write_orbits_csv(std::ostream& os, const std::vector<PeriodicOrbit>& orbits) {
  os << "n,N0,P0,lambda1_re,lambda1_im,lambda2_re,lambda2_im,stability,residual\n";
  char buf[512];
  for (const auto& o : orbits) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s,%.17g\n",
                  o.period_multiple, o.initial_state.n, o.initial_state.p, o.multipliers[0].real(),
                  o.multipliers[0].imag(), o.multipliers[1].real(), o.multipliers[1].imag(),
                  std::string(to_string(o.stability)).c_str(), o.residual);
    os << buf;
  }
}

}  // namespace allee
