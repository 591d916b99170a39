// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <allee/dopri.hpp>
#include <allee/errors.hpp>
#include <allee/hypotheses.hpp>
#include <allee/integrator.hpp>
#include <allee/orbits.hpp>
#include <allee/presets.hpp>
#include <allee/quadrature.hpp>
#include <allee/regime.hpp>

#include "fixtures.hpp"
#include "weak_draws.hpp"

using namespace allee;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Criterion {
  int id;
  std::string title;
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (detail.tellp() > 0) detail << "; ";
    detail << (ok ? "" : "[failed] ") << what;
  }
};

void report(Criterion& c) {
  std::printf("%s criterion %d (%s): %s\n", c.pass ? "PASS" : "FAIL", c.id, c.title.c_str(),
              c.detail.str().c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double product_gap(const PeriodicOrbit& o, double alpha) {
  const double prod = std::abs(o.multipliers[0] * o.multipliers[1]);
  return std::abs(std::exp(alpha) - prod) / prod;
}

// Criterion 1: both predator thresholds from one p sweep.
bool thresholds() {
  Criterion c{1, "threshold reproduction"};
  const auto t0 = Clock::now();
  const SweepResult r = sweep_parameter(allee::testing::table1(), "p.mean", 0.5, 80.0, 80);
  std::optional<double> plus, minus;
  for (const auto& t : r.thresholds) {
    if (t.crossing == "lambda2_plus=1") plus = t.value;
    if (t.crossing == "lambda2_minus=1") minus = t.value;
  }
  const double elapsed = seconds_since(t0);
  c.require(plus && std::abs(*plus - 1.21) <= 0.05,
            "lambda2+ = 1 at p = " + (plus ? fmt("%.4f", *plus) : std::string("none")) +
                " (expected 1.21 +- 0.05)");
  c.require(minus && std::abs(*minus - 62.03) <= 0.5,
            "lambda2- = 1 at p = " + (minus ? fmt("%.4f", *minus) : std::string("none")) +
                " (expected 62.03 +- 0.5)");
  c.require(elapsed < 120.0, fmt("%.1f s", elapsed));
  report(c);
  return c.pass;
}

// Criterion 2: long-run behavior from (0.2, 0.1).
bool figure_regimes() {
  Criterion c{2, "figure regimes"};
  const State x0{0.2, 0.1};
  double slowest = 0.0;
  {
    const auto t0 = Clock::now();
    const ModelSystem m = allee::testing::table1(1.0);
    const double T = m.period;
    const State x = flow(m, 0.0, x0, 49 * T);
    const DensePath last = integrate_dense(m, 49 * T, x, 50 * T);
    const PeriodicOrbit upper = prey_only_orbits_strong(m).upper;
    const DensePath ref = orbit_path(m, upper);
    double dist = 0.0;
    for (int i = 0; i <= 730; ++i) {
      const double t = T * i / 730.0;
      dist = std::max(dist, std::abs(last(49 * T + t).n - ref(t).n));
    }
    const double p_end = last(50 * T).p;
    slowest = std::max(slowest, seconds_since(t0));
    c.require(dist < 1e-3 && p_end < 1e-6,
              "p=1.0: sup|N - N+*| over the final period " + fmt("%.2e", dist) + ", P(50T) " +
                  fmt("%.2e", p_end));
  }
  struct Case {
    double p;
    std::string expect;
  };
  for (const Case& k : {Case{1.3, "periodic(1)"}, Case{1.55, "periodic(3)"}, Case{1.522, "aperiodic"}}) {
    const auto t0 = Clock::now();
    const PeriodDetection d = detect_period(allee::testing::table1(k.p), x0, 16);
    slowest = std::max(slowest, seconds_since(t0));
    c.require(to_string(d) == k.expect,
              fmt("p=%.4g: ", k.p) + to_string(d) + " (expected " + k.expect + ")");
  }
  {
    const auto t0 = Clock::now();
    const ModelSystem m = allee::testing::table1(1.8);
    const State x = flow(m, 0.0, x0, 200 * m.period);
    slowest = std::max(slowest, seconds_since(t0));
    c.require(x.n < 1e-6 && x.p < 1e-6,
              "p=1.8: state at 200T (" + fmt("%.3g", x.n) + ", " + fmt("%.3g", x.p) +
                  ") (expected both < 1e-6)");
  }
  c.require(slowest <= 30.0, fmt("slowest run %.1f s", slowest));
  report(c);
  return c.pass;
}

// Criterion 3: repelling interior orbit at p = 4.5.
bool unstable_orbit(std::vector<double>& alpha_gaps) {
  Criterion c{3, "unstable orbit"};
  const auto t0 = Clock::now();
  const ModelSystem m = allee::testing::table1(4.5);
  const auto orbits = grid_search(m);
  bool found = false;
  std::string best;
  for (const auto& o : orbits) {
    if (o.location != OrbitLocation::Interior) continue;
    const AlphaBreakdown a = alpha_breakdown(m, o);
    alpha_gaps.push_back(product_gap(o, a.alpha));
    const bool repelling = std::abs(o.multipliers[0]) > 1.0 || std::abs(o.multipliers[1]) > 1.0;
    if (repelling && a.alpha > 0.0) {
      found = true;
      std::ostringstream os;
      os << "orbit (" << o.initial_state.n << ", " << o.initial_state.p << "), |mu| = "
         << std::abs(o.multipliers[0]) << ", " << std::abs(o.multipliers[1]) << ", alpha = "
         << a.alpha;
      best = os.str();
    }
  }
  const double elapsed = seconds_since(t0);
  c.require(found, found ? best : "no interior orbit with |mu| > 1 and alpha > 0");
  c.require(elapsed <= 120.0, fmt("%.1f s", elapsed));
  report(c);
  return c.pass;
}

// Criterion 4: Leslie-Gower bistability.
bool leslie_gower(std::vector<double>& alpha_gaps) {
  Criterion c{4, "Leslie-Gower bistability"};
  const auto t0 = Clock::now();
  const ModelSystem m = presets::leslie_gower();
  RegimeOptions opts;
  opts.verify = true;
  const RegimeReport r = classify_regime(m, opts);
  std::vector<PeriodicOrbit> attractors;
  const PeriodicOrbit* coexist = nullptr;
  const PeriodicOrbit* prey_free = nullptr;
  for (const auto& o : r.boundary_orbits) {
    if (o.location == OrbitLocation::PredatorAxis && o.stability == Stability::Stable) prey_free = &o;
  }
  for (const auto& io : r.interior_orbits) {
    alpha_gaps.push_back(product_gap(io.orbit, io.alpha));
    if (io.orbit.stability == Stability::Stable) coexist = &io.orbit;
  }
  c.require(prey_free != nullptr,
            prey_free ? "stable prey-extinct orbit (0, " + fmt("%.6g", prey_free->initial_state.p) + ")"
                      : "no stable prey-extinct orbit");
  c.require(coexist != nullptr,
            coexist ? "stable coexistence orbit (" + fmt("%.6g", coexist->initial_state.n) + ", " +
                          fmt("%.6g", coexist->initial_state.p) + ")"
                    : "no stable coexistence orbit");
  if (prey_free && coexist) {
    const std::vector<State> starts{{1.0, 1.0}, {2.0, 5.0}, {3.0, 1.0},  {4.0, 8.0}, {6.0, 2.0},
                                    {8.0, 10.0}, {10.0, 5.0}, {12.0, 1.0}, {1.0, 10.0}, {5.0, 0.5}};
    int to_coexist = 0, to_prey_free = 0, other = 0;
    for (const State& x0 : starts) {
      const State x = flow(m, 0.0, x0, 100 * m.period);
      if (norm(x - coexist->initial_state) < 1e-3) {
        ++to_coexist;
      } else if (norm(x - prey_free->initial_state) < 1e-3) {
        ++to_prey_free;
      } else {
        ++other;
      }
    }
    std::ostringstream os;
    os << starts.size() << " starts: " << to_coexist << " to coexistence, " << to_prey_free
       << " to prey extinction, " << other << " elsewhere";
    c.require(to_coexist > 0 && to_prey_free > 0 && other == 0, os.str());
  }
  const double elapsed = seconds_since(t0);
  c.require(elapsed <= 180.0, fmt("%.1f s", elapsed));
  report(c);
  return c.pass;
}

double order_fit() {
  const double T = 365.0, w = 2 * M_PI / T, a = 3.0, t1 = 0.3 * T;
  auto rhs = [&](double t, const Vec<1>& y, Vec<1>& dy) { dy[0] = a * w * std::cos(w * t) * y[0]; };
  const double exact = std::exp(a * std::sin(w * t1));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int div : {200, 400, 800}) {
    IntegratorSettings s;
    s.fixed_step = T / div;
    const auto sol = dopri5<1>(rhs, 0.0, Vec<1>{1.0}, t1, s, {.endpoint_only = true});
    const double x = std::log(*s.fixed_step), y = std::log(std::abs(sol.y_final[0] - exact));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
}

// Criterion 5: properties checked without reference data.
bool properties(std::vector<double> alpha_gaps) {
  Criterion c{5, "property suite"};
  std::mt19937_64 rng(2024);
  auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

  double liouville = 0.0;
  for (int i = 0; i < 50; ++i) {
    const ModelSystem m = allee::testing::table1(u(0.5, 6.0));
    const State x0{u(0.05, 1.1), u(0.001, 0.5)};
    const VariationalResult v = integrate_variational(m, 0.0, x0, m.period);
    const DensePath path = integrate_dense(m, 0.0, x0, m.period);
    const double tr = integrate_along(path, [&](double t, State x) { return m.jacobian(t, x).trace(); });
    liouville = std::max(liouville, std::abs(std::expm1(v.fundamental.log_det - tr)));
  }
  c.require(liouville < 1e-6, "Liouville " + fmt("%.1e", liouville));

  double closed = 0.0;
  for (double p : {0.5, 1.0, 1.3, 4.5, 30.0, 70.0}) {
    closed = std::max(closed, compute_boundary_multipliers(allee::testing::table1(p)).crosscheck_error);
  }
  for (double s : {0.0, 0.2}) {
    closed = std::max(closed, lg_boundary_analysis(presets::leslie_gower({.s = s})).crosscheck_error);
  }
  c.require(closed < 1e-6, "closed-form multipliers " + fmt("%.1e", closed));

  {
    const ModelSystem m = allee::testing::table1(1.3);
    const PeriodicOrbit o = find_orbit_newton(m, poincare_map(m, {0.2, 0.1}, 100), 1);
    alpha_gaps.push_back(product_gap(o, compute_alpha(m, o)));
  }
  double alpha = 0.0;
  for (double g : alpha_gaps) alpha = std::max(alpha, g);
  c.require(alpha < 1e-6, "alpha identity on " + std::to_string(alpha_gaps.size()) +
                              " interior orbits " + fmt("%.1e", alpha));

  {
    const ModelSystem m = allee::testing::table1_autonomous(1.3);
    GridSearchOptions g;
    g.nx = 8;
    g.ny = 8;
    double drift = 0.0, mult = 0.0;
    const auto orbits = grid_search(m, g);
    for (const auto& o : orbits) {
      const DensePath path = orbit_path(m, o);
      for (int i = 0; i <= 200; ++i) drift = std::max(drift, norm(path(m.period * i / 200.0) - o.initial_state));
      const Multipliers ev = eigenvalues(m.jacobian(0.0, o.initial_state));
      Multipliers expect{std::exp(m.period * ev[0]), std::exp(m.period * ev[1])};
      if (std::abs(expect[0]) < std::abs(expect[1])) std::swap(expect[0], expect[1]);
      for (int i = 0; i < 2; ++i) {
        mult = std::max(mult, std::abs(o.multipliers[i] - expect[i]) / std::max(1.0, std::abs(expect[i])));
      }
    }
    c.require(drift < 1e-8 && mult < 1e-8 && !orbits.empty(),
              "autonomous reduction on " + std::to_string(orbits.size()) + " orbits: drift " +
                  fmt("%.1e", drift) + ", multipliers " + fmt("%.1e", mult));
  }

  const double order = order_fit();
  c.require(std::abs(order - 5.0) <= 0.3, "order fit " + fmt("%.2f", order));

  {
    const ModelSystem m = allee::testing::table1(1.3);
    const InvariantBox box = invariant_box(m);
    int escaped = 0;
    for (int i = 0; i < 50; ++i) {
      State x0{u(0.0, box.n_max), u(0.0, box.p_max)};
      while (!in_absorbing_set(m, box, x0)) x0 = {u(0.0, box.n_max), u(0.0, box.p_max)};
      const Trajectory tr = integrate(m, 0.0, x0, 100 * m.period);
      for (const State& x : tr.states) {
        if (!in_absorbing_set(m, box, x, 1e-6)) {
          ++escaped;
          break;
        }
      }
    }
    c.require(escaped == 0, "K' containment: " + std::to_string(escaped) + " of 50 escaped");
  }

  {
    int wrong = 0, extinct = 0, persistent = 0;
    for (const auto& d : allee::testing::weak_draws(20)) {
      if (d.r0 < 0.95) {
        ++extinct;
        wrong += d.p_end < 1e-6 ? 0 : 1;
      } else {
        ++persistent;
        wrong += d.p_min_tail > 1e-6 ? 0 : 1;
      }
    }
    c.require(wrong == 0, "R0 dichotomy: " + std::to_string(extinct) + " below, " +
                              std::to_string(persistent) + " above, " + std::to_string(wrong) +
                              " mispredicted");
  }
  report(c);
  return c.pass;
}

}  // namespace

int main() {
  int failed = 0;
  std::vector<double> alpha_gaps;
  auto guarded = [&](int id, auto&& body) {
    try {
      failed += body() ? 0 : 1;
    } catch (const std::exception& e) {
      std::printf("FAIL criterion %d: exception: %s\n", id, e.what());
      ++failed;
    }
  };
  guarded(1, [] { return thresholds(); });
  guarded(2, [] { return figure_regimes(); });
  guarded(3, [&] { return unstable_orbit(alpha_gaps); });
  guarded(4, [&] { return leslie_gower(alpha_gaps); });
  guarded(5, [&] { return properties(alpha_gaps); });
  std::printf("%d of 5 criteria passed\n", 5 - failed);
  return failed == 0 ? 0 : 1;
}
