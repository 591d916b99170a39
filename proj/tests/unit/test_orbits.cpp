#include <cmath>
#include <random>
#include <sstream>

#include <doctest.h>

#include <allee/errors.hpp>
#include <allee/hypotheses.hpp>
#include <allee/orbits.hpp>
#include <allee/presets.hpp>

#include "fixtures.hpp"

using namespace allee;
using doctest::Approx;

namespace {

Multipliers by_modulus(Multipliers mu) {
  if (std::abs(mu[0]) < std::abs(mu[1])) std::swap(mu[0], mu[1]);
  return mu;
}

Multipliers autonomous_multipliers(const ModelSystem& m, State x) {
  const Multipliers ev = eigenvalues(m.jacobian(0.0, x));
  return by_modulus({std::exp(m.period * ev[0]), std::exp(m.period * ev[1])});
}

double multiplier_product_error(const PeriodicOrbit& o) {
  const std::complex<double> prod = o.multipliers[0] * o.multipliers[1];
  return std::abs(std::abs(prod) * std::exp(-o.monodromy.log_det) - 1.0);
}

// Coexistence point of the p = 1.3 system, reached from (0.2, 0.1).
State coexistence_seed(const ModelSystem& m) {
  return poincare_map(m, {0.2, 0.1}, 100);
}

}  // namespace

TEST_SUITE("orbits") {

TEST_CASE("poincare map trivial cases") {
  const ModelSystem m = allee::testing::table1(1.3);
  CHECK(poincare_map(m, {0.0, 0.0}, 3) == State{0.0, 0.0});
  const ModelSystem c = allee::testing::table1_autonomous();
  CHECK(norm(poincare_map(c, {1.0, 0.0}, 1) - State{1.0, 0.0}) < 1e-8);
}

TEST_CASE("stability classification") {
  CHECK(classify_stability({0.5, 0.2}, 1e-4) == Stability::Stable);
  CHECK(classify_stability({1.5, 0.2}, 1e-4) == Stability::Unstable);
  CHECK(classify_stability({1.00001, 0.2}, 1e-4) == Stability::Marginal);
  CHECK(classify_stability({std::complex<double>(0.4, 0.95), std::complex<double>(0.4, -0.95)},
                           1e-4) == Stability::Unstable);
}

TEST_CASE("Newton from the origin") {
  const ModelSystem m = allee::testing::table1(1.3);
  for (int n : {1, 2}) {
    const PeriodicOrbit o = find_orbit_newton(m, {0.0, 0.0}, n);
    CHECK(o.residual == 0.0);
    CHECK(o.location == OrbitLocation::Origin);
    CHECK(o.stability == Stability::Stable);
  }
}

TEST_CASE("stable coexistence orbit at p = 1.3") {
  const ModelSystem m = allee::testing::table1(1.3);
  const PeriodicOrbit o = find_orbit_newton(m, coexistence_seed(m), 1);
  CHECK(o.location == OrbitLocation::Interior);
  CHECK(o.stability == Stability::Stable);
  CHECK(std::abs(o.multipliers[0]) < 1.0);
  CHECK(std::abs(o.multipliers[1]) < 1.0);
  CHECK(o.residual <= 1e-9);
  CHECK(multiplier_product_error(o) < 1e-8);
  CHECK(o.initial_state.n == Approx(0.982777).epsilon(1e-5));
  CHECK(norm(poincare_map(m, o.initial_state, 1, OrbitSettings{}.integrator) - o.initial_state) <=
        1e-9);
  const Multipliers again = floquet(m, o);
  CHECK(std::abs(again[0] - o.multipliers[0]) < 1e-8 * std::abs(o.multipliers[0]) + 1e-14);
}

TEST_CASE("Newton errors") {
  const ModelSystem m = allee::testing::table1(1.3);
  OrbitSettings s;
  s.max_iterations = 1;
  try {
    find_orbit_newton(m, {0.5, 0.5}, 1, s);
    FAIL("expected an orbit error");
  } catch (const OrbitError& e) {
    CHECK((e.kind() == OrbitError::Kind::NoConvergence || e.kind() == OrbitError::Kind::LeftDomain));
  }
  CHECK_THROWS_AS(find_orbit_newton(m, {50.0, 50.0}, 1), OrbitError);
}

TEST_CASE("prey-only orbits of the autonomous system are the roots") {
  const ModelSystem m = allee::testing::table1_autonomous();
  const BoundaryOrbits b = prey_only_orbits_strong(m);
  CHECK(b.lower.initial_state.n == Approx(0.02).epsilon(1e-9));
  CHECK(b.upper.initial_state.n == Approx(1.0).epsilon(1e-9));
  CHECK(b.lower.initial_state.p == 0.0);
  CHECK(b.lower.stability == Stability::Unstable);
  CHECK(b.upper.label == "N+*");
}

TEST_CASE("prey-only orbits stay inside the root bounds") {
  const ModelSystem m = allee::testing::table1(1.3);
  const BoundaryOrbits b = prey_only_orbits_strong(m);
  for (const auto* o : {&b.lower, &b.upper}) {
    CHECK(o->residual < 1e-10);
    const DensePath path = orbit_path(m, *o);
    const double lo = o == &b.upper ? 0.9 : 0.018, hi = o == &b.upper ? 1.1 : 0.022;
    for (int i = 0; i <= 365; ++i) {
      const State x = path(m.period * i / 365.0);
      CHECK(x.n >= lo);
      CHECK(x.n <= hi);
      CHECK(x.p == 0.0);
    }
  }
  CHECK(std::abs(b.lower.multipliers[0]) > 1.0);
  CHECK(std::abs(b.upper.monodromy.entries.a21) < 1e-8);
}

TEST_CASE("prey-only orbits are unique inside their brackets") {
  const ModelSystem m = allee::testing::table1(1.3);
  const BoundaryOrbits b = prey_only_orbits_strong(m);
  std::mt19937_64 rng(5);
  struct Bracket {
    double lo, hi, root;
    bool inverse;
  };
  for (const Bracket& br : {Bracket{0.018, 0.022, b.lower.initial_state.n, true},
                            Bracket{0.9, 1.1, b.upper.initial_state.n, false}}) {
    std::uniform_real_distribution<double> left(br.lo, br.root), right(br.root, br.hi);
    OrbitSettings s;
    s.inverse_map = br.inverse;
    for (int i = 0; i < 20; ++i) {
      const double x = prey_only_fixed_point(m, left(rng), right(rng), 0.0, s);
      CHECK(std::abs(x - br.root) < 1e-8);
    }
  }
  CHECK_THROWS_AS(prey_only_fixed_point(m, 0.3, 0.5), OrbitError);
}

TEST_CASE("weak prey-only orbit") {
  SUBCASE("autonomous orbit is the carrying capacity") {
    const ModelSystem m = allee::testing::weak_model(0.0);
    const ScalarOrbit o = prey_only_orbit_weak(m, 0.0);
    CHECK(o.initial_value == Approx(1.0).epsilon(1e-9));
    CHECK(o.multiplier < 1.0);
  }
  SUBCASE("threshold and convergence as nu shrinks") {
    const ModelSystem m = allee::testing::weak_model(0.1);
    const double nu_star = nu_threshold(m);
    // mean of r m K+ with r, K+ on sine and m on cosine
    CHECK(nu_star == Approx(0.11 * 0.05 * 1.0 * (1 + 0.1 * 0.1 / 2)).epsilon(1e-10));
    CHECK_THROWS_AS(prey_only_orbit_weak(m, nu_star), OrbitError);
    const ScalarOrbit edge = prey_only_orbit_weak(m, nu_star - 1e-3);
    CHECK(edge.initial_value > 0.0);
    CHECK(edge.residual < 1e-10);

    const auto times = sample_grid(0.0, m.period, 200);
    const ScalarOrbit base = prey_only_orbit_weak(m, 0.0);
    const auto ref = sample_prey_only(m, base, times);
    double prev = 1e300;
    for (double nu : {0.01, 0.005, 0.001}) {
      if (nu >= nu_star) continue;
      const auto v = sample_prey_only(m, prey_only_orbit_weak(m, nu), times);
      double dist = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) dist = std::max(dist, std::abs(v[i] - ref[i]));
      CHECK(dist < prev);
      prev = dist;
    }
  }
}

TEST_CASE("Leslie-Gower predator-only orbit") {
  const ModelSystem m = presets::leslie_gower();
  const PeriodicOrbit o = predator_only_orbit_lg(m);
  CHECK(o.location == OrbitLocation::PredatorAxis);
  CHECK(o.label == "P0*");
  const DensePath path = orbit_path(m, o);
  const double lo = m.c2_or_a.lower() * m.c.lower(), hi = m.c2_or_a.upper() * m.c.upper();
  for (int i = 0; i <= 100; ++i) {
    const State x = path(m.period * i / 100.0);
    CHECK(x.n == 0.0);
    CHECK(x.p >= lo);
    CHECK(x.p <= hi);
  }
  CHECK(std::abs(o.monodromy.entries.a12) < 1e-8);
  CHECK_THROWS_AS(predator_only_orbit_lg(allee::testing::table1()), OrbitError);

  const ModelSystem lg = allee::testing::leslie_gower_constant(0.5, 0.01);
  const PeriodicOrbit c = predator_only_orbit_lg(lg);
  CHECK(c.initial_state.p == Approx(0.5).epsilon(1e-9));
}

TEST_CASE("boundary multiplier ordering") {
  for (double p : {0.5, 1.0, 1.3, 4.5}) {
    const BoundaryOrbits b = prey_only_orbits_strong(allee::testing::table1(p));
    CHECK(b.lower.monodromy.triangular);
    CHECK(std::exp(b.lower.monodromy.log_diag[0]) > 1.0);
    CHECK(std::exp(b.upper.monodromy.log_diag[0]) < 1.0);
    CHECK(b.lower.monodromy.log_diag[1] < b.upper.monodromy.log_diag[1]);
  }
}

TEST_CASE("autonomous equilibrium multipliers") {
  const ModelSystem m = allee::testing::table1_autonomous(1.3);
  // Interior equilibrium of the autonomous system.
  const double pp = 1.3, b = 0.88, g = 0.39, d = 0.19;
  const double n_eq = d / (pp * (g * b - d));
  const double p_eq = m.growth.value(0, n_eq) * n_eq / m.response.value(0, n_eq, 0.0);
  const PeriodicOrbit o = find_orbit_newton(m, {n_eq * 1.001, p_eq * 0.999}, 1);
  CHECK(o.initial_state.n == Approx(n_eq).epsilon(1e-9));
  CHECK(o.initial_state.p == Approx(p_eq).epsilon(1e-8));
  const Multipliers expect = autonomous_multipliers(m, o.initial_state);
  for (int i = 0; i < 2; ++i) {
    CHECK(std::abs(o.multipliers[i] - expect[i]) <= 1e-8 * std::max(1.0, std::abs(expect[i])));
  }
}

TEST_CASE("grid search on the autonomous system finds only equilibria") {
  const ModelSystem m = allee::testing::table1_autonomous(1.3);
  GridSearchOptions g;
  g.nx = 6;
  g.ny = 6;
  const auto orbits = grid_search(m, g);
  REQUIRE_FALSE(orbits.empty());
  for (const auto& o : orbits) {
    const DensePath path = orbit_path(m, o);
    double dev = 0.0;
    for (int i = 0; i <= 200; ++i) dev = std::max(dev, norm(path(m.period * i / 200.0) - o.initial_state));
    CHECK(dev < 1e-8);
    const Multipliers expect = autonomous_multipliers(m, o.initial_state);
    for (int i = 0; i < 2; ++i) {
      CHECK(std::abs(o.multipliers[i] - expect[i]) <= 1e-8 * std::max(1.0, std::abs(expect[i])));
    }
  }
}

TEST_CASE("period detection") {
  const ModelSystem m = allee::testing::table1(1.3);
  const PeriodDetection d = detect_period(m, {0.2, 0.1}, 16);
  CHECK(d.kind == PeriodDetection::Kind::Periodic);
  CHECK(d.period == 1);
  CHECK(to_string(d) == "periodic(1)");
  const PeriodDetection e = detect_period(allee::testing::table1(1.0), {0.2, 0.1}, 16);
  CHECK(e.kind == PeriodDetection::Kind::Extinct);
}

TEST_CASE("index ledger") {
  SUBCASE("case a") {
    const ModelSystem m = allee::testing::table1(1.0);
    const BoundaryOrbits b = prey_only_orbits_strong(m);
    const PeriodicOrbit origin = find_orbit_newton(m, {0.0, 0.0}, 1);
    const IndexLedger l = index_ledger(m, {origin, b.lower, b.upper});
    REQUIRE(l.fixed_points.size() == 3);
    CHECK(l.fixed_points[0].index == 1);
    CHECK(l.fixed_points[0].weight == 1);
    CHECK(l.fixed_points[1].index == -1);
    CHECK(l.fixed_points[1].weight == 2);
    CHECK(l.fixed_points[2].index == 1);
    CHECK(l.fixed_points[2].weight == 2);
    CHECK(l.total == 1);
    CHECK(l.consistent());
    CHECK_FALSE(l.assumption.empty());
  }
  SUBCASE("case b with one interior orbit") {
    const ModelSystem m = allee::testing::table1(1.3);
    const BoundaryOrbits b = prey_only_orbits_strong(m);
    const PeriodicOrbit origin = find_orbit_newton(m, {0.0, 0.0}, 1);
    const PeriodicOrbit inner = find_orbit_newton(m, coexistence_seed(m), 1);
    const IndexLedger l = index_ledger(m, {origin, b.lower, b.upper, inner});
    CHECK(l.fixed_points.back().index == 1);
    CHECK(l.fixed_points.back().weight == 4);
    CHECK(l.total == 1);
  }
  SUBCASE("origin alone") {
    for (double p : {1.0, 1.3, 70.0}) {
      const ModelSystem m = allee::testing::table1(p);
      const IndexLedger l = index_ledger(m, {find_orbit_newton(m, {0.0, 0.0}, 1)});
      CHECK(l.total == 1);
    }
  }
  SUBCASE("degenerate orbit") {
    PeriodicOrbit o;
    o.multipliers = {1.0 + 1e-9, 0.5};
    CHECK_THROWS_AS(index_ledger(allee::testing::table1(), {o}), OrbitError);
  }
}

TEST_CASE("merge and export") {
  std::vector<PeriodicOrbit> list;
  PeriodicOrbit a;
  a.initial_state = {0.5, 0.1};
  CHECK(merge_orbit(list, a));
  PeriodicOrbit b = a;
  b.initial_state.n += 1e-8;
  CHECK_FALSE(merge_orbit(list, b));
  b.initial_state.n += 1e-3;
  CHECK(merge_orbit(list, b));
  std::ostringstream os;
  write_orbits_csv(os, list);
  std::string header;
  std::istringstream is(os.str());
  std::getline(is, header);
  CHECK(header == "n,N0,P0,lambda1_re,lambda1_im,lambda2_re,lambda2_im,stability,residual");
}

TEST_CASE("invariant set containment") {
  const ModelSystem m = allee::testing::table1(1.3);
  const InvariantBox box = invariant_box(m);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> un(0.0, box.n_max), up(0.0, box.p_max);
  const double slack = 1e-6;
  for (int i = 0; i < 50; ++i) {
    State x0{un(rng), up(rng)};
    while (!in_absorbing_set(m, box, x0)) x0 = {un(rng), up(rng)};
    const Trajectory tr = integrate(m, 0.0, x0, 100 * m.period);
    for (const State& x : tr.states) {
      CHECK(in_absorbing_set(m, box, x, slack));
    }
  }
}

}  // TEST_SUITE
