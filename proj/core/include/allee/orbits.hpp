#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "allee/integrator.hpp"
#include "allee/linalg.hpp"
#include "allee/seasonal.hpp"

namespace allee {

enum class Stability { Stable, Unstable, Marginal };
enum class OrbitLocation { Origin, PreyAxis, PredatorAxis, Interior };

std::string_view to_string(Stability s) noexcept;
std::string_view to_string(OrbitLocation l) noexcept;

/// Periodic orbit represented by its point on the section t = 0.
struct PeriodicOrbit {
  State initial_state;
  int period_multiple = 1;
  FundamentalMatrix monodromy;
  Multipliers multipliers{};
  Stability stability = Stability::Marginal;
  /// |P_{nT}(x) - x|
  double residual = 0.0;
  OrbitLocation location = OrbitLocation::Interior;
  /// Integral of trace J over one full orbit (n periods).
  double trace_integral = 0.0;
  std::string label;
  /// Monodromy and path were integrated backward in time because the
  /// forward flow could not close the orbit (strongly repelling orbits).
  bool reversed = false;
};

struct OrbitSettings {
  /// Tighter than the plain-simulation defaults: multiplier products and the
  /// alpha identity are checked to 1e-6 relative on orbits where P spans
  /// many decades.
  IntegratorSettings integrator{.rel_tol = 1e-11, .abs_tol = 1e-16, .max_step = {}, .min_step = 1e-10,
                                 .max_steps = 10'000'000, .fixed_step = {}};
  double fixed_point_tol = 1e-9;
  int max_iterations = 50;
  int max_halvings = 30;
  double stability_margin = 1e-4;
  /// SingularJacobian when some multiplier is this close to 1.
  double singular_tol = 1e-8;
  /// Scalar prey/predator-axis orbits are polished below this residual.
  double axis_tol = 1e-10;
  /// Run Newton on P_{-nT} instead of P_{nT}. Same fixed points; the basin
  /// of a repelling orbit is much wider for the inverse map.
  bool inverse_map = false;
};

/// X(nT, x0), sectioned at t = 0.
State poincare_map(const ModelSystem& m, State x0, int n, const IntegratorSettings& settings = {});

/// Builds the orbit record at a (converged) section point: monodromy,
/// multipliers, stability and residual. Falls back to a backward run when
/// that closes the orbit better.
PeriodicOrbit make_orbit(const ModelSystem& m, State x0, int n, const OrbitSettings& settings = {});

Stability classify_stability(const Multipliers& mu, double margin);

/// Damped Newton on G(x) = P_{nT}(x) - x with Jacobian U(nT) - I.
/// Throws OrbitError {SingularJacobian, NoConvergence, LeftDomain}.
PeriodicOrbit find_orbit_newton(const ModelSystem& m, State guess, int n,
                                const OrbitSettings& settings = {});

struct BoundaryOrbits {
  PeriodicOrbit lower;  // (N-*, 0)
  PeriodicOrbit upper;  // (N+*, 0)
};

/// The two positive T-periodic prey-only solutions of the strong Allee case,
/// bracketed by [min K-, max K-] and [min K+, max K+].
/// Throws OrbitError::BracketFailure.
BoundaryOrbits prey_only_orbits_strong(const ModelSystem& m, const OrbitSettings& settings = {});

/// Fixed point of the prey-only map N' = (k(t,N) - nu) N on [lo, hi].
/// Bisection followed by a scalar Newton polish. Exposed for the multi-start
/// uniqueness checks.
double prey_only_fixed_point(const ModelSystem& m, double lo, double hi, double nu = 0.0,
                             const OrbitSettings& settings = {});

/// Scalar T-periodic solution of the prey-only equation with extra mortality.
struct ScalarOrbit {
  double initial_value = 0.0;
  double nu = 0.0;
  double multiplier = 0.0;
  double residual = 0.0;
};

/// nu* = (1/T) * integral of k(s, 0) over one period.
double nu_threshold(const ModelSystem& m);

/// Weak-Allee prey-only orbit N*,nu (long-run integration, then Newton).
/// Throws OrbitError::NuAboveThreshold when nu >= nu*.
ScalarOrbit prey_only_orbit_weak(const ModelSystem& m, double nu,
                                 const OrbitSettings& settings = {});

/// Values of a scalar prey-only orbit at the requested times.
std::vector<double> sample_prey_only(const ModelSystem& m, const ScalarOrbit& orbit,
                                     std::span<const double> times,
                                     const OrbitSettings& settings = {});

/// Leslie-Gower predator-only orbit (0, P0*).
/// Throws OrbitError::{WrongFamily, BracketFailure}.
PeriodicOrbit predator_only_orbit_lg(const ModelSystem& m, const OrbitSettings& settings = {});

/// Eigenvalues of the monodromy matrix recomputed along the orbit.
Multipliers floquet(const ModelSystem& m, const PeriodicOrbit& orbit,
                    const OrbitSettings& settings = {});

/// Dense path over [0, nT] starting from the orbit's section point.
DensePath orbit_path(const ModelSystem& m, const PeriodicOrbit& orbit,
                     const OrbitSettings& settings = {});

struct PeriodDetection {
  enum class Kind { Periodic, Extinct, Aperiodic };
  Kind kind = Kind::Aperiodic;
  int period = 0;                 // valid for Periodic
  State after_transient;
  std::vector<State> sections;    // x_k = P_T^k(x) after the transient

  static constexpr double kSectionTol = 1e-6;
  static constexpr double kExtinctionThreshold = 1e-8;
};

std::string to_string(const PeriodDetection& d);

/// Integrates transient_periods * T, then inspects the section sequence.
PeriodDetection detect_period(const ModelSystem& m, State x0, int n_max,
                              int transient_periods = 200,
                              const IntegratorSettings& settings = {});

struct IndexEntry {
  std::string label;
  OrbitLocation location = OrbitLocation::Interior;
  int index = 0;   // sign det(I - U)
  int weight = 1;  // copies in the reflected domain
};

struct IndexLedger {
  std::vector<IndexEntry> fixed_points;
  int total = 0;
  bool consistent() const { return total == 1; }
  /// Weights used by the reflection construction (origin 1, axis orbits 2,
  /// interior orbits 4); interior multiplicity is an assumption.
  std::string assumption;
};

/// Throws OrbitError::DegenerateOrbit when some multiplier is within 1e-6 of 1.
IndexLedger index_ledger(const ModelSystem& m, const std::vector<PeriodicOrbit>& orbits);

struct GridSearchOptions {
  int period_multiple = 1;
  int nx = 20;
  int ny = 20;
  /// Worker threads; 0 means hardware concurrency.
  unsigned jobs = 0;
  /// Predator seeds spaced geometrically from p_min to the top of the box.
  bool log_predator = true;
  double p_min = 1e-8;
  /// Orbits whose section points differ by less than this are merged.
  double dedup_tol = 1e-6;
  /// Also seed Newton on the inverse map from every grid point.
  bool inverse_map = true;
};

/// Grid-seeded Newton search over the absorbing box. Failed seeds are
/// dropped; results are deduplicated and sorted by (N, P).
std::vector<PeriodicOrbit> grid_search(const ModelSystem& m, const GridSearchOptions& grid = {},
                                       const OrbitSettings& settings = {});

/// Appends `orbit` unless an existing entry is within `tol`.
bool merge_orbit(std::vector<PeriodicOrbit>& orbits, const PeriodicOrbit& orbit, double tol = 1e-6);

/// CSV with header
/// `n,N0,P0,lambda1_re,lambda1_im,lambda2_re,lambda2_im,stability,residual`.
void write_orbits_csv(std::ostream& os, const std::vector<PeriodicOrbit>& orbits);

}  // namespace allee
