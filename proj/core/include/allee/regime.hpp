#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "allee/hypotheses.hpp"
#include "allee/orbits.hpp"
#include "allee/seasonal.hpp"

namespace allee {

enum class RegimeCase { A, B, C };

std::string_view to_string(RegimeCase c) noexcept;

/// R0 = int gamma f(t, N*, 0) dt / int delta1 dt along the weak prey-only orbit.
double compute_R0(const ModelSystem& m, const OrbitSettings& settings = {});

/// Multipliers of the prey-only orbits (N-*, 0) and (N+*, 0) of a strong
/// predator-prey model, from the exponential-integral formulas.
struct BoundaryMultipliers {
  double lambda1_minus = 0.0;
  double lambda1_plus = 0.0;
  double lambda2_minus = 0.0;
  double lambda2_plus = 0.0;
  BoundaryOrbits orbits;
  /// Largest relative gap between the formulas and the diagonal of the
  /// boundary monodromy matrices.
  double crosscheck_error = 0.0;
};

/// Throws OrbitError::WrongFamily unless the model is a strong-Allee
/// predator-prey system.
BoundaryMultipliers compute_boundary_multipliers(const ModelSystem& m,
                                                 const OrbitSettings& settings = {});

/// Case from the predator multipliers: A iff l2+ < 1, B iff l2- < 1 < l2+,
/// C iff l2- > 1. Returns nullopt on a tie with 1 or l2- >= l2+.
std::optional<RegimeCase> case_from_multipliers(double lambda2_minus, double lambda2_plus);

struct AlphaBreakdown {
  /// Quadrature of the general integrand along the orbit.
  double alpha = 0.0;
  /// Gilpin/Holling specialization, when it applies.
  std::optional<double> corollary;
  /// log det U(nT) from the variational run.
  double log_det_monodromy = 0.0;
  /// |e^alpha - det U| / |det U|
  double liouville_error = 0.0;
};

AlphaBreakdown alpha_breakdown(const ModelSystem& m, const PeriodicOrbit& orbit,
                               const OrbitSettings& settings = {});

/// Integral over the orbit of the trace of J after the periodic terms have
/// been removed. alpha > 0 implies the orbit is unstable.
double compute_alpha(const ModelSystem& m, const PeriodicOrbit& orbit,
                     const OrbitSettings& settings = {});

struct LgBoundaryReport {
  PeriodicOrbit origin;
  /// Prey-only orbits: two in the strong case, one in the weak case.
  std::vector<PeriodicOrbit> prey_axis;
  /// exp(int c2 dt), or exp(int a dt) for the Pal-Saha form.
  double lambda2_prey_axis = 0.0;
  PeriodicOrbit predator_axis;
  double lambda1_predator_axis = 0.0;
  double lambda2_predator_axis = 0.0;
  /// False when df/dP(t, 0, P0*) is not zero; the predator-axis multipliers
  /// are then monodromy eigenvalues instead of the integral formulas.
  bool triangular = true;
  double max_abs_dfdp = 0.0;
  double crosscheck_error = 0.0;
};

/// Throws OrbitError::WrongFamily for predator-prey models. With `strict`
/// set, a response that depends on P at the predator axis throws
/// ResponseNotPreyDependentAtAxis instead of falling back.
LgBoundaryReport lg_boundary_analysis(const ModelSystem& m, const OrbitSettings& settings = {},
                                      bool strict = false);

struct InteriorOrbit {
  PeriodicOrbit orbit;
  double alpha = 0.0;
};

struct RegimeOptions {
  bool verify = true;
  bool search_interior = true;
  GridSearchOptions grid;
  OrbitSettings orbit;
};

struct RegimeReport {
  Family family = Family::PredatorPrey;
  AlleeKind allee_kind = AlleeKind::Strong;

  // Weak predator-prey case.
  std::optional<double> R0;
  std::optional<bool> predator_persists;

  // Strong predator-prey case.
  std::optional<BoundaryMultipliers> multipliers;
  std::optional<RegimeCase> case_label;
  bool conjecture = false;

  // Leslie-Gower families.
  std::optional<LgBoundaryReport> lg;

  std::string verdict;
  std::vector<PeriodicOrbit> boundary_orbits;
  std::vector<InteriorOrbit> interior_orbits;
  std::optional<IndexLedger> ledger;
  std::string ledger_note;

  int stable_interior = 0;
  int unstable_interior = 0;
  /// Bound on stable interior orbits: unstable + 1 for predator-prey,
  /// unstable for Leslie-Gower.
  int stable_bound = 0;
  bool bound_holds = true;
  std::string bound_note;

  InvariantBox box;
};

/// Throws HypothesisFailure when verification is requested and fails.
RegimeReport classify_regime(const ModelSystem& m, const RegimeOptions& options = {});

struct SweepSample {
  double value = 0.0;
  std::optional<double> lambda1_minus, lambda1_plus, lambda2_minus, lambda2_plus;
  std::optional<RegimeCase> case_label;
  std::optional<double> R0;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

struct Threshold {
  double value = 0.0;
  std::string crossing;  // "lambda2_plus=1", "lambda2_minus=1", "R0=1"
};

struct SweepResult {
  std::string parameter_path;
  AlleeKind allee_kind = AlleeKind::Strong;
  std::vector<SweepSample> samples;
  std::vector<Threshold> thresholds;
};

struct SweepOptions {
  unsigned jobs = 0;
  /// Bisection stops when the bracket is narrower than this.
  double tolerance = 1e-3;
  OrbitSettings orbit;
};

/// Evaluates n_samples evenly spaced parameter values in [lo, hi] and
/// bisects every crossing through 1. Per-sample errors are recorded.
SweepResult sweep_parameter(const ModelSystem& m, std::string_view parameter_path, double lo,
                            double hi, int n_samples, const SweepOptions& options = {});

}  // namespace allee
