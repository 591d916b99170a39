#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "allee/linalg.hpp"

namespace allee {

enum class Phase { Favorable, Unfavorable, Constant };

std::string_view to_string(Phase phase) noexcept;

/// Periodic coefficient c(t) = mean * (1 + amplitude * w(2*pi*t/T)), where w is
/// sin for the favorable phase and cos for the unfavorable one.
class SeasonalCoefficient {
 public:
  SeasonalCoefficient() = default;
  SeasonalCoefficient(double mean, double amplitude, Phase phase, double period);

  static SeasonalCoefficient constant(double value, double period) {
    return {value, 0.0, Phase::Constant, period};
  }

  double operator()(double t) const noexcept;
  /// dc/dt, used by the autonomous-reduction checks and by custom kinds.
  double derivative(double t) const noexcept;

  double mean() const noexcept { return mean_; }
  double amplitude() const noexcept { return amplitude_; }
  Phase phase() const noexcept { return phase_; }
  double period() const noexcept { return period_; }

  /// min and max over one period; closed form.
  double lower() const noexcept;
  double upper() const noexcept;

  bool is_constant() const noexcept { return phase_ == Phase::Constant || amplitude_ == 0.0; }
  bool identically_zero() const noexcept { return mean_ == 0.0; }

  SeasonalCoefficient with_mean(double mean) const { return {mean, amplitude_, phase_, period_}; }
  SeasonalCoefficient with_amplitude(double s) const { return {mean_, s, phase_, period_}; }

 private:
  double mean_ = 0.0;
  double amplitude_ = 0.0;
  Phase phase_ = Phase::Constant;
  double period_ = 1.0;
};

enum class AlleeKind { Weak, Strong };

/// Per-capita prey growth rate k(t, N).
struct GrowthFunction {
  enum class Kind {
    /// r (N - K-)(K+ - N)
    GilpinStrong,
    /// r (N - K-)(1 - N / K+), the prey term of the Pal-Saha Leslie-Gower form
    AlleeLogistic,
    /// r (N + m)(K+ - N) / (1 + N), weak Allee example
    GilpinWeakLike,
    Custom,
  };

  Kind kind = Kind::GilpinStrong;
  SeasonalCoefficient r;
  SeasonalCoefficient k_minus;  // strong kinds
  SeasonalCoefficient k_plus;
  SeasonalCoefficient m;        // GilpinWeakLike shift

  // Custom kind.
  std::function<double(double, double)> custom_value;
  std::function<double(double, double)> custom_dn;  // optional
  AlleeKind custom_allee = AlleeKind::Strong;

  static GrowthFunction gilpin_strong(SeasonalCoefficient r, SeasonalCoefficient k_minus,
                                      SeasonalCoefficient k_plus);
  static GrowthFunction allee_logistic(SeasonalCoefficient r, SeasonalCoefficient k_minus,
                                       SeasonalCoefficient k_plus);
  static GrowthFunction gilpin_weak_like(SeasonalCoefficient r, SeasonalCoefficient m,
                                         SeasonalCoefficient k_plus);
  static GrowthFunction custom(std::function<double(double, double)> value, AlleeKind allee,
                               std::function<double(double, double)> dn = {});

  double value(double t, double n) const;
  double dn(double t, double n) const;
  AlleeKind allee() const noexcept;
};

/// Functional response f(t, N, P).
struct FunctionalResponse {
  enum class Kind {
    /// b p N / (1 + p N)
    HollingII,
    /// b N / (1 + h N + p P)
    BeddingtonDeAngelis,
    Custom,
  };

  Kind kind = Kind::HollingII;
  SeasonalCoefficient b;
  SeasonalCoefficient p;
  SeasonalCoefficient h;  // Beddington-DeAngelis

  std::function<double(double, double, double)> custom_value;
  std::function<double(double, double, double)> custom_dn;  // optional
  std::function<double(double, double, double)> custom_dp;  // optional

  static FunctionalResponse holling_ii(SeasonalCoefficient b, SeasonalCoefficient p);
  static FunctionalResponse beddington_deangelis(SeasonalCoefficient b, SeasonalCoefficient h,
                                                 SeasonalCoefficient p);
  static FunctionalResponse custom(std::function<double(double, double, double)> value,
                                   std::function<double(double, double, double)> dn = {},
                                   std::function<double(double, double, double)> dp = {});

  double value(double t, double n, double p_pred) const;
  double dn(double t, double n, double p_pred) const;
  double dp(double t, double n, double p_pred) const;
};

enum class Family { PredatorPrey, LeslieGower, LeslieGowerPM };

std::string_view to_string(Family family) noexcept;

/// Fully parameterized right-hand side.
///
/// PredatorPrey:   N' = k N - f P,  P' = gamma f P - delta1 P - delta2 P^2
/// LeslieGower:    N' = k N - f P,  P' = c2 P (1 - P / (N + c))
/// LeslieGowerPM:  N' = k N - f P,  P' = P (a - P / (N + n)),  a in c2_or_a, n in c
struct ModelSystem {
  Family family = Family::PredatorPrey;
  GrowthFunction growth;
  FunctionalResponse response;
  SeasonalCoefficient gamma;
  SeasonalCoefficient delta1;
  SeasonalCoefficient delta2;
  SeasonalCoefficient c;
  SeasonalCoefficient c2_or_a;
  double period = 365.0;

  /// Throws ModelError when a structural assumption is violated.
  void validate() const;

  State rhs(double t, State x) const;
  Mat2 jacobian(double t, State x) const;

  AlleeKind allee() const noexcept { return growth.allee(); }
  bool has_custom_parts() const noexcept {
    return growth.kind == GrowthFunction::Kind::Custom ||
           response.kind == FunctionalResponse::Kind::Custom;
  }

  /// Predator equation with the prey absent, as a scalar field P' = g(t, P).
  double predator_axis_rate(double t, double p) const;
  /// Predator per-capita carrying term: N + c(t).
  double predator_capacity(double t, double n) const;

  /// Addresses one scalar field, e.g. "p.mean", "delta1.amplitude" or "s"
  /// (every amplitude). Throws ModelError on an unknown path.
  ModelSystem with_parameter(std::string_view path, double value) const;
  double parameter(std::string_view path) const;
};

double eval_coefficient(const SeasonalCoefficient& coef, double t);
double eval_growth(const GrowthFunction& g, double t, double n);
double eval_response(const FunctionalResponse& f, double t, double n, double p);
State eval_rhs(const ModelSystem& m, double t, State x);
Mat2 eval_jacobian(const ModelSystem& m, double t, State x);

/// Bounds of the prey roots over one period.
struct RootBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Extremes of K-(t) (strong kinds only) and K+(t) over one period. For custom
/// kinds these are located numerically on a t-grid of `grid` points.
std::optional<RootBounds> lower_root_bounds(const GrowthFunction& g, double period, int grid = 400);
RootBounds upper_root_bounds(const GrowthFunction& g, double period, int grid = 400);

/// K-(t) and K+(t) at one instant.
std::optional<double> lower_root(const GrowthFunction& g, double t);
double upper_root(const GrowthFunction& g, double t);

/// Location xi(t) of the interior maximum of k(t, .) on [0, K+(t)].
double growth_peak(const GrowthFunction& g, double t);

}  // namespace allee
