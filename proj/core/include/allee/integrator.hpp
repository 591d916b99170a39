#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "allee/dopri.hpp"
#include "allee/linalg.hpp"
#include "allee/seasonal.hpp"

namespace allee {

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  long long accepted_steps = 0;
  long long rejected_steps = 0;

  State back() const { return states.back(); }
};

/// Fundamental matrix U(t1; t0) of the variational equation, U(t0) = I.
///
/// Integrated in factored form U = Q(theta) R with R upper triangular and
/// log-scaled diagonal, so tiny multipliers keep their relative accuracy.
struct FundamentalMatrix {
  Mat2 entries = Mat2::identity();
  /// log det U, from the diagonal of R.
  double log_det = 0.0;
  /// U stayed exactly triangular (axis orbits); the multipliers are then
  /// exp(log_diag) in the original coordinate order.
  bool triangular = false;
  std::array<double, 2> log_diag{};

  Multipliers multipliers() const;
};

struct VariationalResult {
  State state;
  FundamentalMatrix fundamental;
  /// Integral of trace J along the path, integrated jointly with U.
  double trace_integral = 0.0;
  long long accepted_steps = 0;
  long long rejected_steps = 0;
};

/// Piecewise interpolant of a computed model trajectory.
class DensePath {
 public:
  DensePath() = default;
  explicit DensePath(std::vector<DenseSegment<2>> segments) : segments_(std::move(segments)) {}

  State operator()(double t) const;
  double t_begin() const;
  double t_end() const;
  std::span<const DenseSegment<2>> segments() const { return segments_; }

 private:
  std::vector<DenseSegment<2>> segments_;
};

/// Settings with max_step resolved against the model period.
IntegratorSettings resolve(const IntegratorSettings& settings, double period);

/// Integrates the model flow. With empty `samples` every accepted step is
/// recorded; otherwise states are interpolated at the requested times.
Trajectory integrate(const ModelSystem& m, double t0, State x0, double t1,
                     const IntegratorSettings& settings = {},
                     std::span<const double> samples = {});

/// Terminal state only.
State flow(const ModelSystem& m, double t0, State x0, double t1,
           const IntegratorSettings& settings = {});

/// Trajectory together with its dense interpolant.
DensePath integrate_dense(const ModelSystem& m, double t0, State x0, double t1,
                          const IntegratorSettings& settings = {});

/// Joint integration of the state and dU/dt = J(t, x(t)) U.
VariationalResult integrate_variational(const ModelSystem& m, double t0, State x0, double t1,
                                        const IntegratorSettings& settings = {});

/// CSV with header `t,N,P`, 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

/// Evenly spaced sample times t0, t0 + dt, ..., t1 (inclusive, either direction).
std::vector<double> sample_grid(double t0, double t1, std::size_t intervals);

}  // namespace allee
