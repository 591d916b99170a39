#include "allee/integrator.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>

namespace allee {

const char* to_string(IntegrationError::Kind kind) noexcept {
  switch (kind) {
    case IntegrationError::Kind::StepUnderflow: return "StepUnderflow";
    case IntegrationError::Kind::MaxStepsExceeded: return "MaxStepsExceeded";
    case IntegrationError::Kind::NegativeUndershoot: return "NegativeUndershoot";
    case IntegrationError::Kind::NonFinite: return "NonFinite";
  }
  return "?";
}

void IntegratorSettings::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw std::invalid_argument("integrator tolerances must be positive");
  }
  if (max_step && !(min_step < *max_step)) {
    throw std::invalid_argument("integrator min_step must be below max_step");
  }
  if (fixed_step && !(*fixed_step > 0.0)) {
    throw std::invalid_argument("fixed step must be positive");
  }
  if (max_steps <= 0) throw std::invalid_argument("max_steps must be positive");
}

IntegratorSettings resolve(const IntegratorSettings& settings, double period) {
  IntegratorSettings s = settings;
  if (!s.max_step) s.max_step = period / 50.0;
  return s;
}

namespace {

void require_nonnegative(State x0) {
  if (x0.n < 0.0 || x0.p < 0.0) {
    throw DomainError("initial state must lie in the closed nonnegative quadrant");
  }
}

auto model_rhs(const ModelSystem& m) {
  return [&m](double t, const Vec<2>& y, Vec<2>& dy) {
    const State d = m.rhs(t, {y[0], y[1]});
    dy[0] = d.n;
    dy[1] = d.p;
  };
}

}  // namespace

Trajectory integrate(const ModelSystem& m, double t0, State x0, double t1,
                     const IntegratorSettings& settings, std::span<const double> samples) {
  require_nonnegative(x0);
  SolveOptions opts;
  opts.sample_times = samples;
  opts.clamp_count = 2;
  const auto sol = dopri5<2>(model_rhs(m), t0, Vec<2>{x0.n, x0.p}, t1, resolve(settings, m.period),
                             opts);
  Trajectory traj;
  traj.times = sol.times;
  traj.states.reserve(sol.states.size());
  for (const auto& y : sol.states) traj.states.push_back({y[0], y[1]});
  traj.accepted_steps = sol.accepted;
  traj.rejected_steps = sol.rejected;
  return traj;
}

State flow(const ModelSystem& m, double t0, State x0, double t1,
           const IntegratorSettings& settings) {
  require_nonnegative(x0);
  SolveOptions opts;
  opts.endpoint_only = true;
  opts.clamp_count = 2;
  const auto sol = dopri5<2>(model_rhs(m), t0, Vec<2>{x0.n, x0.p}, t1, resolve(settings, m.period),
                             opts);
  return {sol.y_final[0], sol.y_final[1]};
}

DensePath integrate_dense(const ModelSystem& m, double t0, State x0, double t1,
                          const IntegratorSettings& settings) {
  require_nonnegative(x0);
  SolveOptions opts;
  opts.endpoint_only = true;
  opts.keep_dense = true;
  opts.clamp_count = 2;
  auto sol = dopri5<2>(model_rhs(m), t0, Vec<2>{x0.n, x0.p}, t1, resolve(settings, m.period),
                       opts);
  return DensePath(std::move(sol.dense));
}

VariationalResult integrate_variational(const ModelSystem& m, double t0, State x0, double t1,
                                        const IntegratorSettings& settings) {
  require_nonnegative(x0);
  // On the predator axis J is lower triangular; swapping the coordinates
  // makes it upper triangular so the rotation stays at zero.
  const bool swapped = x0.n == 0.0 && x0.p > 0.0;
  // y = (N, P, theta, l1, l2, v, int tr J) with
  // U = Q(theta) [[e^l1, v (e^l1 + e^l2)], [0, e^l2]].
  auto rhs = [&m, swapped](double t, const Vec<7>& y, Vec<7>& dy) {
    const State x{y[0], y[1]};
    const State d = m.rhs(t, x);
    Mat2 j = m.jacobian(t, x);
    dy[0] = d.n;
    dy[1] = d.p;
    dy[6] = j.trace();
    if (swapped) j = {j.a22, j.a21, j.a12, j.a11};
    const double c = std::cos(y[2]);
    const double s = std::sin(y[2]);
    const double jq11 = j.a11 * c + j.a12 * s;
    const double jq12 = -j.a11 * s + j.a12 * c;
    const double jq21 = j.a21 * c + j.a22 * s;
    const double jq22 = -j.a21 * s + j.a22 * c;
    const double a11 = c * jq11 + s * jq21;
    const double a12 = c * jq12 + s * jq22;
    const double a21 = -s * jq11 + c * jq21;
    const double a22 = -s * jq12 + c * jq22;
    dy[2] = a21;
    dy[3] = a11;
    dy[4] = a22;
    // Weight of the second diagonal entry, e^l2 / (e^l1 + e^l2).
    const double d12 = y[3] - y[4];
    const double w2 = d12 > 0.0 ? std::exp(-d12) / (1.0 + std::exp(-d12)) : 1.0 / (1.0 + std::exp(d12));
    dy[5] = w2 * ((a12 + a21) + y[5] * (a11 - a22));
  };
  SolveOptions opts;
  opts.endpoint_only = true;
  opts.clamp_count = 2;
  const Vec<7> y0{x0.n, x0.p, 0.0, 0.0, 0.0, 0.0, 0.0};
  const auto sol = dopri5<7>(rhs, t0, y0, t1, resolve(settings, m.period), opts);
  const auto& y = sol.y_final;
  const double c = std::cos(y[2]);
  const double s = std::sin(y[2]);
  const double r11 = std::exp(y[3]);
  const double r22 = std::exp(y[4]);
  const double r12 = y[5] * (r11 + r22);
  Mat2 u{c * r11, c * r12 - s * r22, s * r11, s * r12 + c * r22};
  if (swapped) u = {u.a22, u.a21, u.a12, u.a11};

  VariationalResult r;
  r.state = {y[0], y[1]};
  r.fundamental.entries = u;
  r.fundamental.log_det = y[3] + y[4];
  r.fundamental.triangular = y[2] == 0.0;
  r.fundamental.log_diag = swapped ? std::array<double, 2>{y[4], y[3]}
                                   : std::array<double, 2>{y[3], y[4]};
  r.trace_integral = y[6];
  r.accepted_steps = sol.accepted;
  r.rejected_steps = sol.rejected;
  return r;
}

Multipliers FundamentalMatrix::multipliers() const {
  if (triangular) {
    Multipliers mu{std::complex<double>(std::exp(log_diag[0]), 0.0),
                   std::complex<double>(std::exp(log_diag[1]), 0.0)};
    if (std::abs(mu[1]) > std::abs(mu[0])) std::swap(mu[0], mu[1]);
    return mu;
  }
  return eigenvalues(entries.trace(), std::exp(log_det));
}

State DensePath::operator()(double t) const {
  if (segments_.empty()) return {};
  const bool forward = segments_.front().h > 0.0;
  auto it = std::lower_bound(segments_.begin(), segments_.end(), t,
                             [forward](const DenseSegment<2>& s, double v) {
                               const double end = s.t0 + s.h;
                               return forward ? end < v : end > v;
                             });
  if (it == segments_.end()) it = std::prev(segments_.end());
  const auto y = (*it)(t);
  return {std::max(y[0], 0.0), std::max(y[1], 0.0)};
}

double DensePath::t_begin() const { return segments_.empty() ? 0.0 : segments_.front().t0; }

double DensePath::t_end() const {
  return segments_.empty() ? 0.0 : segments_.back().t0 + segments_.back().h;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,N,P\n";
  char buf[96];
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", traj.times[i], traj.states[i].n,
                  traj.states[i].p);
    os << buf;
  }
}

std::vector<double> sample_grid(double t0, double t1, std::size_t intervals) {
  std::vector<double> out;
  if (intervals == 0) {
    out.push_back(t0);
    return out;
  }
  out.reserve(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    out.push_back(i == intervals ? t1 : t0 + (t1 - t0) * static_cast<double>(i) / intervals);
  }
  return out;
}

}  // namespace allee
