#pragma once

// Dormand-Prince 5(4) embedded pair with FSAL and the 4th-order continuous
// extension of Hairer, Norsett & Wanner. Generic over a fixed state size so
// the same stepper drives the 1-D prey-only flow, the 2-D model flow and the
// augmented variational system.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "allee/errors.hpp"

namespace allee {

struct IntegratorSettings {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  /// Unset means period / 50 for model flows, |t1 - t0| / 50 otherwise.
  std::optional<double> max_step;
  double min_step = 1e-10;
  long long max_steps = 10'000'000;
  /// When set, every step has this size (no error control). Used by the
  /// convergence-order checks.
  std::optional<double> fixed_step;

  void validate() const;
};

template <std::size_t D>
using Vec = std::array<double, D>;

/// One accepted step's interpolation data.
template <std::size_t D>
struct DenseSegment {
  double t0 = 0.0;
  double h = 0.0;
  std::array<Vec<D>, 5> coef{};

  Vec<D> operator()(double t) const {
    const double theta = (t - t0) / h;
    const double theta1 = 1.0 - theta;
    Vec<D> y;
    for (std::size_t i = 0; i < D; ++i) {
      y[i] = coef[0][i] +
             theta * (coef[1][i] + theta1 * (coef[2][i] + theta * (coef[3][i] + theta1 * coef[4][i])));
    }
    return y;
  }
};

template <std::size_t D>
struct SolveResult {
  Vec<D> y_final{};
  double t_final = 0.0;
  std::vector<double> times;
  std::vector<Vec<D>> states;
  long long accepted = 0;
  long long rejected = 0;
  /// Filled only when dense output was requested.
  std::vector<DenseSegment<D>> dense;
};

struct SolveOptions {
  /// Sample times for dense output; empty records every accepted step.
  std::span<const double> sample_times;
  /// Record nothing except the endpoint.
  bool endpoint_only = false;
  /// Keep the per-step interpolants.
  bool keep_dense = false;
  /// The first `clamp_count` components are populations: undershoot inside
  /// (-abs_tol, 0) is clamped to zero, anything lower rejects the step.
  std::size_t clamp_count = 0;
};

namespace detail {

struct DP5 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                          a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                          d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                          d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
};

template <std::size_t D>
double error_norm(const Vec<D>& err, const Vec<D>& y0, const Vec<D>& y1, double rtol, double atol) {
  double acc = 0.0;
  for (std::size_t i = 0; i < D; ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double q = err[i] / sc;
    acc += q * q;
  }
  return std::sqrt(acc / static_cast<double>(D));
}

template <std::size_t D, class Rhs>
double initial_step(Rhs& rhs, double t0, const Vec<D>& y0, const Vec<D>& f0, double dir,
                    double hmax, double rtol, double atol) {
  double dnf = 0.0, dny = 0.0;
  for (std::size_t i = 0; i < D; ++i) {
    const double sk = atol + rtol * std::abs(y0[i]);
    dnf += (f0[i] / sk) * (f0[i] / sk);
    dny += (y0[i] / sk) * (y0[i] / sk);
  }
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
  h = std::min(h, hmax);
  Vec<D> y1;
  for (std::size_t i = 0; i < D; ++i) y1[i] = y0[i] + dir * h * f0[i];
  Vec<D> f1;
  rhs(t0 + dir * h, y1, f1);
  double der2 = 0.0;
  for (std::size_t i = 0; i < D; ++i) {
    const double sk = atol + rtol * std::abs(y0[i]);
    const double q = (f1[i] - f0[i]) / sk;
    der2 += q * q;
  }
  der2 = std::sqrt(der2) / h;
  const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
  const double h1 = der12 <= 1e-15 ? std::max(1e-6, std::abs(h) * 1e-3) : std::pow(0.01 / der12, 0.2);
  return std::min({100.0 * std::abs(h), h1, hmax});
}

}  // namespace detail

/// Integrates y' = rhs(t, y) from t0 to t1 (t1 < t0 runs backward).
///
/// `rhs(double t, const Vec<D>& y, Vec<D>& dydt)`.
/// Throws IntegrationError on step underflow, step budget exhaustion,
/// non-finite states or persistent negative undershoot.
template <std::size_t D, class Rhs>
SolveResult<D> dopri5(Rhs&& rhs, double t0, const Vec<D>& y0, double t1,
                      const IntegratorSettings& settings, const SolveOptions& opts = {}) {
  using T = detail::DP5;
  settings.validate();
  SolveResult<D> out;
  out.y_final = y0;
  out.t_final = t0;

  const auto samples = opts.sample_times;
  std::size_t next_sample = 0;
  const bool record_steps = samples.empty() && !opts.endpoint_only;
  auto record = [&](double t, const Vec<D>& y) {
    out.times.push_back(t);
    out.states.push_back(y);
  };

  if (t1 == t0) {
    if (!opts.endpoint_only) {
      if (record_steps) {
        record(t0, y0);
      } else {
        for (double ts : samples) {
          if (ts == t0) record(t0, y0);
        }
      }
    }
    return out;
  }

  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  const double hmax = std::min(settings.max_step.value_or(span / 50.0), span);
  const double rtol = settings.rel_tol;
  const double atol = settings.abs_tol;

  // Skip samples lying before t0 in the direction of integration.
  while (next_sample < samples.size() && dir * (samples[next_sample] - t0) < 0.0) ++next_sample;
  if (record_steps) record(t0, y0);
  while (next_sample < samples.size() && samples[next_sample] == t0) {
    record(t0, y0);
    ++next_sample;
  }

  Vec<D> y = y0;
  Vec<D> k1, k2, k3, k4, k5, k6, k7, ytmp, ynew, err;
  double t = t0;
  rhs(t, y, k1);

  double h = settings.fixed_step ? std::min(*settings.fixed_step, span)
                                 : detail::initial_step<D>(rhs, t0, y0, k1, dir, hmax, rtol, atol);
  double err_prev = 1e-4;
  bool last_rejected = false;
  long long steps = 0;

  while (dir * (t1 - t) > 0.0) {
    if (++steps > settings.max_steps) {
      throw IntegrationError(IntegrationError::Kind::MaxStepsExceeded,
                             "integration exceeded " + std::to_string(settings.max_steps) +
                                 " steps at t=" + std::to_string(t));
    }
    const double remaining = std::abs(t1 - t);
    bool final_step = false;
    if (h >= remaining * (1.0 - 1e-12)) {
      h = remaining;
      final_step = true;
    }
    const double hs = dir * h;

    for (std::size_t i = 0; i < D; ++i) ytmp[i] = y[i] + hs * T::a21 * k1[i];
    rhs(t + T::c2 * hs, ytmp, k2);
    for (std::size_t i = 0; i < D; ++i) ytmp[i] = y[i] + hs * (T::a31 * k1[i] + T::a32 * k2[i]);
    rhs(t + T::c3 * hs, ytmp, k3);
    for (std::size_t i = 0; i < D; ++i)
      ytmp[i] = y[i] + hs * (T::a41 * k1[i] + T::a42 * k2[i] + T::a43 * k3[i]);
    rhs(t + T::c4 * hs, ytmp, k4);
    for (std::size_t i = 0; i < D; ++i)
      ytmp[i] = y[i] + hs * (T::a51 * k1[i] + T::a52 * k2[i] + T::a53 * k3[i] + T::a54 * k4[i]);
    rhs(t + T::c5 * hs, ytmp, k5);
    for (std::size_t i = 0; i < D; ++i)
      ytmp[i] = y[i] + hs * (T::a61 * k1[i] + T::a62 * k2[i] + T::a63 * k3[i] + T::a64 * k4[i] +
                             T::a65 * k5[i]);
    const double tnew = final_step ? t1 : t + hs;
    rhs(tnew, ytmp, k6);
    for (std::size_t i = 0; i < D; ++i)
      ynew[i] = y[i] + hs * (T::a71 * k1[i] + T::a73 * k3[i] + T::a74 * k4[i] + T::a75 * k5[i] +
                             T::a76 * k6[i]);
    rhs(tnew, ynew, k7);

    bool finite = true;
    for (std::size_t i = 0; i < D; ++i) finite = finite && std::isfinite(ynew[i]);

    // Population undershoot policy.
    bool undershoot = false;
    for (std::size_t i = 0; i < opts.clamp_count && finite; ++i) {
      if (ynew[i] <= -atol) undershoot = true;
    }

    double enorm = 0.0;
    if (!settings.fixed_step) {
      for (std::size_t i = 0; i < D; ++i)
        err[i] = hs * (T::e1 * k1[i] + T::e3 * k3[i] + T::e4 * k4[i] + T::e5 * k5[i] +
                       T::e6 * k6[i] + T::e7 * k7[i]);
      enorm = finite ? detail::error_norm<D>(err, y, ynew, rtol, atol)
                     : std::numeric_limits<double>::infinity();
    } else if (!finite) {
      throw IntegrationError(IntegrationError::Kind::NonFinite,
                             "non-finite state at t=" + std::to_string(t));
    }

    if (!settings.fixed_step && (enorm > 1.0 || undershoot)) {
      ++out.rejected;
      last_rejected = true;
      double fac = undershoot && enorm <= 1.0 ? 0.5 : std::max(0.2, 0.9 * std::pow(enorm, -0.2));
      if (!std::isfinite(fac)) fac = 0.2;
      h *= fac;
      if (h < settings.min_step) {
        if (undershoot) {
          throw IntegrationError(IntegrationError::Kind::NegativeUndershoot,
                                 "population component fell below -abs_tol at t=" +
                                     std::to_string(t));
        }
        if (!finite) {
          throw IntegrationError(IntegrationError::Kind::NonFinite,
                                 "non-finite state at t=" + std::to_string(t));
        }
        throw IntegrationError(IntegrationError::Kind::StepUnderflow,
                               "step size fell below min_step at t=" + std::to_string(t));
      }
      continue;
    }
    if (settings.fixed_step && undershoot) {
      throw IntegrationError(IntegrationError::Kind::NegativeUndershoot,
                             "population component fell below -abs_tol at t=" + std::to_string(t));
    }

    for (std::size_t i = 0; i < opts.clamp_count; ++i) {
      if (ynew[i] < 0.0) ynew[i] = 0.0;
    }

    // Dense output for this step.
    DenseSegment<D> seg;
    const bool need_dense = opts.keep_dense || next_sample < samples.size();
    if (need_dense) {
      seg.t0 = t;
      seg.h = hs;
      for (std::size_t i = 0; i < D; ++i) {
        const double dy = ynew[i] - y[i];
        const double bspl = hs * k1[i] - dy;
        seg.coef[0][i] = y[i];
        seg.coef[1][i] = dy;
        seg.coef[2][i] = bspl;
        seg.coef[3][i] = dy - hs * k7[i] - bspl;
        seg.coef[4][i] = hs * (T::d1 * k1[i] + T::d3 * k3[i] + T::d4 * k4[i] + T::d5 * k5[i] +
                               T::d6 * k6[i] + T::d7 * k7[i]);
      }
      while (next_sample < samples.size() && dir * (samples[next_sample] - tnew) <= 0.0) {
        const double ts = samples[next_sample];
        Vec<D> ys = ts == tnew ? ynew : seg(ts);
        for (std::size_t i = 0; i < opts.clamp_count; ++i) {
          if (ys[i] < 0.0) ys[i] = 0.0;
        }
        record(ts, ys);
        ++next_sample;
      }
      if (opts.keep_dense) out.dense.push_back(seg);
    }

    ++out.accepted;
    y = ynew;
    k1 = k7;  // FSAL
    t = tnew;
    if (record_steps) record(t, y);

    if (settings.fixed_step) continue;

    // PI step-size control (Gustafsson), as in DOPRI5.
    constexpr double beta = 0.04;
    constexpr double expo = 0.2 - beta * 0.75;
    const double e = std::max(enorm, 1e-10);
    double fac = 0.9 * std::pow(e, -expo) * std::pow(err_prev, beta);
    fac = std::clamp(fac, 0.2, 10.0);
    if (last_rejected) fac = std::min(fac, 1.0);
    err_prev = std::max(enorm, 1e-4);
    last_rejected = false;
    h = std::min(h * fac, hmax);
  }

  out.y_final = y;
  out.t_final = t;
  if (opts.endpoint_only) {
    out.times.clear();
    out.states.clear();
  }
  return out;
}

}  // namespace allee
