#include "allee/seasonal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "allee/errors.hpp"

namespace allee {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double fd_step(double x) { return 1e-6 * std::max(1.0, std::abs(x)); }

template <class F>
double central_difference(F&& f, double x) {
  const double h = fd_step(x);
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Bisection for a sign change of f on [lo, hi]; assumes f(lo) and f(hi) differ in sign.
template <class F>
double bisect(F&& f, double lo, double hi, double flo) {
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::string_view to_string(Phase phase) noexcept {
  switch (phase) {
    case Phase::Favorable: return "favorable";
    case Phase::Unfavorable: return "unfavorable";
    case Phase::Constant: return "constant";
  }
  return "?";
}

std::string_view to_string(Family family) noexcept {
  switch (family) {
    case Family::PredatorPrey: return "predator_prey";
    case Family::LeslieGower: return "leslie_gower";
    case Family::LeslieGowerPM: return "leslie_gower_pm";
  }
  return "?";
}

SeasonalCoefficient::SeasonalCoefficient(double mean, double amplitude, Phase phase, double period)
    : mean_(mean), amplitude_(amplitude), phase_(phase), period_(period) {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw ModelError("seasonal coefficient: period must be positive, got " + std::to_string(period));
  }
  if (!(amplitude >= 0.0 && amplitude <= 1.0)) {
    throw ModelError("seasonal coefficient: amplitude must lie in [0,1], got " +
                     std::to_string(amplitude));
  }
  if (!std::isfinite(mean)) throw ModelError("seasonal coefficient: mean is not finite");
}

double SeasonalCoefficient::operator()(double t) const noexcept {
  switch (phase_) {
    case Phase::Favorable: return mean_ * (1.0 + amplitude_ * std::sin(kTwoPi * t / period_));
    case Phase::Unfavorable: return mean_ * (1.0 + amplitude_ * std::cos(kTwoPi * t / period_));
    case Phase::Constant: return mean_;
  }
  return mean_;
}

double SeasonalCoefficient::derivative(double t) const noexcept {
  const double w = kTwoPi / period_;
  switch (phase_) {
    case Phase::Favorable: return mean_ * amplitude_ * w * std::cos(w * t);
    case Phase::Unfavorable: return -mean_ * amplitude_ * w * std::sin(w * t);
    case Phase::Constant: return 0.0;
  }
  return 0.0;
}

double SeasonalCoefficient::lower() const noexcept {
  if (phase_ == Phase::Constant) return mean_;
  return std::min(mean_ * (1.0 - amplitude_), mean_ * (1.0 + amplitude_));
}

double SeasonalCoefficient::upper() const noexcept {
  if (phase_ == Phase::Constant) return mean_;
  return std::max(mean_ * (1.0 - amplitude_), mean_ * (1.0 + amplitude_));
}

// ---------------------------------------------------------------------------
// Growth

GrowthFunction GrowthFunction::gilpin_strong(SeasonalCoefficient r, SeasonalCoefficient k_minus,
                                             SeasonalCoefficient k_plus) {
  GrowthFunction g;
  g.kind = Kind::GilpinStrong;
  g.r = r;
  g.k_minus = k_minus;
  g.k_plus = k_plus;
  return g;
}

GrowthFunction GrowthFunction::allee_logistic(SeasonalCoefficient r, SeasonalCoefficient k_minus,
                                              SeasonalCoefficient k_plus) {
  GrowthFunction g = gilpin_strong(r, k_minus, k_plus);
  g.kind = Kind::AlleeLogistic;
  return g;
}

GrowthFunction GrowthFunction::gilpin_weak_like(SeasonalCoefficient r, SeasonalCoefficient m,
                                                SeasonalCoefficient k_plus) {
  GrowthFunction g;
  g.kind = Kind::GilpinWeakLike;
  g.r = r;
  g.m = m;
  g.k_plus = k_plus;
  return g;
}

GrowthFunction GrowthFunction::custom(std::function<double(double, double)> value, AlleeKind allee,
                                      std::function<double(double, double)> dn) {
  if (!value) throw ModelError("custom growth function needs a value callable");
  GrowthFunction g;
  g.kind = Kind::Custom;
  g.custom_value = std::move(value);
  g.custom_dn = std::move(dn);
  g.custom_allee = allee;
  return g;
}

double GrowthFunction::value(double t, double n) const {
  switch (kind) {
    case Kind::GilpinStrong: return r(t) * (n - k_minus(t)) * (k_plus(t) - n);
    case Kind::AlleeLogistic: return r(t) * (n - k_minus(t)) * (1.0 - n / k_plus(t));
    case Kind::GilpinWeakLike: return r(t) * (n + m(t)) * (k_plus(t) - n) / (1.0 + n);
    case Kind::Custom: return custom_value(t, n);
  }
  return 0.0;
}

double GrowthFunction::dn(double t, double n) const {
  switch (kind) {
    case Kind::GilpinStrong: return r(t) * (k_plus(t) + k_minus(t) - 2.0 * n);
    case Kind::AlleeLogistic: {
      const double kp = k_plus(t);
      return r(t) * (kp + k_minus(t) - 2.0 * n) / kp;
    }
    case Kind::GilpinWeakLike: {
      const double kp = k_plus(t);
      const double mm = m(t);
      const double q = 1.0 + n;
      return r(t) * ((kp - mm - 2.0 * n) * q - (n + mm) * (kp - n)) / (q * q);
    }
    case Kind::Custom:
      if (custom_dn) return custom_dn(t, n);
      return central_difference([&](double x) { return custom_value(t, x); }, n);
  }
  return 0.0;
}

AlleeKind GrowthFunction::allee() const noexcept {
  switch (kind) {
    case Kind::GilpinStrong:
    case Kind::AlleeLogistic: return AlleeKind::Strong;
    case Kind::GilpinWeakLike: return AlleeKind::Weak;
    case Kind::Custom: return custom_allee;
  }
  return AlleeKind::Strong;
}

// ---------------------------------------------------------------------------
// Functional response

FunctionalResponse FunctionalResponse::holling_ii(SeasonalCoefficient b, SeasonalCoefficient p) {
  FunctionalResponse f;
  f.kind = Kind::HollingII;
  f.b = b;
  f.p = p;
  return f;
}

FunctionalResponse FunctionalResponse::beddington_deangelis(SeasonalCoefficient b,
                                                            SeasonalCoefficient h,
                                                            SeasonalCoefficient p) {
  FunctionalResponse f;
  f.kind = Kind::BeddingtonDeAngelis;
  f.b = b;
  f.h = h;
  f.p = p;
  return f;
}

FunctionalResponse FunctionalResponse::custom(std::function<double(double, double, double)> value,
                                              std::function<double(double, double, double)> dn,
                                              std::function<double(double, double, double)> dp) {
  if (!value) throw ModelError("custom functional response needs a value callable");
  FunctionalResponse f;
  f.kind = Kind::Custom;
  f.custom_value = std::move(value);
  f.custom_dn = std::move(dn);
  f.custom_dp = std::move(dp);
  return f;
}

double FunctionalResponse::value(double t, double n, double pp) const {
  switch (kind) {
    case Kind::HollingII: {
      const double pt = p(t);
      return b(t) * pt * n / (1.0 + pt * n);
    }
    case Kind::BeddingtonDeAngelis: return b(t) * n / (1.0 + h(t) * n + p(t) * pp);
    case Kind::Custom: return custom_value(t, n, pp);
  }
  return 0.0;
}

double FunctionalResponse::dn(double t, double n, double pp) const {
  switch (kind) {
    case Kind::HollingII: {
      const double pt = p(t);
      const double q = 1.0 + pt * n;
      return b(t) * pt / (q * q);
    }
    case Kind::BeddingtonDeAngelis: {
      const double pt = p(t);
      const double q = 1.0 + h(t) * n + pt * pp;
      return b(t) * (1.0 + pt * pp) / (q * q);
    }
    case Kind::Custom:
      if (custom_dn) return custom_dn(t, n, pp);
      return central_difference([&](double x) { return custom_value(t, x, pp); }, n);
  }
  return 0.0;
}

double FunctionalResponse::dp(double t, double n, double pp) const {
  switch (kind) {
    case Kind::HollingII: return 0.0;
    case Kind::BeddingtonDeAngelis: {
      const double pt = p(t);
      const double q = 1.0 + h(t) * n + pt * pp;
      return -b(t) * n * pt / (q * q);
    }
    case Kind::Custom:
      if (custom_dp) return custom_dp(t, n, pp);
      return central_difference([&](double x) { return custom_value(t, n, x); }, pp);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Model system

void ModelSystem::validate() const {
  if (!(period > 0.0)) throw ModelError("model period must be positive");
  auto same_period = [&](const SeasonalCoefficient& coef, const char* name) {
    if (std::abs(coef.period() - period) > 1e-12 * period) {
      throw ModelError(std::string("coefficient ") + name + " has period " +
                       std::to_string(coef.period()) + ", model period is " +
                       std::to_string(period));
    }
  };
  switch (growth.kind) {
    case GrowthFunction::Kind::GilpinStrong:
    case GrowthFunction::Kind::AlleeLogistic:
      same_period(growth.r, "r");
      same_period(growth.k_minus, "K_minus");
      same_period(growth.k_plus, "K_plus");
      break;
    case GrowthFunction::Kind::GilpinWeakLike:
      same_period(growth.r, "r");
      same_period(growth.m, "m");
      same_period(growth.k_plus, "K_plus");
      break;
    case GrowthFunction::Kind::Custom: break;
  }
  switch (response.kind) {
    case FunctionalResponse::Kind::HollingII:
      same_period(response.b, "b");
      same_period(response.p, "p");
      break;
    case FunctionalResponse::Kind::BeddingtonDeAngelis:
      same_period(response.b, "b");
      same_period(response.h, "h");
      same_period(response.p, "p");
      break;
    case FunctionalResponse::Kind::Custom: break;
  }
  if (family == Family::PredatorPrey) {
    same_period(gamma, "gamma");
    same_period(delta1, "delta1");
    same_period(delta2, "delta2");
    if (!(delta1.lower() > 0.0)) throw ModelError("delta1(t) must be positive for every t");
    if (delta2.lower() < 0.0) throw ModelError("delta2(t) must be nonnegative");
    if (gamma.lower() < 0.0) throw ModelError("gamma(t) must be nonnegative");
    if (!delta2.identically_zero() && !(gamma.lower() > 0.0)) {
      throw ModelError("min gamma(t) must be positive when delta2 is not identically zero");
    }
  } else {
    same_period(c, family == Family::LeslieGowerPM ? "n" : "c");
    same_period(c2_or_a, family == Family::LeslieGowerPM ? "a" : "c2");
    if (!(c.lower() > 0.0)) throw ModelError("Leslie-Gower refuge term must be positive");
    if (!(c2_or_a.lower() > 0.0)) throw ModelError("Leslie-Gower predator rate must be positive");
  }
}

double ModelSystem::predator_capacity(double t, double n) const {
  const double cap = n + c(t);
  if (!(cap > 0.0)) {
    throw DomainError("Leslie-Gower predator capacity N + c(t) is not positive at t=" +
                      std::to_string(t));
  }
  return cap;
}

double ModelSystem::predator_axis_rate(double t, double pp) const {
  return rhs(t, {0.0, pp}).p;
}

State ModelSystem::rhs(double t, State x) const {
  const double f = response.value(t, x.n, x.p);
  const double dn = growth.value(t, x.n) * x.n - f * x.p;
  double dp = 0.0;
  switch (family) {
    case Family::PredatorPrey:
      dp = gamma(t) * f * x.p - delta1(t) * x.p - delta2(t) * x.p * x.p;
      break;
    case Family::LeslieGower:
      dp = c2_or_a(t) * x.p * (1.0 - x.p / predator_capacity(t, x.n));
      break;
    case Family::LeslieGowerPM:
      dp = x.p * (c2_or_a(t) - x.p / predator_capacity(t, x.n));
      break;
  }
  return {dn, dp};
}

Mat2 ModelSystem::jacobian(double t, State x) const {
  const double f = response.value(t, x.n, x.p);
  const double fn = response.dn(t, x.n, x.p);
  const double fp = response.dp(t, x.n, x.p);
  Mat2 j;
  j.a11 = growth.dn(t, x.n) * x.n + growth.value(t, x.n) - fn * x.p;
  j.a12 = -fp * x.p - f;
  switch (family) {
    case Family::PredatorPrey: {
      const double g = gamma(t);
      j.a21 = g * fn * x.p;
      j.a22 = g * fp * x.p + g * f - delta1(t) - 2.0 * delta2(t) * x.p;
      break;
    }
    case Family::LeslieGower: {
      const double cap = predator_capacity(t, x.n);
      const double c2 = c2_or_a(t);
      j.a21 = c2 * x.p * x.p / (cap * cap);
      j.a22 = c2 * (1.0 - 2.0 * x.p / cap);
      break;
    }
    case Family::LeslieGowerPM: {
      const double cap = predator_capacity(t, x.n);
      j.a21 = x.p * x.p / (cap * cap);
      j.a22 = c2_or_a(t) - 2.0 * x.p / cap;
      break;
    }
  }
  return j;
}

namespace {

SeasonalCoefficient* coefficient_by_name(ModelSystem& m, std::string_view name) {
  if (name == "r") return &m.growth.r;
  if (name == "K_minus" || name == "k") return &m.growth.k_minus;
  if (name == "K_plus" || name == "K") return &m.growth.k_plus;
  if (name == "m") return &m.growth.m;
  if (name == "b") return &m.response.b;
  if (name == "p") return &m.response.p;
  if (name == "h") return &m.response.h;
  if (name == "gamma") return &m.gamma;
  if (name == "delta1") return &m.delta1;
  if (name == "delta2") return &m.delta2;
  if (name == "c" || name == "n") return &m.c;
  if (name == "c2" || name == "a") return &m.c2_or_a;
  return nullptr;
}

std::pair<std::string_view, std::string_view> split_path(std::string_view path) {
  const auto dot = path.find('.');
  if (dot == std::string_view::npos) return {path, "mean"};
  return {path.substr(0, dot), path.substr(dot + 1)};
}

}  // namespace

ModelSystem ModelSystem::with_parameter(std::string_view path, double value) const {
  ModelSystem out = *this;
  if (path == "s") {
    for (auto* coef : {&out.growth.r, &out.growth.k_minus, &out.growth.k_plus, &out.growth.m,
                       &out.response.b, &out.response.p, &out.response.h, &out.gamma, &out.delta1,
                       &out.delta2, &out.c, &out.c2_or_a}) {
      if (coef->phase() != Phase::Constant) *coef = coef->with_amplitude(value);
    }
    return out;
  }
  if (path == "period") {
    throw ModelError("the period is not a sweepable parameter");
  }
  const auto [name, field] = split_path(path);
  SeasonalCoefficient* coef = coefficient_by_name(out, name);
  if (coef == nullptr) throw ModelError("unknown parameter path '" + std::string(path) + "'");
  if (field == "mean") {
    *coef = coef->with_mean(value);
  } else if (field == "amplitude") {
    *coef = coef->with_amplitude(value);
  } else {
    throw ModelError("unknown parameter field '" + std::string(field) + "' in '" +
                     std::string(path) + "'");
  }
  return out;
}

double ModelSystem::parameter(std::string_view path) const {
  ModelSystem copy = *this;
  if (path == "s") {
    for (auto* coef : {&copy.growth.r, &copy.growth.k_plus, &copy.response.b, &copy.response.p,
                       &copy.gamma, &copy.delta1, &copy.c, &copy.c2_or_a}) {
      if (coef->phase() != Phase::Constant) return coef->amplitude();
    }
    return 0.0;
  }
  const auto [name, field] = split_path(path);
  const SeasonalCoefficient* coef = coefficient_by_name(copy, name);
  if (coef == nullptr) throw ModelError("unknown parameter path '" + std::string(path) + "'");
  if (field == "mean") return coef->mean();
  if (field == "amplitude") return coef->amplitude();
  throw ModelError("unknown parameter field '" + std::string(field) + "'");
}

double eval_coefficient(const SeasonalCoefficient& coef, double t) { return coef(t); }
double eval_growth(const GrowthFunction& g, double t, double n) { return g.value(t, n); }
double eval_response(const FunctionalResponse& f, double t, double n, double p) {
  return f.value(t, n, p);
}
State eval_rhs(const ModelSystem& m, double t, State x) { return m.rhs(t, x); }
Mat2 eval_jacobian(const ModelSystem& m, double t, State x) { return m.jacobian(t, x); }

// ---------------------------------------------------------------------------
// Roots of k(t, .)

double upper_root(const GrowthFunction& g, double t) {
  switch (g.kind) {
    case GrowthFunction::Kind::GilpinStrong:
    case GrowthFunction::Kind::AlleeLogistic:
    case GrowthFunction::Kind::GilpinWeakLike: return g.k_plus(t);
    case GrowthFunction::Kind::Custom: break;
  }
  auto k = [&](double n) { return g.value(t, n); };
  // Walk outward until k turns negative past the positive hump.
  double hi = 1.0;
  while (k(hi) >= 0.0 || k(0.5 * hi) < 0.0) {
    if (k(hi) < 0.0 && k(0.5 * hi) < 0.0) {
      hi *= 0.5;
      if (hi < 1e-12) throw ModelError("custom growth: no positive carrying capacity found");
      continue;
    }
    hi *= 2.0;
    if (hi > 1e12) throw ModelError("custom growth: k(t, N) never turns negative");
  }
  const double lo = 0.5 * hi;
  return bisect(k, lo, hi, k(lo));
}

std::optional<double> lower_root(const GrowthFunction& g, double t) {
  switch (g.kind) {
    case GrowthFunction::Kind::GilpinStrong:
    case GrowthFunction::Kind::AlleeLogistic: return g.k_minus(t);
    case GrowthFunction::Kind::GilpinWeakLike: return std::nullopt;
    case GrowthFunction::Kind::Custom: break;
  }
  if (g.custom_allee == AlleeKind::Weak) return std::nullopt;
  auto k = [&](double n) { return g.value(t, n); };
  const double kp = upper_root(g, t);
  constexpr int kScan = 400;
  double prev = 0.0;
  double fprev = k(0.0);
  for (int i = 1; i <= kScan; ++i) {
    const double n = kp * i / kScan;
    const double fn = k(n);
    if (fprev < 0.0 && fn >= 0.0) return bisect(k, prev, n, fprev);
    prev = n;
    fprev = fn;
  }
  return std::nullopt;
}

std::optional<RootBounds> lower_root_bounds(const GrowthFunction& g, double period, int grid) {
  if (g.kind == GrowthFunction::Kind::GilpinStrong ||
      g.kind == GrowthFunction::Kind::AlleeLogistic) {
    return RootBounds{g.k_minus.lower(), g.k_minus.upper()};
  }
  RootBounds b{INFINITY, -INFINITY};
  for (int i = 0; i < grid; ++i) {
    const auto root = lower_root(g, period * i / grid);
    if (!root) return std::nullopt;
    b.lower = std::min(b.lower, *root);
    b.upper = std::max(b.upper, *root);
  }
  return b;
}

RootBounds upper_root_bounds(const GrowthFunction& g, double period, int grid) {
  if (g.kind != GrowthFunction::Kind::Custom) return {g.k_plus.lower(), g.k_plus.upper()};
  RootBounds b{INFINITY, -INFINITY};
  for (int i = 0; i < grid; ++i) {
    const double root = upper_root(g, period * i / grid);
    b.lower = std::min(b.lower, root);
    b.upper = std::max(b.upper, root);
  }
  return b;
}

double growth_peak(const GrowthFunction& g, double t) {
  if (g.kind == GrowthFunction::Kind::GilpinStrong ||
      g.kind == GrowthFunction::Kind::AlleeLogistic) {
    return 0.5 * (g.k_minus(t) + g.k_plus(t));
  }
  auto dk = [&](double n) { return g.dn(t, n); };
  const double d0 = dk(0.0);
  if (d0 <= 0.0) return 0.0;
  const double kp = upper_root(g, t);
  const double dkp = dk(kp);
  if (dkp >= 0.0) return kp;
  return bisect(dk, 0.0, kp, d0);
}

}  // namespace allee
