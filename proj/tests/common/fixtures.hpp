#pragma once

#include <allee/presets.hpp>
#include <allee/seasonal.hpp>

namespace allee::testing {

inline ModelSystem table1(double p_mean = 1.0) {
  presets::PredatorPreyTable t;
  t.p = p_mean;
  return presets::predator_prey(t);
}

inline ModelSystem table1_autonomous(double p_mean = 1.0) {
  presets::PredatorPreyTable t;
  t.p = p_mean;
  t.s = 0.0;
  return presets::predator_prey(t);
}

/// Weak Allee example r (N + m)(K+ - N)/(1 + N) with Holling II predation.
inline ModelSystem weak_model(double s, double gamma = 0.39, double b = 0.88, double p = 1.3,
                              double delta1 = 0.19, double r = 0.11, double m = 0.05,
                              double k_plus = 1.0) {
  const double T = 365.0;
  auto fav = [&](double mean) { return SeasonalCoefficient(mean, s, Phase::Favorable, T); };
  auto unf = [&](double mean) { return SeasonalCoefficient(mean, s, Phase::Unfavorable, T); };
  ModelSystem sys;
  sys.family = Family::PredatorPrey;
  sys.period = T;
  sys.growth = GrowthFunction::gilpin_weak_like(fav(r), unf(m), fav(k_plus));
  sys.response = FunctionalResponse::holling_ii(fav(b), fav(p));
  sys.gamma = fav(gamma);
  sys.delta1 = unf(delta1);
  sys.delta2 = SeasonalCoefficient::constant(0.0, T);
  return sys;
}

/// Leslie-Gower form with predator equation c2 P (1 - P/(N + c)).
inline ModelSystem leslie_gower_constant(double c = 0.5, double c2 = 0.01) {
  const double T = 365.0;
  auto k = [&](double v) { return SeasonalCoefficient::constant(v, T); };
  ModelSystem sys;
  sys.family = Family::LeslieGower;
  sys.period = T;
  sys.growth = GrowthFunction::allee_logistic(k(0.4), k(2.0), k(12.0));
  sys.response = FunctionalResponse::beddington_deangelis(k(0.25), k(0.375), k(0.175));
  sys.c = k(c);
  sys.c2_or_a = k(c2);
  return sys;
}

}  // namespace allee::testing
