#include "allee/presets.hpp"

namespace allee::presets {

ModelSystem predator_prey(const PredatorPreyTable& t) {
  auto fav = [&](double v) { return SeasonalCoefficient(v, t.s, Phase::Favorable, t.period); };
  auto unf = [&](double v) { return SeasonalCoefficient(v, t.s, Phase::Unfavorable, t.period); };
  ModelSystem m;
  m.family = Family::PredatorPrey;
  m.period = t.period;
  m.growth = GrowthFunction::gilpin_strong(fav(t.r), unf(t.k_minus), fav(t.k_plus));
  m.response = FunctionalResponse::holling_ii(fav(t.b), fav(t.p));
  m.gamma = fav(t.gamma);
  m.delta1 = unf(t.delta1);
  m.delta2 = fav(t.delta2);
  m.validate();
  return m;
}

ModelSystem leslie_gower(const LeslieGowerTable& t) {
  auto fav = [&](double v) { return SeasonalCoefficient(v, t.s, Phase::Favorable, t.period); };
  auto unf = [&](double v) { return SeasonalCoefficient(v, t.s, Phase::Unfavorable, t.period); };
  ModelSystem m;
  m.family = Family::LeslieGowerPM;
  m.period = t.period;
  m.growth = GrowthFunction::allee_logistic(fav(t.r), unf(t.k), fav(t.K));
  m.response = FunctionalResponse::beddington_deangelis(fav(t.b), fav(t.h), fav(t.p));
  m.c = fav(t.n);
  m.c2_or_a = fav(t.a);
  m.validate();
  return m;
}

}  // namespace allee::presets
