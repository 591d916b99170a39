#pragma once

#include "allee/seasonal.hpp"

namespace allee::presets {

/// Gilpin strong Allee growth with Holling II predation.
/// r, K+, gamma, b, p, delta2 favorable; delta1, K- unfavorable.
struct PredatorPreyTable {
  double r = 0.11;
  double k_minus = 0.02;
  double k_plus = 1.0;
  double gamma = 0.39;
  double b = 0.88;
  double p = 1.0;
  double delta1 = 0.19;
  double delta2 = 0.0;
  double s = 0.1;
  double period = 365.0;
};

ModelSystem predator_prey(const PredatorPreyTable& t = {});

/// Pal-Saha Leslie-Gower form with Beddington-DeAngelis predation.
/// Every coefficient favorable except the Allee threshold k.
struct LeslieGowerTable {
  double r = 0.4;
  double k = 2.0;
  double K = 12.0;
  double b = 0.25;
  double h = 0.375;
  double p = 0.175;
  double a = 1.5;
  double n = 0.1;
  double s = 0.2;
  double period = 365.0;
};

ModelSystem leslie_gower(const LeslieGowerTable& t = {});

}  // namespace allee::presets
