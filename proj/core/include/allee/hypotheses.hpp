#pragma once

#include <optional>
#include <string>
#include <vector>

#include "allee/seasonal.hpp"

namespace allee {

enum class CheckStatus { Pass, Warning, Fail };

struct HypothesisCheck {
  std::string name;    // "gs1", "f3", "preliminary:delta1", ...
  CheckStatus status = CheckStatus::Pass;
  std::string detail;
};

struct HypothesisReport {
  std::vector<HypothesisCheck> checks;
  /// Worst relative deviation of the Richardson-extrapolated f0(t, P) from
  /// the analytic limit, when the response kind has one (Holling II, B-DA).
  std::optional<double> f0_relative_error;

  bool passed() const;
  const HypothesisCheck* find(const std::string& name) const;
};

/// Numerical sampling of the structural hypotheses on a t-grid and over the
/// invariant box. Failures are report entries, never exceptions.
/// grid_size must be at least 16.
HypothesisReport verify_hypotheses(const ModelSystem& m, int grid_size = 64);

/// Upper corner of the box [0, N_max] x [0, P_max] sampled for the response
/// checks: N_max = K+max + eps, P_max from the absorbing set bound.
struct InvariantBox {
  double n_max = 0.0;
  double p_max = 0.0;
  double epsilon = 0.0;
  double r_bar = 0.0;  // max_t k(t, xi(t))
};

/// eps = 0.01 * K+max. r_bar is maximized over a 1000-point t-grid.
InvariantBox invariant_box(const ModelSystem& m);

/// Membership in the absorbing set K' (predator-prey family).
bool in_absorbing_set(const ModelSystem& m, const InvariantBox& box, State x, double slack = 0.0);

}  // namespace allee
