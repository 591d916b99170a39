#pragma once

#include <functional>

#include "allee/integrator.hpp"

namespace allee {

/// Adaptive Gauss-Kronrod (7/15) quadrature of a smooth scalar function.
double integrate_function(const std::function<double(double)>& g, double a, double b,
                          double tol = 1e-10);

/// Integral of g(t, x(t)) along a dense path. Each integrator step is handled
/// separately, so the rule only sees the smooth per-step interpolant.
double integrate_along(const DensePath& path, const std::function<double(double, State)>& g,
                       double tol = 1e-10);

}  // namespace allee
