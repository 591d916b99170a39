#include "allee/quadrature.hpp"

#include <algorithm>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace allee {

namespace {

constexpr unsigned kMaxDepth = 15;

}  // namespace

double integrate_function(const std::function<double(double)>& g, double a, double b,
                          double tol) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 15>::integrate(g, a, b, kMaxDepth, tol);
}

double integrate_along(const DensePath& path, const std::function<double(double, State)>& g,
                       double tol) {
  using boost::math::quadrature::gauss_kronrod;
  double total = 0.0;
  for (const auto& seg : path.segments()) {
    auto integrand = [&](double t) {
      const auto y = seg(t);
      return g(t, State{y[0] > 0.0 ? y[0] : 0.0, y[1] > 0.0 ? y[1] : 0.0});
    };
    // Backward paths have negative steps; integrate over increasing time.
    const double a = std::min(seg.t0, seg.t0 + seg.h);
    const double b = std::max(seg.t0, seg.t0 + seg.h);
    total += gauss_kronrod<double, 15>::integrate(integrand, a, b, kMaxDepth, tol);
  }
  return total;
}

}  // namespace allee
