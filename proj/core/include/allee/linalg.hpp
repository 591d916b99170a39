#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace allee {

/// Population state (N, P): prey first, predator second.
struct State {
  double n = 0.0;
  double p = 0.0;

  friend State operator+(State a, State b) { return {a.n + b.n, a.p + b.p}; }
  friend State operator-(State a, State b) { return {a.n - b.n, a.p - b.p}; }
  friend State operator*(double s, State a) { return {s * a.n, s * a.p}; }
  friend bool operator==(const State&, const State&) = default;
};

inline double norm(State x) { return std::hypot(x.n, x.p); }

/// Row-major 2x2 matrix.
struct Mat2 {
  double a11 = 0.0, a12 = 0.0;
  double a21 = 0.0, a22 = 0.0;

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 diag(double x, double y) { return {x, 0.0, 0.0, y}; }

  double det() const { return a11 * a22 - a12 * a21; }
  double trace() const { return a11 + a22; }

  friend Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
  }
  friend Mat2 operator-(const Mat2& a, const Mat2& b) {
    return {a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
  }
  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
            a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
  }
  friend State operator*(const Mat2& a, State x) {
    return {a.a11 * x.n + a.a12 * x.p, a.a21 * x.n + a.a22 * x.p};
  }
};

using Multipliers = std::array<std::complex<double>, 2>;

/// Eigenvalues of a real 2x2 matrix, ordered by decreasing modulus.
/// Real pairs come out exactly real.
/// Roots of mu^2 - tr mu + det, sorted by decreasing modulus.
inline Multipliers eigenvalues(double tr, double det) {
  const double half = 0.5 * tr;
  const double disc = half * half - det;
  Multipliers ev;
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    // Avoid cancellation: compute the larger-magnitude root first.
    const double big = half >= 0.0 ? half + root : half - root;
    const double small = big != 0.0 ? det / big : 0.0;
    ev = {std::complex<double>(big, 0.0), std::complex<double>(small, 0.0)};
  } else {
    const double im = std::sqrt(-disc);
    ev = {std::complex<double>(half, im), std::complex<double>(half, -im)};
  }
  if (std::abs(ev[1]) > std::abs(ev[0])) std::swap(ev[0], ev[1]);
  return ev;
}

inline Multipliers eigenvalues(const Mat2& a) { return eigenvalues(a.trace(), a.det()); }

/// Solves a*x = b by Cramer's rule. Caller checks the determinant.
inline State solve(const Mat2& a, State b) {
  const double d = a.det();
  return {(b.n * a.a22 - a.a12 * b.p) / d, (a.a11 * b.p - a.a21 * b.n) / d};
}

}  // namespace allee
