#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace giv {

/// Points and vectors in dimension 2 or 3. Unused trailing components are 0.
using Vec = std::array<double, 3>;

inline constexpr int kMaxDim = 3;

inline double dot(const Vec& a, const Vec& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }
inline Vec operator+(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec operator-(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec operator*(double s, const Vec& a) { return {s * a[0], s * a[1], s * a[2]}; }

/// Volume of the unit ball in dimension m (kappa_m); kappa_0 = 1.
inline double unit_ball_volume(int m) {
  return std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
}

/// Surface area of the unit sphere S^{m-1} in R^m, m * kappa_m. For m = 1 this is 2.
inline double unit_sphere_area(int m) { return m * unit_ball_volume(m); }

inline Vec normalized(const Vec& a) {
  const double n = norm(a);
  return {a[0] / n, a[1] / n, a[2] / n};
}

}  // namespace giv
