#pragma once

#include <array>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "giv/geometry.hpp"
#include "giv/psf.hpp"

namespace giv {

struct BallPhantom {
  Vec center{};
  double radius = 1.0;
};

/// Box center + rotation * [-h, h]^d. Columns of `rotation` are the box axes.
struct BoxPhantom {
  Vec center{};
  Vec half_widths{0.5, 0.5, 0.5};
  std::array<Vec, 3> rotation{Vec{1, 0, 0}, Vec{0, 1, 0}, Vec{0, 0, 1}};
};

/// {x : <x, n> <= offset}
struct HalfSpacePhantom {
  Vec normal{1, 0, 0};
  double offset = 0.0;
};

using PhantomVariant = std::variant<BallPhantom, BoxPhantom, HalfSpacePhantom>;

struct SphereUniform {
  double radius = 1.0;
  double mass = 0.0;
};

struct NormalAtom {
  Vec normal{};
  double mass = 0.0;
};

struct PolytopeAtoms {
  std::vector<NormalAtom> atoms;
};

using SurfaceMeasure = std::variant<SphereUniform, PolytopeAtoms>;

double total_mass(const SurfaceMeasure& measure);

struct CurvatureInfo {
  double trace = 0.0;
  bool defined_everywhere = true;
};

/// Closed convex test solid in R^d, d = 2 or 3.
class Phantom {
 public:
  Phantom(int dim, PhantomVariant variant);

  static Phantom ball(int dim, const Vec& center, double radius) { return Phantom(dim, BallPhantom{center, radius}); }
  /// Axis-aligned box.
  static Phantom box(int dim, const Vec& center, const Vec& half_widths);
  /// Rectangle in the plane rotated counter-clockwise by `angle` radians.
  static Phantom rectangle(const Vec& center, double half_width, double half_height, double angle);
  static Phantom half_space(int dim, const Vec& normal, double offset) {
    return Phantom(dim, HalfSpacePhantom{normal, offset});
  }

  int dim() const { return dim_; }
  const PhantomVariant& variant() const { return variant_; }
  std::string kind_name() const;

  bool contains(const Vec& x) const;
  /// Euclidean signed distance to the boundary, positive outside.
  double signed_distance(const Vec& x) const;
  double intrinsic_volume(int q) const;
  bool bounded() const { return !std::holds_alternative<HalfSpacePhantom>(variant_); }
  /// Axis-aligned bounding box (lo, hi); bounded phantoms only.
  std::pair<Vec, Vec> bounding_box() const;
  /// r-regular (Ball only among the built-ins).
  bool r_regular() const { return std::holds_alternative<BallPhantom>(variant_); }

  SurfaceMeasure surface_measure() const;
  CurvatureInfo curvature() const;

  /// Interval {s : x + s e in X} for a unit vector e; empty when lo > hi.
  std::pair<double, double> chord(const Vec& x, const Vec& e) const;

  /// Values of y_k at which the section of X by the flat {y : y_j = p_j, j < k}
  /// changes combinatorially (section endpoints, projected vertices).
  std::vector<double> section_breaks(const Vec& p, int k) const;

  /// theta_a^X(x) = \int_X rho_a(z - x) dz.
  double intensity(const Psf& psf, double a, const Vec& x) const;

 private:
  Vec to_local(const Vec& x) const;

  int dim_;
  PhantomVariant variant_;
};

enum class IntensityPath {
  HalfspaceProfile,
  BallIntersection,
  RadialShell,
  SeparableOverlap,
  PolygonClip,
  NestedQuadrature,
};

std::string to_string(IntensityPath path);

/// Evaluates x -> theta_a^X(x) for fixed (phantom, psf, a), with the closed
/// form or quadrature chosen once at construction. Points farther than
/// a * (support or truncation radius) from the boundary are classified
/// directly as 0 or 1.
class IntensityEvaluator {
 public:
  IntensityEvaluator(const Phantom& phantom, const Psf& psf, double a, bool force_quadrature = false);
  ~IntensityEvaluator();
  IntensityEvaluator(IntensityEvaluator&&) noexcept;

  double operator()(const Vec& x) const;
  IntensityPath path() const { return path_; }
  /// a times the radius beyond which the psf is treated as zero.
  double reach() const { return a_ * radius_; }

 private:
  double ball_intersection(const Vec& x) const;
  double radial_shell(const Vec& x) const;
  double separable_overlap(const Vec& x) const;
  double polygon_clip(const Vec& x) const;
  double nested(const Vec& x) const;

  Phantom phantom_;
  Psf psf_;
  double a_;
  double radius_;
  IntensityPath path_;
  std::unique_ptr<HalfspaceProfile> profile_;
  std::array<int, 3> axis_map_{0, 1, 2};  // box axis j is aligned with world axis axis_map_[j]
};

}  // namespace giv
