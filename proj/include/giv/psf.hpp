#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "giv/geometry.hpp"
#include "giv/uniform_sum.hpp"

namespace giv {

struct BallIndicator {
  double radius = 1.0;
};
struct BoxIndicator {
  Vec half_widths{0.5, 0.5, 0.5};
};
struct Gaussian {
  double sigma = 1.0;
};
/// Density proportional to (1 - |z|^2 / R^2)^+.
struct Bump {
  double radius = 1.0;
};
/// Radial density, piecewise linear in |z| between the nodes, zero beyond
/// the last node.
struct TabulatedRadial {
  std::vector<double> radii;
  std::vector<double> density;
  double normalization = 1.0;  // factor applied to the raw values on load
};

using PsfVariant = std::variant<BallIndicator, BoxIndicator, Gaussian, Bump, TabulatedRadial>;

/// A point spread function rho on R^d (d = 2 or 3) with unit mass.
class Psf {
 public:
  Psf(int dim, PsfVariant variant);

  static Psf ball_indicator(int dim, double radius) { return Psf(dim, BallIndicator{radius}); }
  static Psf box_indicator(int dim, const Vec& half_widths) { return Psf(dim, BoxIndicator{half_widths}); }
  static Psf gaussian(int dim, double sigma) { return Psf(dim, Gaussian{sigma}); }
  static Psf bump(int dim, double radius) { return Psf(dim, Bump{radius}); }
  /// Densities are renormalized to unit mass; the factor is logged.
  static Psf tabulated(int dim, std::vector<double> radii, std::vector<double> density);
  /// Two-column CSV (radius, density); a non-numeric first line is skipped.
  static Psf load_tabulated_csv(int dim, const std::string& path);

  int dim() const { return dim_; }
  const PsfVariant& variant() const { return variant_; }
  std::string kind_name() const;

  double density(const Vec& z) const;
  /// rho as a function of |z|; rotation-invariant variants only.
  double radial_density(double r) const;

  bool compact() const { return !std::holds_alternative<Gaussian>(variant_); }
  bool rotation_invariant() const { return !std::holds_alternative<BoxIndicator>(variant_); }
  bool reflection_invariant() const { return true; }
  bool continuous() const;

  /// Euclidean radius of the support; for the Gaussian the radius whose tail
  /// mass is at most 1e-14.
  double support_radius() const;
  /// Smallest R with tail_mass(R) <= tail (compact variants: support radius).
  double truncation_radius(double tail = 1e-14) const;
  /// Mass of {|z| >= R}.
  double tail_mass(double R) const;

  /// Hyperplane marginal \int_{n^perp} rho(y + s n) dy for a rotation-invariant psf.
  double radial_marginal(double s) const;
  /// \int_{n^perp} |y|^2 rho(y + s n) dy for a rotation-invariant psf.
  double radial_second_moment(double s) const;

 private:
  int dim_;
  PsfVariant variant_;
  double bump_constant_ = 0.0;
  double truncation_ = 0.0;
};

enum class LevelConvention {
  /// phi(beta) = inf{t : theta(t) <= beta}
  Infimum,
  /// phi~(beta) = sup{t : theta(t) >= beta}
  Supremum,
};

/// t -> theta^{H_n}(t n) = \int_{<z,n> <= 0} rho(z - t n) dz for a fixed unit
/// direction n: the intensity at signed distance t outside a half-space with
/// outer normal n. Non-increasing, from 1 to 0.
class HalfspaceProfile {
 public:
  HalfspaceProfile(const Psf& psf, const Vec& direction);

  const Psf& psf() const { return *psf_; }
  const Vec& direction() const { return direction_; }

  double value(double t) const;
  /// d/dt theta; one-sided (right-continuous marginal) where the marginal jumps.
  double derivative(double t) const;

  /// Level crossing for beta in (0, 1).
  double phi(double beta, LevelConvention conv = LevelConvention::Infimum) const;
  /// Same as phi, but also accepts beta = 0 or 1 for compact psfs (the
  /// support ends).
  double level_crossing(double beta, LevelConvention conv) const;
  bool is_regular_value(double beta) const;

  /// theta == 1 for t <= lower_end() and theta == 0 for t >= upper_end()
  /// (up to the 1e-14 tail for the Gaussian).
  double lower_end() const { return -reach_; }
  double upper_end() const { return reach_; }

 private:
  // P(<Z, n> <= x) for x <= 0.
  double lower_tail(double x) const;
  double marginal(double s) const;

  std::shared_ptr<const Psf> psf_;
  Vec direction_;
  double reach_ = 0.0;
  std::unique_ptr<UniformSum> box_sum_;
  double box_half_total_ = 0.0;
};

}  // namespace giv
