#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "giv/configuration.hpp"
#include "giv/phantom.hpp"
#include "giv/psf.hpp"
#include "giv/weight_function.hpp"

namespace giv {

/// Quadrature on S^{d-1}: uniform angles in the plane, Gauss-Legendre in the
/// polar cosine times uniform azimuths in space.
class DirectionGrid {
 public:
  static DirectionGrid uniform(int dim, int size);

  int dim() const { return dim_; }
  int size() const { return size_; }
  const std::vector<Vec>& directions() const { return directions_; }
  const std::vector<double>& weights() const { return weights_; }

  double integrate(const std::function<double(const Vec&)>& g) const;

 private:
  int dim_ = 2;
  int size_ = 0;
  std::vector<Vec> directions_;
  std::vector<double> weights_;
};

/// \int_{S^{d-1}} g dH^{d-1}. In the plane this is adaptive in the angle with
/// breakpoints at multiples of pi/4 (where lattice support functions kink).
double sphere_integral(int dim, const std::function<double(const Vec&)>& g);

/// max <s, n> over a nonempty point set.
double support_function(std::span<const Vec> points, const Vec& n);

/// \int_{(0,1)} f dmu_n = \int f(theta(t)) dt over {0 < theta < 1}.
double mu_integral(const Psf& psf, const Vec& n, const WeightFunction& f);
/// \int_{(0,1)} f dnu_n = \int t f(theta(t)) dt over {0 < theta < 1}.
double nu_integral(const Psf& psf, const Vec& n, const WeightFunction& f);

/// Limit of E V^(f) for a^{d-1}-scaled grey-value sums: \int mu_integral(n) over the surface measure.
double first_order_mean(const SurfaceMeasure& measure, int dim, const Psf& psf, const WeightFunction& f);

/// sum_l w_l (-h(B_l + (-W_l), n))^+ ; all-white and all-black configurations are skipped.
double bw_direction_term(const ConfigurationScheme& scheme, const Weights& weights, const Vec& n);
/// Limit of E V^_{d-1} for configuration-count estimators.
double bw_first_order_mean(const SurfaceMeasure& measure, int dim, const ConfigurationScheme& scheme,
                           const Weights& weights);

struct WorstCase {
  double error = 0.0;
  Vec direction{};
};
/// sup_n |2 \int f dmu_n - 1| by coarse-to-fine direction grids and a final
/// local refinement around the best direction.
WorstCase worst_case_error(const Psf& psf, const WeightFunction& f);

/// x -> (f(x) + f(1 - x)) / 2 on (0, 1) (end point values dropped).
WeightFunction symmetrize(const WeightFunction& f);

/// Hyperplane marginal m(t) and curvature moment M2(t) = \int_{n^perp} |y|^2 rho(y + t n) dy.
double hyperplane_marginal(const Psf& psf, double t);
double hyperplane_second_moment(const Psf& psf, double t);

/// Curvature-induced shift of the level-beta crossing for a boundary with
/// II(z) = |z|^2 trace / (d - 1).
double psi_Q(const Psf& psf, double trace, double beta);

struct CurvatureConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double sum() const { return c1 + c2 + c3; }
};

/// Second-order constants of \int f o theta_a^X near a boundary with
/// isotropic curvature, per unit trace of II. Jumps of f contribute
/// jump * psi_Q / trace to c2.
CurvatureConstants second_order_constants(const Psf& psf, const WeightFunction& f);
/// Same, with the preconditions of the mean-curvature estimators (radial,
/// continuous, compact psf; f(x) = -f(1 - x)).
CurvatureConstants constants_c123(const Psf& psf, const WeightFunction& f);

/// d2(t) = \int_0^t (M2(s) / (d - 1) - s^2 m(s)) ds.
double d2_function(const Psf& psf, double t);

struct Beta0 {
  double t0 = 0.0;
  double beta0 = 0.5;
  double d2 = 0.0;
};
/// Interior maximum of d2 on (0, D / sqrt(d)) and the level beta0 = theta(t0).
Beta0 find_beta0(const Psf& psf);

/// Expansion \int f o theta_a^X dH^d = order1 * a + order2 * a^2 + o(a^2).
struct AsymptoticPrediction {
  double order0 = 0.0;
  double order1 = 0.0;
  double order2 = 0.0;
  bool second_order = false;
  std::vector<std::string> notes;

  double integral(double a) const { return order0 + a * (order1 + a * order2); }
  /// Design-based mean of a^q sum_z f(theta_a^X(z)).
  double mean(int q, int dim, double a) const;
  double first_order_mean(int q, int dim, double a) const;
};

AsymptoticPrediction second_order_mean_sphere(const Psf& psf, const WeightFunction& f, double radius);

/// 2 pi (c1 + c2 + c3).
double mean_curvature_limit(const Psf& psf, const WeightFunction& f);

}  // namespace giv
