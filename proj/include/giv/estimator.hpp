#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "giv/configuration.hpp"
#include "giv/imaging.hpp"
#include "giv/psf.hpp"
#include "giv/theory.hpp"
#include "giv/weight_function.hpp"

namespace giv {

/// a^q sum_{l >= 1} w_l N_l.
double bw_estimate(std::span<const std::uint64_t> counts, const Weights& weights, double a);

/// bw_estimate of the configuration counts of the image thresholded at beta.
double thresholded_estimate(const GreyImage& image, double beta, const Weights& weights,
                            const ConfigurationScheme& scheme, double a);

/// Throws IncompatibleError when f is nonzero arbitrarily close to 0 while the
/// psf has unbounded support.
void check_weight_compatibility(const Psf& psf, const WeightFunction& f);

/// a^q sum_z f(value_z), summed in a fixed pairwise order.
double grey_estimate(const GreyImage& image, const WeightFunction& f, double a, int q, const Psf* psf = nullptr);

/// The estimator scale * a^q sum_z f(value_z).
struct ScaledWeightFunction {
  WeightFunction f;
  double scale = 1.0;
  int q = 1;

  WeightFunction combined() const { return f.scaled(scale); }
};

/// 1_{(beta, omega]} scaled by 1 / (2 (phi(beta) - phi(omega))), an
/// asymptotically unbiased estimator of V_{d-1}; omega = 1 - beta gives the
/// symmetric indicator 1_{(beta, 1 - beta)}.
ScaledWeightFunction make_surface_estimator(const Psf& psf, double beta, double omega);

enum class CurvatureVariant { Linear, AntisymmetricCount };

struct CurvatureEstimator {
  ScaledWeightFunction estimator;
  Beta0 beta0;
  CurvatureConstants constants;
};

/// Estimator of V_{d-2}: (x - 1/2) on (beta0, 1 - beta0), or
/// 1_{(beta, 1/2)} - 1_{(1/2, 1 - beta)} (beta defaults to beta0), scaled by
/// 1 / (2 pi (c1 + c2 + c3)).
CurvatureEstimator make_mean_curvature_estimator(const Psf& psf, CurvatureVariant variant,
                                                 std::optional<double> beta = std::nullopt);

}  // namespace giv
