#include "giv/estimator.hpp"

#include <cmath>
#include <numbers>

#include "giv/error.hpp"
#include "giv/parallel.hpp"

namespace giv {

double bw_estimate(std::span<const std::uint64_t> counts, const Weights& weights, double a) {
  if (weights.values.size() != counts.size()) throw ConfigError("weights and counts differ in length");
  double s = 0.0;
  for (std::size_t l = 1; l < counts.size(); ++l) s += weights.values[l] * static_cast<double>(counts[l]);
  return std::pow(a, weights.q) * s;
}

double thresholded_estimate(const GreyImage& image, double beta, const Weights& weights,
                            const ConfigurationScheme& scheme, double a) {
  const auto counts = count_configurations(threshold(image, beta), scheme);
  return bw_estimate(counts, weights, a);
}

void check_weight_compatibility(const Psf& psf, const WeightFunction& f) {
  if (psf.compact() || f.is_zero()) return;
  if (f.support().first <= 0.0) {
    throw IncompatibleError("with a non-compact psf the weight function must vanish near 0");
  }
}

double grey_estimate(const GreyImage& image, const WeightFunction& f, double a, int q, const Psf* psf) {
  if (psf) check_weight_compatibility(*psf, f);
  std::vector<double> terms(image.values.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = f(image.values[i]);
  return std::pow(a, q) * pairwise_sum(terms);
}

ScaledWeightFunction make_surface_estimator(const Psf& psf, double beta, double omega) {
  if (!psf.rotation_invariant()) throw IncompatibleError("surface estimator needs a rotation-invariant psf");
  if (!(beta > 0.0 && beta < omega && omega < 1.0)) {
    throw ConfigError("surface estimator needs 0 < beta < omega < 1");
  }
  const HalfspaceProfile profile(psf, Vec{1.0, 0.0, 0.0});
  const double gap = profile.phi(beta) - profile.phi(omega);
  if (!(gap > 1e-12)) throw NumericalError("degenerate level interval: phi(beta) = phi(omega)");
  ScaledWeightFunction out;
  const bool symmetric = std::abs(omega - (1.0 - beta)) <= 1e-15;
  out.f = symmetric ? WeightFunction::symmetric_indicator(beta) : WeightFunction::indicator(beta, omega);
  out.scale = 0.5 / gap;
  out.q = psf.dim() - 1;
  return out;
}

CurvatureEstimator make_mean_curvature_estimator(const Psf& psf, CurvatureVariant variant, std::optional<double> beta) {
  if (!psf.rotation_invariant() || !psf.compact() || !psf.continuous()) {
    throw IncompatibleError("mean-curvature estimators need a rotation-invariant, continuous, compactly supported psf");
  }
  CurvatureEstimator out;
  out.beta0 = find_beta0(psf);
  if (variant == CurvatureVariant::Linear) {
    out.estimator.f = WeightFunction::scaled_linear(1.0, beta.value_or(out.beta0.beta0));
  } else {
    out.estimator.f = WeightFunction::antisymmetric_count(beta.value_or(out.beta0.beta0));
  }
  out.constants = constants_c123(psf, out.estimator.f);
  const double limit = 2.0 * std::numbers::pi * out.constants.sum();
  if (std::abs(out.constants.sum()) < 1e-8) throw NumericalError("c1 + c2 + c3 vanishes; no unbiased scale");
  out.estimator.scale = 1.0 / limit;
  out.estimator.q = psf.dim() - 2;
  return out;
}

}  // namespace giv
