#include <doctest.h>

#include <cmath>
#include <numbers>

#include "giv/error.hpp"
#include "giv/estimator.hpp"
#include "giv/phantom.hpp"
#include "giv/quadrature.hpp"
#include "giv/root_finding.hpp"
#include "giv/theory.hpp"

using namespace giv;

namespace {

constexpr double kT0 = 0.408248290463863;  // 1 / sqrt(6)
constexpr double kBeta0 = 0.18160873382276976;
constexpr double kD2 = 0.04393595947019611;
constexpr double kScale = -3.6224301235496603;

// Intensity of the unit disk blurred by the planar bump of radius a, at
// distance r from the center: integral over psf shells of radius a u of the
// fraction of the shell inside the disk.
double disk_bump_intensity(double a, double r) {
  auto shell = [&](double u) {
    const double s = a * u;
    double frac;
    if (r == 0.0 || s == 0.0) {
      frac = r + s <= 1.0 ? 1.0 : 0.0;
    } else {
      const double c = (r * r + s * s - 1.0) / (2.0 * r * s);
      frac = c <= -1.0 ? 1.0 : c >= 1.0 ? 0.0 : std::acos(c) / std::numbers::pi;
    }
    return (2.0 / std::numbers::pi) * (1.0 - u * u) * 2.0 * std::numbers::pi * u * frac;
  };
  const double brk[] = {std::abs(1.0 - r) / a};
  return quad::integrate(shell, 0.0, 1.0, {1e-15, 0.0, 4000}, brk).value;
}

double radius_at_level(double a, double level) {
  return bisect_root([&](double r) { return disk_bump_intensity(a, r) - level; }, 1.0 - a, 1.0 + a, 1e-15);
}

}  // namespace

TEST_CASE("sphere integrals") {
  CHECK(sphere_integral(2, [](const Vec&) { return 1.0; }) == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(sphere_integral(3, [](const Vec&) { return 1.0; }) == doctest::Approx(4.0 * std::numbers::pi));
  CHECK(sphere_integral(3, [](const Vec& n) { return n[0] * n[0]; }) ==
        doctest::Approx(4.0 * std::numbers::pi / 3.0));
  const auto grid = DirectionGrid::uniform(3, 2000);
  CHECK(grid.integrate([](const Vec& n) { return n[2] * n[2] * n[2] * n[2]; }) ==
        doctest::Approx(4.0 * std::numbers::pi / 5.0).epsilon(1e-8));
}

TEST_CASE("support function") {
  const std::vector<Vec> pts{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  CHECK(support_function(pts, normalized({1, 1, 0})) == doctest::Approx(std::sqrt(0.5)));
  CHECK(support_function(pts, {-1, 0, 0}) == 0.0);
  CHECK_THROWS_AS(support_function(std::span<const Vec>{}, {1, 0, 0}), ConfigError);
}

TEST_CASE("mu and nu integrals for a linear ramp profile") {
  // Axis-aligned box psf: theta(t) = (h - t) / (2h) on [-h, h], so
  // \int f(theta) dt = 2h \int f and \int t f(theta) dt = 2h \int h (1 - 2u) f(u) du.
  const double h = 0.4;
  const Psf psf = Psf::box_indicator(2, {h, 0.3, 0});
  const Vec n{1, 0, 0};
  const auto ind = WeightFunction::indicator(0.2, 0.7);
  CHECK(mu_integral(psf, n, ind) == doctest::Approx(2 * h * 0.5).epsilon(1e-12));
  CHECK(nu_integral(psf, n, ind) == doctest::Approx(2 * h * h * (0.5 - (0.49 - 0.04))).epsilon(1e-12));
  const auto lin = WeightFunction::scaled_linear(3.0, 0.1);
  CHECK(mu_integral(psf, n, lin) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
  // \int_{0.1}^{0.9} h (1 - 2u) 3 (u - 1/2) du = -6h \int_{-0.4}^{0.4} v^2 dv.
  CHECK(nu_integral(psf, n, lin) == doctest::Approx(2 * h * (-6.0 * h * 2.0 * 0.064 / 3.0)).epsilon(1e-12));
  const auto tab = WeightFunction::table({{0.0, 1.0, 0.0, 2.0}}, {{1.0, 0.0}});
  CHECK(mu_integral(psf, n, tab) == doctest::Approx(2 * h).epsilon(1e-12));
}

TEST_CASE("mu integral of the symmetric indicator is the level-set width") {
  for (const auto& psf : {Psf::gaussian(2, 0.7), Psf::bump(3, 1.0), Psf::ball_indicator(2, 0.5)}) {
    const Vec n = psf.dim() == 2 ? Vec{0.6, 0.8, 0} : normalized({1, 2, 2});
    const HalfspaceProfile p(psf, n);
    const double w = p.phi(0.3) - p.phi(0.7);
    CHECK(mu_integral(psf, n, WeightFunction::symmetric_indicator(0.3)) == doctest::Approx(w).epsilon(1e-10));
  }
}

TEST_CASE("worst-case error for the square box psf") {
  // <Z, n> is the sum of uniforms on [-A, A] and [-B, B], A = h max(|cos|, |sin|),
  // B = h min(...); its beta-quantile has a closed form on the quadratic ramp.
  const double h = 0.5;
  const double beta = 0.3;
  auto gap = [&](double alpha) {
    const double A = h * std::max(std::abs(std::cos(alpha)), std::abs(std::sin(alpha)));
    const double B = h * std::min(std::abs(std::cos(alpha)), std::abs(std::sin(alpha)));
    const double s = B > 0.0 && beta <= B / (2.0 * A) ? -A - B + std::sqrt(8.0 * A * B * beta) : 2.0 * A * beta - A;
    return -2.0 * s;
  };
  const double gap0 = gap(0.0);
  double worst = 0.0;
  for (int k = 0; k <= 100000; ++k) worst = std::max(worst, std::abs(gap(k * std::numbers::pi / 200000.0) / gap0 - 1.0));
  const Psf psf = Psf::box_indicator(2, {h, h, 0});
  const auto f = WeightFunction::symmetric_indicator(beta).scaled(1.0 / (2.0 * gap0));
  const WorstCase wc = worst_case_error(psf, f);
  CHECK(wc.error == doctest::Approx(worst).epsilon(1e-6));
  CHECK(std::abs(std::abs(wc.direction[0]) - std::sqrt(0.5)) < 1e-3);
  CHECK(worst_case_error(Psf::bump(2, 1.0), WeightFunction::symmetric_indicator(beta).scaled(1.0)).error ==
        doctest::Approx(std::abs(2.0 * mu_integral(Psf::bump(2, 1.0), {1, 0, 0},
                                                   WeightFunction::symmetric_indicator(beta)) - 1.0)));
}

TEST_CASE("symmetrization") {
  const auto f = WeightFunction::indicator(0.2, 0.6);
  const auto s = symmetrize(f);
  CHECK(s(0.3) == doctest::Approx(0.5));
  CHECK(s(0.5) == doctest::Approx(1.0));
  CHECK(s(0.7) == doctest::Approx(0.5));
  const auto sym = WeightFunction::symmetric_indicator(0.3);
  CHECK(approx_equal(symmetrize(sym), sym, 1e-14));
  // \int f dmu and \int (sym f) dmu agree for a reflection-invariant psf.
  const Psf psf = Psf::gaussian(2, 1.0);
  CHECK(mu_integral(psf, {1, 0, 0}, s) == doctest::Approx(mu_integral(psf, {1, 0, 0}, f)).epsilon(1e-10));
}

TEST_CASE("hyperplane moments") {
  const Psf bump = Psf::bump(2, 1.0);
  for (double t : {0.0, 0.3, 0.8}) {
    const double y = std::sqrt(1.0 - t * t);
    // Planar bump density (2 / pi)(1 - |z|^2) integrated across the chord.
    const double m = (2.0 / std::numbers::pi) * (2.0 * y * (1.0 - t * t) - 2.0 * y * y * y / 3.0);
    const double m2 = (2.0 / std::numbers::pi) * ((1.0 - t * t) * 2.0 * y * y * y / 3.0 - 2.0 * std::pow(y, 5) / 5.0);
    CHECK(hyperplane_marginal(bump, t) == doctest::Approx(m).epsilon(1e-12));
    CHECK(hyperplane_second_moment(bump, t) == doctest::Approx(m2).epsilon(1e-12));
  }
  CHECK(hyperplane_marginal(bump, 1.5) == 0.0);
}

TEST_CASE("beta0 for the planar bump") {
  const Psf bump = Psf::bump(2, 1.0);
  const Beta0 b = find_beta0(bump);
  CHECK(b.t0 == doctest::Approx(kT0).epsilon(1e-10));
  CHECK(b.beta0 == doctest::Approx(kBeta0).epsilon(1e-10));
  CHECK(b.d2 == doctest::Approx(kD2).epsilon(1e-10));
  CHECK(d2_function(bump, kT0) == doctest::Approx(kD2).epsilon(1e-10));
  CHECK(d2_function(bump, 0.3) < kD2);
  CHECK(d2_function(bump, 0.5) < kD2);
}

TEST_CASE("second-order constants match the radial expansion of the blurred disk") {
  // (\int f o theta_a^X - a S mu) / (a^2 S tr II) -> c1 + c2 + c3 for the unit disk.
  const Psf bump = Psf::bump(2, 1.0);
  const double beta0 = kBeta0;

  auto linear_integral = [&](double a) {
    const double r1 = radius_at_level(a, 1.0 - beta0);
    const double r2 = radius_at_level(a, beta0);
    return 2.0 * std::numbers::pi *
           quad::integrate([&](double r) { return r * (disk_bump_intensity(a, r) - 0.5); }, r1, r2, {1e-14, 0.0, 400})
               .value;
  };
  auto g = [&](double a) { return linear_integral(a) / (2.0 * std::numbers::pi * a * a); };
  const double extrapolated = 2.0 * g(0.01) - g(0.02);
  const auto lin = constants_c123(bump, WeightFunction::scaled_linear(1.0, beta0));
  CHECK(lin.sum() == doctest::Approx(extrapolated).epsilon(2e-4));
  CHECK(1.0 / (2.0 * std::numbers::pi * lin.sum()) == doctest::Approx(kScale).epsilon(1e-9));

  // Piecewise-constant 1_(b, 1/2) - 1_(1/2, 1-b): areas between level radii.
  auto count_integral = [&](double a) {
    const double rl = radius_at_level(a, 1.0 - beta0);
    const double rm = radius_at_level(a, 0.5);
    const double rh = radius_at_level(a, beta0);
    return std::numbers::pi * ((rh * rh - rm * rm) - (rm * rm - rl * rl));
  };
  auto gc = [&](double a) { return count_integral(a) / (2.0 * std::numbers::pi * a * a); };
  const double extrapolated_count = 2.0 * gc(0.01) - gc(0.02);
  const auto cnt = constants_c123(bump, WeightFunction::antisymmetric_count(beta0));
  // c1 = phi(b)^2 for the count weights.
  CHECK(cnt.c1 == doctest::Approx(kT0 * kT0).epsilon(1e-10));
  CHECK(cnt.c3 == 0.0);
  CHECK(cnt.sum() == doctest::Approx(extrapolated_count).epsilon(2e-4));
}

TEST_CASE("second-order sphere expansion") {
  const Psf bump = Psf::bump(2, 1.0);
  const auto f = WeightFunction::scaled_linear(1.0, kBeta0);
  const auto p = second_order_mean_sphere(bump, f, 2.0);
  CHECK(p.second_order);
  CHECK(p.order1 == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  // Circle of radius 2: S = 4 pi, tr II = 1/2.
  CHECK(p.order2 == doctest::Approx(4.0 * std::numbers::pi * 0.5 * constants_c123(bump, f).sum()).epsilon(1e-10));
  CHECK(mean_curvature_limit(bump, f) == doctest::Approx(1.0 / kScale).epsilon(1e-9));
  CHECK(mean_curvature_limit(bump, WeightFunction::zero()) == 0.0);
  CHECK_THROWS_AS(second_order_mean_sphere(bump, WeightFunction::indicator(0.5, 1.0), 1.0), IncompatibleError);
  CHECK_THROWS_AS(constants_c123(bump, WeightFunction::symmetric_indicator(0.3)), IncompatibleError);
  CHECK_THROWS_AS(constants_c123(Psf::gaussian(2, 1.0), f), IncompatibleError);
}

TEST_CASE("first-order means on boxes use the normal atoms") {
  const Phantom box = Phantom::box(2, {}, {1.0, 0.5, 0});
  const Psf psf = Psf::ball_indicator(2, 0.5);
  const auto est = make_surface_estimator(psf, 0.3, 0.7);
  CHECK(first_order_mean(box.surface_measure(), 2, psf, est.combined()) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(first_order_mean(Phantom::ball(3, {}, 1.0).surface_measure(), 3, Psf::bump(3, 1.0),
                         make_surface_estimator(Psf::bump(3, 1.0), 0.25, 0.75).combined()) ==
        doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-10));
}
