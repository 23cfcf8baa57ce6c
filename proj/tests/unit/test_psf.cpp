#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>

#include "giv/error.hpp"
#include "giv/psf.hpp"
#include "giv/quadrature.hpp"
#include "oracles.hpp"

using namespace giv;

namespace {

std::vector<Psf> builtins(int dim) {
  return {Psf::ball_indicator(dim, 0.8), Psf::box_indicator(dim, {0.5, 0.3, 0.4}), Psf::gaussian(dim, 0.6),
          Psf::bump(dim, 1.2)};
}

oracle::Density density_for(const Psf& psf) {
  oracle::Density rho;
  rho.dim = psf.dim();
  if (const auto* b = std::get_if<BallIndicator>(&psf.variant())) {
    rho.kind = oracle::Density::Ball;
    rho.r = b->radius;
  } else if (const auto* x = std::get_if<BoxIndicator>(&psf.variant())) {
    rho.kind = oracle::Density::Box;
    rho.h = x->half_widths;
  } else if (const auto* g = std::get_if<Gaussian>(&psf.variant())) {
    rho.kind = oracle::Density::Gauss;
    rho.r = g->sigma;
  } else if (const auto* u = std::get_if<Bump>(&psf.variant())) {
    rho.kind = oracle::Density::Bump;
    rho.r = u->radius;
  }
  return rho;
}

Vec direction(int dim, int k) {
  if (dim == 2) return {std::cos(0.37 * k + 0.1), std::sin(0.37 * k + 0.1), 0.0};
  const double z = -0.9 + 0.2 * k;
  const double r = std::sqrt(1.0 - z * z);
  return {r * std::cos(2.3 * k), r * std::sin(2.3 * k), z};
}

}  // namespace

TEST_CASE("densities have unit mass") {
  for (int dim : {2, 3}) {
    for (const auto& psf : builtins(dim)) {
      const auto rho = density_for(psf);
      const Vec n = direction(dim, 1);
      CHECK(oracle::profile(rho, n, -10.0) == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(psf.density({0.1, 0.05, 0.02}) == doctest::Approx(rho.value({0.1, 0.05, 0.02})).epsilon(1e-12));
    }
  }
}

TEST_CASE("halfspace profile matches nested quadrature") {
  for (int dim : {2, 3}) {
    for (const auto& psf : builtins(dim)) {
      const auto rho = density_for(psf);
      for (int k = 0; k < 3; ++k) {
        const Vec n = direction(dim, k);
        const HalfspaceProfile p(psf, n);
        for (int i = 0; i < 9; ++i) {
          const double t = -1.3 + 2.6 * i / 8.0;
          INFO(psf.kind_name(), " dim ", dim, " t ", t);
          CHECK(p.value(t) == doctest::Approx(oracle::profile(rho, n, t)).epsilon(1e-9).scale(1.0));
        }
      }
    }
  }
}

TEST_CASE("profile closed forms") {
  const Psf g = Psf::gaussian(2, 0.5);
  const HalfspaceProfile pg(g, {1, 0, 0});
  for (double t : {-1.0, -0.2, 0.3, 1.4}) {
    CHECK(pg.value(t) == doctest::Approx(0.5 * std::erfc(t / (0.5 * std::numbers::sqrt2))).epsilon(1e-13));
  }
  // Disk of radius r: area fraction of the circular segment beyond distance t.
  const double r = 0.8;
  const HalfspaceProfile pb(Psf::ball_indicator(2, r), {0.6, 0.8, 0});
  for (double t : {0.0, 0.2, 0.5, 0.79}) {
    const double seg = (r * r * std::acos(t / r) - t * std::sqrt(r * r - t * t)) / (std::numbers::pi * r * r);
    CHECK(pb.value(t) == doctest::Approx(seg).epsilon(1e-13));
  }
  // Axis-aligned box: linear ramp.
  const HalfspaceProfile px(Psf::box_indicator(2, {0.5, 0.3, 0}), {1, 0, 0});
  CHECK(px.value(0.25) == doctest::Approx(0.25));
  CHECK(px.value(-0.6) == 1.0);
  CHECK(px.value(0.6) == 0.0);
}

TEST_CASE("profile properties: monotone, symmetric, derivative") {
  for (int dim : {2, 3}) {
    for (const auto& psf : builtins(dim)) {
      const HalfspaceProfile p(psf, direction(dim, 2));
      CHECK(p.value(0.0) == doctest::Approx(0.5).epsilon(1e-15));
      double prev = 1.0;
      for (int i = 0; i <= 60; ++i) {
        const double t = -1.5 + 3.0 * i / 60.0;
        const double v = p.value(t);
        CHECK(v <= prev + 1e-15);
        CHECK(v + p.value(-t) == doctest::Approx(1.0).epsilon(1e-14));
        prev = v;
      }
      for (double t : {-0.31, 0.07, 0.23}) {
        const double h = 1e-5;
        const double fd = (p.value(t + h) - p.value(t - h)) / (2 * h);
        CHECK(p.derivative(t) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
      }
    }
  }
}

TEST_CASE("phi inverts the profile") {
  for (int dim : {2, 3}) {
    for (const auto& psf : builtins(dim)) {
      const HalfspaceProfile p(psf, direction(dim, 0));
      CHECK(std::abs(p.phi(0.5)) <= 1e-12);
      for (double b : {0.05, 0.3, 0.7, 0.93}) {
        const double t = p.phi(b);
        CHECK(p.value(t) == doctest::Approx(b).epsilon(1e-11));
        CHECK(p.phi(b, LevelConvention::Supremum) == doctest::Approx(t).epsilon(1e-10));
        CHECK(p.phi(b) == doctest::Approx(-p.phi(1.0 - b)).epsilon(1e-10));
      }
      CHECK_THROWS_AS((void)p.phi(0.0), ConfigError);
      CHECK_THROWS_AS((void)p.phi(1.2), ConfigError);
    }
  }
}

TEST_CASE("level crossings at the support ends") {
  const HalfspaceProfile p(Psf::ball_indicator(2, 0.5), {1, 0, 0});
  CHECK(p.level_crossing(0.0, LevelConvention::Infimum) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(p.level_crossing(1.0, LevelConvention::Supremum) == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK(p.is_regular_value(0.3));
}

TEST_CASE("non-unit directions are rejected") {
  CHECK_THROWS_AS(HalfspaceProfile(Psf::bump(2, 1.0), {1, 1, 0}), ConfigError);
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(Psf::gaussian(2, 0.0), ConfigError);
  CHECK_THROWS_AS(Psf::ball_indicator(4, 1.0), ConfigError);
  CHECK_THROWS_AS(Psf::box_indicator(2, {0.5, -1.0, 0}), ConfigError);
}

TEST_CASE("tabulated radial psf renormalizes and matches the bump") {
  std::vector<double> r, v;
  for (int i = 0; i <= 400; ++i) {
    const double x = i / 400.0;
    r.push_back(x);
    v.push_back(3.0 * (1.0 - x * x));
  }
  const Psf tab = Psf::tabulated(2, r, v);
  const Psf bump = Psf::bump(2, 1.0);
  CHECK(tab.radial_density(0.3) == doctest::Approx(bump.radial_density(0.3)).epsilon(1e-4));
  const HalfspaceProfile pt(tab, {1, 0, 0});
  const HalfspaceProfile pb(bump, {1, 0, 0});
  for (double t : {-0.7, -0.2, 0.1, 0.6}) CHECK(pt.value(t) == doctest::Approx(pb.value(t)).epsilon(1e-5));
  CHECK(pt.value(0.0) == doctest::Approx(0.5).epsilon(1e-15));

  const std::string path = "tabulated_psf_test.csv";
  {
    std::ofstream out(path);
    out << "radius,density\n0,1\n1,1\n";
  }
  const Psf loaded = Psf::load_tabulated_csv(2, path);
  const HalfspaceProfile pl(loaded, {1, 0, 0});
  const HalfspaceProfile pd(Psf::ball_indicator(2, 1.0), {1, 0, 0});
  CHECK(pl.value(0.4) == doctest::Approx(pd.value(0.4)).epsilon(1e-9));
  std::remove(path.c_str());
}

TEST_CASE("radial marginals") {
  // Bump in the plane: m(s) = (4 / (3 pi R^4)) ... checked against the line integral of the density.
  for (int dim : {2, 3}) {
    for (const auto& psf : {Psf::bump(dim, 1.1), Psf::gaussian(dim, 0.4), Psf::ball_indicator(dim, 0.7)}) {
      const auto rho = density_for(psf);
      for (double s : {0.0, 0.2, 0.5}) {
        CHECK(psf.radial_marginal(s) ==
              doctest::Approx(oracle::marginal(rho, {1, 0, 0}, s)).epsilon(1e-9).scale(1.0));
      }
    }
  }
}
