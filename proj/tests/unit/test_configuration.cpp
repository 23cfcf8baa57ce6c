#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "giv/configuration.hpp"
#include "giv/error.hpp"
#include "giv/imaging.hpp"
#include "giv/theory.hpp"

using namespace giv;

namespace {

BinaryImage image_from(int nx, int ny, const std::vector<std::uint8_t>& bits) {
  BinaryImage b;
  b.lattice = Lattice::identity(2, 1.0);
  b.box = IndexBox{2, {0, 0, 0}, {nx, ny, 1}};
  b.window = Window{2, {0, 0, 0}, {double(nx), double(ny), 0}};
  b.bits = bits;
  return b;
}

}  // namespace

TEST_CASE("configuration bit order") {
  const ConfigurationScheme s(2, 2);
  CHECK(s.configurations() == 16);
  CHECK(s.offset(1) == Vec{1, 0, 0});
  CHECK(s.offset(2) == Vec{0, 1, 0});
  CHECK(s.black(5).size() == 2);
  CHECK(s.white(5).size() == 2);
  const ConfigurationScheme t(3, 2);
  CHECK(t.offset(4) == Vec{0, 0, 1});
  CHECK_THROWS_AS(ConfigurationScheme(3, 3), ConfigError);
}

TEST_CASE("counting 2x2 configurations by brute force") {
  // 4 x 3 image, axis 0 fastest.
  const std::vector<std::uint8_t> bits{0, 1, 1, 0,  //
                                       1, 1, 0, 0,  //
                                       0, 1, 0, 1};
  const auto img = image_from(4, 3, bits);
  const auto counts = count_configurations(img, ConfigurationScheme(2, 2));
  std::vector<std::uint64_t> brute(16, 0);
  for (int y = 0; y + 1 < 3; ++y) {
    for (int x = 0; x + 1 < 4; ++x) {
      const int l = bits[y * 4 + x] | bits[y * 4 + x + 1] << 1 | bits[(y + 1) * 4 + x] << 2 |
                    bits[(y + 1) * 4 + x + 1] << 3;
      ++brute[l];
    }
  }
  CHECK(counts == brute);
  CHECK(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}) == 6);
  CHECK_THROWS_AS(count_configurations(img, ConfigurationScheme(2, 2), true), ConfigError);
}

TEST_CASE("single-corner direction term") {
  // Configuration with only point (1,1) black: (-h(B + (-W), n))^+ is the
  // positive part of -max over white w of <b - w, n>.
  const ConfigurationScheme s(2, 2);
  Weights w;
  w.values.assign(16, 0.0);
  w.values[8] = 1.0;
  const Vec n = normalized({-1.0, -1.0, 0.0});
  CHECK(bw_direction_term(s, w, n) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(bw_direction_term(s, w, normalized({1.0, 0.3, 0})) == 0.0);
  // Integrated over the circle: 4 arcs contribute; closed form 2 (1 - 1/sqrt 2) * ... per unit mass.
  const double total = sphere_integral(2, [&](const Vec& v) { return bw_direction_term(s, w, v); });
  CHECK(total == doctest::Approx(2.0 * (1.0 - 1.0 / std::numbers::sqrt2)).epsilon(1e-10));
}

TEST_CASE("least-squares surface weights are nearly unbiased") {
  const Weights w = bw_surface_preset_2d();
  CHECK(w.q == 1);
  CHECK(w.values.size() == 16);
  CHECK(w.values[0] == 0.0);
  CHECK(w.values[15] == 0.0);
  const ConfigurationScheme s(2, 2);
  double worst = 0.0;
  for (int k = 0; k < 90; ++k) {
    const double t = 2.0 * std::numbers::pi * k / 90.0;
    worst = std::max(worst, std::abs(bw_direction_term(s, w, {std::cos(t), std::sin(t), 0}) - 0.5));
  }
  CHECK(worst < 0.05);
  // Disk of radius 1: first-order mean close to the half perimeter.
  const double m = bw_first_order_mean(Phantom::ball(2, {}, 1.0).surface_measure(), 2, s, w);
  CHECK(m == doctest::Approx(std::numbers::pi).epsilon(0.02));
}
