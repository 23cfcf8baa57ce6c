#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <iterator>

#include "giv/error.hpp"
#include "giv/image_io.hpp"
#include "giv/imaging.hpp"

using namespace giv;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("render covers the window and matches pointwise intensities") {
  const Phantom disk = Phantom::ball(2, {0.05, 0, 0}, 0.5);
  const Psf psf = Psf::ball_indicator(2, 0.5);
  const double a = 0.05;
  const Lattice lat = Lattice::identity(2, a, {0.013, 0.027, 0});
  const Window w = auto_window(disk, psf, a);
  const GreyImage img = render(disk, psf, lat, w);
  CHECK(img.values.size() == lat.enumerate_points(w).size());
  const IntensityEvaluator eval(disk, psf, a);
  for (std::size_t i = 0; i < img.values.size(); i += 37) {
    CHECK(img.values[i] == eval(lat.point(img.box.coords(i))));
  }
  CHECK(img.provenance.at("intensity_path") == "ball_intersection");
  const GreyImage threaded = render(disk, psf, lat, w, {4, 2, false, false});
  CHECK(threaded.values == img.values);
}

TEST_CASE("windows that clip the blurred phantom are rejected") {
  const Phantom disk = Phantom::ball(2, {}, 0.5);
  const Psf psf = Psf::bump(2, 1.0);
  const Window small{2, {-0.5, -0.5, 0}, {0.5, 0.5, 0}};
  CHECK_THROWS_AS(render(disk, psf, Lattice::identity(2, 0.1), small), ConfigError);
  RenderOptions opts;
  opts.allow_clipping = true;
  CHECK_NOTHROW(render(disk, psf, Lattice::identity(2, 0.1), small, opts));
}

TEST_CASE("thresholding is strict and quantization uses bin midpoints") {
  GreyImage img;
  img.lattice = Lattice::identity(2, 1.0);
  img.box = IndexBox{2, {0, 0, 0}, {4, 1, 1}};
  img.window = Window{2, {0, 0, 0}, {4, 1, 0}};
  img.values = {0.0, 0.3, 0.5, 1.0};
  const BinaryImage b = threshold(img, 0.3);
  CHECK(b.bits == std::vector<std::uint8_t>{0, 0, 1, 1});
  CHECK(b.black_count() == 2);
  CHECK(*b.threshold == 0.3);
  CHECK_THROWS_AS(threshold(img, 1.0), ConfigError);
  const GreyImage q = quantize(img, 4);
  CHECK(q.values == std::vector<double>{0.125, 0.375, 0.625, 0.875});
  CHECK_THROWS_AS(quantize(img, 2), ConfigError);
}

TEST_CASE("midpoint discretization marks lattice points in the set") {
  const Phantom box = Phantom::box(2, {}, {0.5, 0.25, 0});
  const Lattice lat = Lattice::identity(2, 0.1, {0.05, 0.05, 0});
  const Window w{2, {-1, -1, 0}, {1, 1, 0}};
  const BinaryImage b = midpoint_binary(box, lat, w);
  CHECK(b.black_count() == 10 * 5);
  CHECK_FALSE(b.threshold.has_value());
}

TEST_CASE("image files round-trip exactly") {
  const Phantom ball = Phantom::ball(3, {}, 0.3);
  const Psf psf = Psf::gaussian(3, 0.5);
  const double a = 0.1;
  const GreyImage img = render(ball, psf, Lattice::identity(3, a, {0.01, 0.02, 0.03}), auto_window(ball, psf, a));
  const std::string path = "roundtrip_test.giv";
  write_image(path, img);
  const GreyImage back = read_image(path);
  CHECK(back.values == img.values);
  CHECK(back.box.count == img.box.count);
  CHECK(back.box.lo == img.box.lo);
  CHECK(back.lattice.offset() == img.lattice.offset());
  CHECK(back.lattice.spacing() == img.lattice.spacing());
  write_image("roundtrip_test2.giv", back);
  CHECK(slurp(path) == slurp("roundtrip_test2.giv"));
  CHECK(slurp(path).rfind("GIVIMG1\n", 0) == 0);
  write_pgm("roundtrip_test.pgm", img);
  CHECK(slurp("roundtrip_test.pgm").rfind("P5", 0) == 0);
  std::remove(path.c_str());
  std::remove("roundtrip_test2.giv");
  std::remove("roundtrip_test.pgm");
  CHECK_THROWS_AS(read_image("does_not_exist.giv"), ConfigError);
}
