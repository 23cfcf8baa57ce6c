#include "giv/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "giv/error.hpp"
#include "giv/parallel.hpp"
#include "giv/serialize.hpp"

namespace giv {

std::size_t BinaryImage::black_count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

Window auto_window(const Phantom& phantom, const Psf& psf, double a, int cell_size) {
  if (!phantom.bounded()) throw ConfigError("an unbounded phantom needs an explicit window");
  const auto [lo, hi] = phantom.bounding_box();
  const double margin = a * (cell_size + psf.truncation_radius()) + a;
  Window w;
  w.dim = phantom.dim();
  for (int i = 0; i < w.dim; ++i) {
    w.lo[i] = lo[i] - margin;
    w.hi[i] = hi[i] + margin;
  }
  return w;
}

GreyImage render(const Phantom& phantom, const Psf& psf, const Lattice& lattice, const Window& window,
                 const RenderOptions& options) {
  if (lattice.dim() != phantom.dim() || window.dim != phantom.dim())
    throw ConfigError("lattice, window and phantom dimensions differ");
  const double a = lattice.spacing();
  if (!options.allow_clipping && phantom.bounded()) {
    const Window need = auto_window(phantom, psf, a, options.cell_size);
    bool ok = true;
    for (int i = 0; i < window.dim; ++i) {
      ok = ok && window.lo[i] <= need.lo[i] + a && window.hi[i] >= need.hi[i] - a;
    }
    if (!ok) {
      std::ostringstream msg;
      msg << "window clips the blurred phantom; required window:";
      for (int i = 0; i < window.dim; ++i) msg << " [" << need.lo[i] + a << ", " << need.hi[i] - a << ")";
      throw ConfigError(msg.str());
    }
  }
  const IntensityEvaluator eval(phantom, psf, a, options.force_quadrature);
  GreyImage img{lattice, window, lattice.index_box(window), {}, Json::object()};
  img.values.assign(img.box.size(), 0.0);
  parallel_for(img.values.size(), options.threads,
               [&](std::size_t i) { img.values[i] = eval(lattice.point(img.box.coords(i))); });
  img.provenance = {{"phantom", to_json(phantom)},
                    {"psf", to_json(psf)},
                    {"intensity_path", to_string(eval.path())}};
  return img;
}

BinaryImage threshold(const GreyImage& image, double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) throw ConfigError("threshold must lie in [0, 1)");
  BinaryImage out{image.lattice, image.window, image.box, {}, beta};
  out.bits.resize(image.values.size());
  std::transform(image.values.begin(), image.values.end(), out.bits.begin(),
                 [&](double v) { return static_cast<std::uint8_t>(v > beta ? 1 : 0); });
  return out;
}

BinaryImage midpoint_binary(const Phantom& phantom, const Lattice& lattice, const Window& window, int threads) {
  BinaryImage out{lattice, window, lattice.index_box(window), {}, std::nullopt};
  out.bits.assign(out.box.size(), 0);
  parallel_for(out.bits.size(), threads, [&](std::size_t i) {
    out.bits[i] = phantom.contains(lattice.point(out.box.coords(i))) ? 1 : 0;
  });
  return out;
}

GreyImage quantize(const GreyImage& image, int k) {
  if (k < 3) throw ConfigError("quantization needs at least 3 bins");
  GreyImage out = image;
  for (double& v : out.values) {
    const int bin = std::clamp(static_cast<int>(std::floor(v * k)), 0, k - 1);
    v = (bin + 0.5) / k;
  }
  out.provenance["quantized_bins"] = k;
  return out;
}

}  // namespace giv
