#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"

#include "giv/lattice.hpp"
#include "giv/phantom.hpp"
#include "giv/psf.hpp"

namespace giv {

/// Grey values theta_a^X on the lattice points of an index box. For the
/// identity basis the box holds exactly the lattice points of the window.
struct GreyImage {
  Lattice lattice = Lattice::identity(2, 1.0);
  Window window;
  IndexBox box;
  std::vector<double> values;
  nlohmann::json provenance = nlohmann::json::object();

  double at(const std::array<std::int64_t, 3>& k) const { return values[box.linear(k)]; }
};

/// Black (1) / white (0) lattice points. `threshold` is empty for the
/// midpoint (black iff the lattice point lies in X) discretization.
struct BinaryImage {
  Lattice lattice = Lattice::identity(2, 1.0);
  Window window;
  IndexBox box;
  std::vector<std::uint8_t> bits;
  std::optional<double> threshold;

  std::size_t black_count() const;
};

struct RenderOptions {
  int threads = 1;
  /// Cell side n of the estimators to be applied; sets the required margin.
  int cell_size = 2;
  /// Skip the window-size check (e.g. for partial views).
  bool allow_clipping = false;
  bool force_quadrature = false;
};

/// Bounding box of the phantom dilated by a * (cell_size + truncation radius)
/// plus one spacing.
Window auto_window(const Phantom& phantom, const Psf& psf, double a, int cell_size = 2);

/// Renders theta_a^X on aLambda + c restricted to the window.
GreyImage render(const Phantom& phantom, const Psf& psf, const Lattice& lattice, const Window& window,
                 const RenderOptions& options = {});

BinaryImage threshold(const GreyImage& image, double beta);
BinaryImage midpoint_binary(const Phantom& phantom, const Lattice& lattice, const Window& window, int threads = 1);
/// Maps values to the midpoints of k equal bins of [0, 1].
GreyImage quantize(const GreyImage& image, int k);

}  // namespace giv
