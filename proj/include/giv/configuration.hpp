#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "giv/geometry.hpp"
#include "giv/imaging.hpp"

namespace giv {

/// n x ... x n cells of lattice points. Cell point b has offset
/// (b mod n, (b / n) mod n, b / n^2), axis 0 fastest; bit b of the
/// configuration index l is set when point b is black.
class ConfigurationScheme {
 public:
  ConfigurationScheme(int dim, int n = 2);

  int dim() const { return dim_; }
  int side() const { return n_; }
  int points() const { return points_; }
  std::size_t configurations() const { return std::size_t{1} << points_; }

  /// Offset of cell point b in lattice units.
  Vec offset(int b) const;
  /// Black points B_l and white points W_l in lattice units.
  std::vector<Vec> black(std::size_t l) const;
  std::vector<Vec> white(std::size_t l) const;

 private:
  int dim_;
  int n_;
  int points_;
};

struct Weights {
  int q = 1;
  std::vector<double> values;
  std::string name = "custom";
};

/// Counts N_l over all cells lying entirely inside the image. With
/// `require_margin`, black points closer than n - 1 points to the image
/// border (cells that would be clipped) raise ConfigError.
std::vector<std::uint64_t> count_configurations(const BinaryImage& image, const ConfigurationScheme& scheme,
                                                bool require_margin = false);

/// Least-squares surface-area weights for 2x2 cells in the plane: the
/// first-order mean sum_l w_l (-h(B_l + (-W_l), n))^+ is fitted to 1/2 over
/// the directions. l = 0 and l = 15 get weight 0.
Weights bw_surface_preset_2d();

}  // namespace giv
