#include "giv/configuration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "giv/error.hpp"

namespace giv {

ConfigurationScheme::ConfigurationScheme(int dim, int n) : dim_(dim), n_(n) {
  if (dim != 2 && dim != 3) throw ConfigError("configuration dimension must be 2 or 3");
  if (n < 1) throw ConfigError("cell side must be positive");
  points_ = 1;
  for (int i = 0; i < dim; ++i) points_ *= n;
  if (points_ > 16) throw ConfigError("cells with more than 16 points are not supported");
}

Vec ConfigurationScheme::offset(int b) const {
  Vec v{};
  for (int i = 0; i < dim_; ++i) {
    v[i] = b % n_;
    b /= n_;
  }
  return v;
}

std::vector<Vec> ConfigurationScheme::black(std::size_t l) const {
  std::vector<Vec> out;
  for (int b = 0; b < points_; ++b) {
    if (l >> b & 1) out.push_back(offset(b));
  }
  return out;
}

std::vector<Vec> ConfigurationScheme::white(std::size_t l) const {
  std::vector<Vec> out;
  for (int b = 0; b < points_; ++b) {
    if (!(l >> b & 1)) out.push_back(offset(b));
  }
  return out;
}

std::vector<std::uint64_t> count_configurations(const BinaryImage& image, const ConfigurationScheme& scheme,
                                                bool require_margin) {
  const IndexBox& box = image.box;
  if (box.dim != scheme.dim()) throw ConfigError("image and configuration scheme dimensions differ");
  const int d = box.dim;
  const int n = scheme.side();
  std::vector<std::uint64_t> counts(scheme.configurations(), 0);
  if (require_margin) {
    for (std::size_t i = 0; i < image.bits.size(); ++i) {
      if (!image.bits[i]) continue;
      const auto k = box.coords(i);
      for (int ax = 0; ax < d; ++ax) {
        const auto rel = k[ax] - box.lo[ax];
        if (rel < n - 1 || rel > box.count[ax] - n) {
          throw ConfigError("configuration cells are clipped by the image border; enlarge the window");
        }
      }
    }
  }
  std::array<std::int64_t, 3> cells{1, 1, 1};
  for (int ax = 0; ax < d; ++ax) {
    cells[ax] = box.count[ax] - n + 1;
    if (cells[ax] <= 0) return counts;
  }
  std::vector<std::size_t> stride(static_cast<std::size_t>(scheme.points()));
  for (int b = 0; b < scheme.points(); ++b) {
    const Vec o = scheme.offset(b);
    std::size_t s = 0;
    std::size_t step = 1;
    for (int ax = 0; ax < d; ++ax) {
      s += static_cast<std::size_t>(o[ax]) * step;
      step *= static_cast<std::size_t>(box.count[ax]);
    }
    stride[static_cast<std::size_t>(b)] = s;
  }
  for (std::int64_t z = 0; z < cells[2]; ++z) {
    for (std::int64_t y = 0; y < cells[1]; ++y) {
      std::size_t base = static_cast<std::size_t>((z * box.count[1] + y) * box.count[0]);
      for (std::int64_t x = 0; x < cells[0]; ++x, ++base) {
        std::size_t l = 0;
        for (std::size_t b = 0; b < stride.size(); ++b) l |= static_cast<std::size_t>(image.bits[base + stride[b]]) << b;
        ++counts[l];
      }
    }
  }
  return counts;
}

Weights bw_surface_preset_2d() {
  const ConfigurationScheme scheme(2, 2);
  const int directions = 720;
  const std::size_t m = scheme.configurations();
  Eigen::MatrixXd A(directions, static_cast<Eigen::Index>(m - 2));
  Eigen::VectorXd rhs = Eigen::VectorXd::Constant(directions, 0.5);
  for (int k = 0; k < directions; ++k) {
    const double phi = 2.0 * std::numbers::pi * (k + 0.5) / directions;
    const Vec nrm{std::cos(phi), std::sin(phi), 0.0};
    for (std::size_t l = 1; l + 1 < m; ++l) {
      double h = -1e300;
      for (const Vec& b : scheme.black(l)) {
        for (const Vec& w : scheme.white(l)) h = std::max(h, dot(b - w, nrm));
      }
      A(k, static_cast<Eigen::Index>(l - 1)) = std::max(-h, 0.0);
    }
  }
  const Eigen::VectorXd w = A.completeOrthogonalDecomposition().solve(rhs);
  Weights out;
  out.q = 1;
  out.name = "bw_surface_2x2_least_squares";
  out.values.assign(m, 0.0);
  for (std::size_t l = 1; l + 1 < m; ++l) out.values[l] = w(static_cast<Eigen::Index>(l - 1));
  return out;
}

}  // namespace giv
