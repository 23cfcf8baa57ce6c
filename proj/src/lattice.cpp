#include "giv/lattice.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "giv/error.hpp"

namespace giv {

bool Window::contains(const Vec& x) const {
  for (int i = 0; i < dim; ++i) {
    if (!(x[i] >= lo[i] && x[i] < hi[i])) return false;
  }
  return true;
}

bool Window::bounded() const {
  for (int i = 0; i < dim; ++i) {
    if (!std::isfinite(lo[i]) || !std::isfinite(hi[i])) return false;
  }
  return true;
}

double Window::volume() const {
  double v = 1.0;
  for (int i = 0; i < dim; ++i) v *= std::max(0.0, hi[i] - lo[i]);
  return v;
}

std::size_t IndexBox::size() const {
  std::size_t n = 1;
  for (int i = 0; i < dim; ++i) n *= static_cast<std::size_t>(std::max<std::int64_t>(count[i], 0));
  return n;
}

std::size_t IndexBox::linear(const std::array<std::int64_t, 3>& k) const {
  std::size_t idx = 0;
  for (int i = dim - 1; i >= 0; --i) idx = idx * count[i] + static_cast<std::size_t>(k[i] - lo[i]);
  return idx;
}

std::array<std::int64_t, 3> IndexBox::coords(std::size_t linear) const {
  std::array<std::int64_t, 3> k{0, 0, 0};
  for (int i = 0; i < dim; ++i) {
    k[i] = lo[i] + static_cast<std::int64_t>(linear % count[i]);
    linear /= count[i];
  }
  return k;
}

SeedStream::SeedStream(std::uint64_t master, std::uint64_t stream_a, std::uint64_t stream_b) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(stream_a), static_cast<std::uint32_t>(stream_a >> 32),
                    static_cast<std::uint32_t>(stream_b), static_cast<std::uint32_t>(stream_b >> 32)};
  engine_.seed(seq);
}

double SeedStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

namespace {

double det3(const std::array<Vec, 3>& m, int dim) {
  if (dim == 2) return m[0][0] * m[1][1] - m[1][0] * m[0][1];
  return m[0][0] * (m[1][1] * m[2][2] - m[2][1] * m[1][2]) - m[1][0] * (m[0][1] * m[2][2] - m[2][1] * m[0][2]) +
         m[2][0] * (m[0][1] * m[1][2] - m[1][1] * m[0][2]);
}

// Columns of the inverse of the column-basis matrix.
std::array<Vec, 3> invert(const std::array<Vec, 3>& m, int dim) {
  const double det = det3(m, dim);
  std::array<Vec, 3> inv{};
  if (dim == 2) {
    // m = [[m00 m10],[m01 m11]] in row form; m[j][i] is row i of column j.
    inv[0] = {m[1][1] / det, -m[0][1] / det, 0.0};
    inv[1] = {-m[1][0] / det, m[0][0] / det, 0.0};
    return inv;
  }
  auto a = [&](int r, int c) { return m[c][r]; };
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      const int r1 = (c + 1) % 3, r2 = (c + 2) % 3;
      const int c1 = (r + 1) % 3, c2 = (r + 2) % 3;
      inv[c][r] = (a(r1, c1) * a(r2, c2) - a(r1, c2) * a(r2, c1)) / det;
    }
  }
  return inv;
}

}  // namespace

Lattice::Lattice(int dim, const std::array<Vec, 3>& basis, double spacing, const Vec& offset)
    : dim_(dim), basis_(basis), spacing_(spacing), offset_(offset) {
  if (dim != 2 && dim != 3) throw ConfigError("lattice dimension must be 2 or 3");
  if (!(spacing > 0.0)) throw ConfigError("lattice spacing must be positive");
  if (std::abs(std::abs(det3(basis_, dim_)) - 1.0) > 1e-12) {
    throw ConfigError("lattice basis must have unit determinant");
  }
  inverse_ = invert(basis_, dim_);
}

Lattice Lattice::identity(int dim, double spacing, const Vec& offset) {
  return Lattice(dim, {Vec{1, 0, 0}, Vec{0, 1, 0}, Vec{0, 0, 1}}, spacing, offset);
}

bool Lattice::is_identity() const {
  for (int j = 0; j < dim_; ++j) {
    for (int i = 0; i < dim_; ++i) {
      if (basis_[j][i] != (i == j ? 1.0 : 0.0)) return false;
    }
  }
  return true;
}

Lattice Lattice::with_offset(const Vec& offset) const {
  Lattice copy = *this;
  copy.offset_ = offset;
  return copy;
}

Vec Lattice::point(const std::array<std::int64_t, 3>& k) const {
  Vec p = offset_;
  for (int j = 0; j < dim_; ++j) {
    for (int i = 0; i < dim_; ++i) p[i] += spacing_ * basis_[j][i] * static_cast<double>(k[j]);
  }
  return p;
}

IndexBox Lattice::index_box(const Window& window) const {
  if (!window.bounded()) throw ConfigError("window must be bounded");
  IndexBox box;
  box.dim = dim_;
  if (is_identity()) {
    for (int i = 0; i < dim_; ++i) {
      const auto first = static_cast<std::int64_t>(std::ceil((window.lo[i] - offset_[i]) / spacing_));
      const auto past = static_cast<std::int64_t>(std::ceil((window.hi[i] - offset_[i]) / spacing_));
      box.lo[i] = first;
      box.count[i] = std::max<std::int64_t>(past - first, 0);
    }
    // Guard against rounding in the ceil computations.
    for (int i = 0; i < dim_; ++i) {
      while (box.count[i] > 0 && offset_[i] + spacing_ * box.lo[i] < window.lo[i]) {
        ++box.lo[i];
        --box.count[i];
      }
      while (box.count[i] > 0 && offset_[i] + spacing_ * (box.lo[i] + box.count[i] - 1) >= window.hi[i]) {
        --box.count[i];
      }
    }
    return box;
  }
  std::array<double, 3> kmin{}, kmax{};
  kmin.fill(std::numeric_limits<double>::infinity());
  kmax.fill(-std::numeric_limits<double>::infinity());
  const int corners = 1 << dim_;
  for (int c = 0; c < corners; ++c) {
    Vec x{};
    for (int i = 0; i < dim_; ++i) x[i] = ((c >> i) & 1 ? window.hi[i] : window.lo[i]) - offset_[i];
    for (int j = 0; j < dim_; ++j) {
      double kj = 0.0;
      for (int i = 0; i < dim_; ++i) kj += inverse_[i][j] * x[i];
      kj /= spacing_;
      kmin[j] = std::min(kmin[j], kj);
      kmax[j] = std::max(kmax[j], kj);
    }
  }
  for (int j = 0; j < dim_; ++j) {
    box.lo[j] = static_cast<std::int64_t>(std::floor(kmin[j]));
    box.count[j] = static_cast<std::int64_t>(std::ceil(kmax[j])) - box.lo[j] + 1;
  }
  return box;
}

std::vector<Vec> Lattice::enumerate_points(const Window& window) const {
  const IndexBox box = index_box(window);
  std::vector<Vec> out;
  const std::size_t n = box.size();
  for (std::size_t idx = 0; idx < n; ++idx) {
    const Vec p = point(box.coords(idx));
    if (window.contains(p)) out.push_back(p);
  }
  return out;
}

Vec Lattice::random_offset(SeedStream& stream) const {
  std::array<double, 3> u{};
  for (int j = 0; j < dim_; ++j) u[j] = stream.uniform();
  Vec c{};
  for (int j = 0; j < dim_; ++j) {
    for (int i = 0; i < dim_; ++i) c[i] += spacing_ * basis_[j][i] * u[j];
  }
  return c;
}

}  // namespace giv
