#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "giv/geometry.hpp"

namespace giv {

/// Axis-aligned half-open box [lo, hi) in dimension d.
struct Window {
  int dim = 2;
  Vec lo{};
  Vec hi{};

  bool contains(const Vec& x) const;
  bool bounded() const;
  double volume() const;
};

/// Box of integer lattice coordinates; axis 0 varies fastest in linear order.
struct IndexBox {
  int dim = 2;
  std::array<std::int64_t, 3> lo{0, 0, 0};
  std::array<std::int64_t, 3> count{0, 1, 1};

  std::size_t size() const;
  std::size_t linear(const std::array<std::int64_t, 3>& k) const;
  std::array<std::int64_t, 3> coords(std::size_t linear) const;
};

/// Deterministic uniform stream derived from a master seed and stream ids.
/// Draws are platform independent (raw 64-bit outputs mapped to [0, 1)).
class SeedStream {
 public:
  SeedStream(std::uint64_t master, std::uint64_t stream_a, std::uint64_t stream_b = 0);
  double uniform();

 private:
  std::mt19937_64 engine_;
};

/// The observation lattice a*Lambda + c.
class Lattice {
 public:
  /// Basis columns v_1..v_d; |det| must be 1.
  Lattice(int dim, const std::array<Vec, 3>& basis, double spacing, const Vec& offset = {});
  static Lattice identity(int dim, double spacing, const Vec& offset = {});

  int dim() const { return dim_; }
  double spacing() const { return spacing_; }
  const Vec& offset() const { return offset_; }
  const std::array<Vec, 3>& basis() const { return basis_; }
  bool is_identity() const;

  Lattice with_offset(const Vec& offset) const;

  Vec point(const std::array<std::int64_t, 3>& k) const;

  /// Smallest index box containing every lattice point of the window.
  /// For the identity basis it contains exactly those points.
  IndexBox index_box(const Window& window) const;

  /// The lattice points inside the window, ordered lexicographically in the
  /// integer coordinates with the last axis most significant.
  std::vector<Vec> enumerate_points(const Window& window) const;

  /// Uniform point of the half-open cell spacing * C_v.
  Vec random_offset(SeedStream& stream) const;

 private:
  int dim_;
  std::array<Vec, 3> basis_;
  std::array<Vec, 3> inverse_;
  double spacing_;
  Vec offset_;
};

}  // namespace giv
