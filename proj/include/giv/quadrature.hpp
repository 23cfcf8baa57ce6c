#pragma once

#include <functional>
#include <span>
#include <vector>

namespace giv::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  bool converged = true;
};

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  int max_intervals = 2000;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature on [lo, hi].
/// Interior `breaks` (discontinuities or kinks of the integrand) start the
/// subdivision; breaks outside (lo, hi) are ignored.
Result integrate(const Integrand& f, double lo, double hi, const Options& opts = {},
                 std::span<const double> breaks = {});

/// Convenience wrapper returning only the value.
double integral(const Integrand& f, double lo, double hi, double abs_tol = 1e-10,
                std::span<const double> breaks = {});

/// Gauss-Legendre rule with n nodes on [-1, 1]; cached per n.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int n);

}  // namespace giv::quad
