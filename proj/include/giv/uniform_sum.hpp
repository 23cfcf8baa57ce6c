#pragma once

#include <vector>

namespace giv {

/// Distribution of X_1 + ... + X_k with independent X_i ~ U[0, w_i].
///
/// Evaluated by the recursion F_k(x) = w_k^{-1} \int_{x-w_k}^{x} F_{k-1}(u) du
/// with the widths sorted in decreasing order. Each step integrates a
/// piecewise polynomial exactly (Gauss-Legendre between the breakpoints of
/// F_{k-1}), so the result is the exact piecewise-polynomial CDF without the
/// cancellation of the inclusion-exclusion formula when some w_i are tiny.
class UniformSum {
 public:
  /// Zero widths are dropped; negative widths are taken by absolute value.
  explicit UniformSum(std::vector<double> widths);

  double total_width() const { return total_; }
  int terms() const { return static_cast<int>(widths_.size()); }

  double cdf(double x) const;
  /// Right-continuous density.
  double pdf(double x) const;

 private:
  double cdf_level(int k, double x) const;
  double pdf_level(int k, double x) const;
  template <typename F>
  double average_over(int k, double x, F&& lower) const;

  std::vector<double> widths_;
  std::vector<std::vector<double>> breaks_;  // breakpoints of level k (subset sums)
  std::vector<double> partial_totals_;
  double total_ = 0.0;
};

}  // namespace giv
