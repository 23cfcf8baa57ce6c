#pragma once

#include <string>
#include <utility>
#include <vector>

namespace giv {

/// Linear on the open interval (x0, x1), from y0 at x0+ to y1 at x1-.
struct LinearPiece {
  double x0 = 0.0;
  double x1 = 1.0;
  double y0 = 0.0;
  double y1 = 0.0;
};

struct Jump {
  double x = 0.0;
  double left = 0.0;   // f(x-)
  double right = 0.0;  // f(x+)
  double value = 0.0;  // f(x)
};

/// Grey-value weighting f: [0, 1] -> R, piecewise linear with explicit
/// values at the breakpoints. f(0) = 0 always.
class WeightFunction {
 public:
  enum class Kind { Zero, Indicator, SymmetricIndicator, ScaledLinear, AntisymmetricCount, Table };

  WeightFunction();

  static WeightFunction zero() { return {}; }
  /// 1 on (beta, omega) with the end points included as requested; the
  /// default is (beta, omega].
  static WeightFunction indicator(double beta, double omega, bool closed_left = false, bool closed_right = true);
  /// 1 on (beta, 1 - beta).
  static WeightFunction symmetric_indicator(double beta);
  /// scale * (x - 1/2) on (beta0, 1 - beta0).
  static WeightFunction scaled_linear(double scale, double beta0);
  /// 1 on (beta, 1/2), -1 on (1/2, 1 - beta).
  static WeightFunction antisymmetric_count(double beta);
  /// Pieces must not overlap; uncovered parts are 0. Breakpoints without an
  /// explicit value take the left limit.
  static WeightFunction table(const std::vector<LinearPiece>& pieces,
                              const std::vector<std::pair<double, double>>& points = {});

  double operator()(double x) const;
  double left_limit(double x) const;
  double right_limit(double x) const;
  /// Slope at x (right derivative at breakpoints).
  double derivative(double x) const;

  Kind kind() const { return kind_; }
  std::string kind_name() const;
  /// Parameters of the named variants: beta, omega (or 1 - beta), scale.
  double beta() const { return beta_; }
  double omega() const { return omega_; }
  double scale() const { return scale_; }
  bool closed_left() const { return closed_left_; }
  bool closed_right() const { return closed_right_; }

  /// Breakpoints 0 = b_0 < ... < b_m = 1.
  const std::vector<double>& breakpoints() const { return breaks_; }
  std::vector<LinearPiece> pieces() const;
  std::vector<std::pair<double, double>> point_values() const;
  /// Breakpoints in (0, 1) where f is not continuous.
  std::vector<Jump> jumps() const;

  bool is_zero() const;
  /// Piecewise constant (all slopes 0).
  bool piecewise_constant() const;
  /// inf and sup of {x : f(x) != 0}; (1, 0) for f == 0.
  std::pair<double, double> support() const;

  WeightFunction scaled(double factor) const;
  /// x -> f(1 - x).
  WeightFunction reflected() const;
  WeightFunction plus(const WeightFunction& other) const;

 private:
  std::size_t locate(double x) const;  // piece index with b_i <= x < b_{i+1}
  void validate() const;

  Kind kind_ = Kind::Zero;
  double beta_ = 0.0;
  double omega_ = 1.0;
  double scale_ = 1.0;
  bool closed_left_ = false;
  bool closed_right_ = false;

  std::vector<double> breaks_;
  std::vector<double> y0_;  // per piece
  std::vector<double> y1_;
  std::vector<double> point_;  // per breakpoint
};

/// Agreement of values, one-sided limits and slopes at all breakpoints.
bool approx_equal(const WeightFunction& f, const WeightFunction& g, double tol = 1e-12);

}  // namespace giv
