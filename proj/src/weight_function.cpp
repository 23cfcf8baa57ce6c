#include "giv/weight_function.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "giv/error.hpp"

namespace giv {

namespace {

constexpr double kSnap = 1e-12;

// Sorted breakpoints with near-duplicates (from 1 - (1 - x) round-off) merged.
std::vector<double> merge_breaks(const std::set<double>& xs) {
  std::vector<double> out;
  for (double x : xs) {
    if (out.empty() || x - out.back() > kSnap) out.push_back(x);
  }
  if (out.back() != 1.0 && 1.0 - out.back() <= kSnap) out.back() = 1.0;
  return out;
}

}  // namespace

WeightFunction::WeightFunction() : breaks_{0.0, 1.0}, y0_{0.0}, y1_{0.0}, point_{0.0, 0.0} {}

WeightFunction WeightFunction::indicator(double beta, double omega, bool closed_left, bool closed_right) {
  if (!(beta >= 0.0 && beta < omega && omega <= 1.0)) throw ConfigError("indicator needs 0 <= beta < omega <= 1");
  if (beta == 0.0 && closed_left) throw ConfigError("weight functions must vanish at 0");
  std::vector<std::pair<double, double>> points{{beta, closed_left ? 1.0 : 0.0}, {omega, closed_right ? 1.0 : 0.0}};
  WeightFunction f = table({{beta, omega, 1.0, 1.0}}, points);
  f.kind_ = Kind::Indicator;
  f.beta_ = beta;
  f.omega_ = omega;
  f.closed_left_ = closed_left;
  f.closed_right_ = closed_right;
  return f;
}

WeightFunction WeightFunction::symmetric_indicator(double beta) {
  if (!(beta > 0.0 && beta < 0.5)) throw ConfigError("symmetric indicator needs beta in (0, 1/2)");
  WeightFunction f = table({{beta, 1.0 - beta, 1.0, 1.0}}, {{beta, 0.0}, {1.0 - beta, 0.0}});
  f.kind_ = Kind::SymmetricIndicator;
  f.beta_ = beta;
  f.omega_ = 1.0 - beta;
  return f;
}

WeightFunction WeightFunction::scaled_linear(double scale, double beta0) {
  if (!(beta0 >= 0.0 && beta0 < 0.5)) throw ConfigError("scaled linear weight needs beta0 in [0, 1/2)");
  if (!std::isfinite(scale)) throw ConfigError("scale must be finite");
  WeightFunction f = table({{beta0, 1.0 - beta0, scale * (beta0 - 0.5), scale * (0.5 - beta0)}},
                           {{beta0, 0.0}, {1.0 - beta0, 0.0}});
  f.kind_ = Kind::ScaledLinear;
  f.beta_ = beta0;
  f.omega_ = 1.0 - beta0;
  f.scale_ = scale;
  return f;
}

WeightFunction WeightFunction::antisymmetric_count(double beta) {
  if (!(beta > 0.0 && beta < 0.5)) throw ConfigError("antisymmetric count needs beta in (0, 1/2)");
  WeightFunction f = table({{beta, 0.5, 1.0, 1.0}, {0.5, 1.0 - beta, -1.0, -1.0}},
                           {{beta, 0.0}, {0.5, 0.0}, {1.0 - beta, 0.0}});
  f.kind_ = Kind::AntisymmetricCount;
  f.beta_ = beta;
  f.omega_ = 1.0 - beta;
  return f;
}

WeightFunction WeightFunction::table(const std::vector<LinearPiece>& pieces,
                                     const std::vector<std::pair<double, double>>& points) {
  std::set<double> xs{0.0, 1.0};
  for (const auto& p : pieces) {
    if (!(p.x0 >= 0.0 && p.x0 < p.x1 && p.x1 <= 1.0)) throw ConfigError("table piece must satisfy 0 <= x0 < x1 <= 1");
    if (!std::isfinite(p.y0) || !std::isfinite(p.y1)) throw ConfigError("table values must be finite");
    xs.insert(p.x0);
    xs.insert(p.x1);
  }
  for (const auto& [x, y] : points) {
    if (!(x >= 0.0 && x <= 1.0) || !std::isfinite(y)) throw ConfigError("table point must lie in [0, 1]");
    xs.insert(x);
  }
  WeightFunction f;
  f.kind_ = Kind::Table;
  f.breaks_ = merge_breaks(xs);
  const std::size_t m = f.breaks_.size() - 1;
  f.y0_.assign(m, 0.0);
  f.y1_.assign(m, 0.0);
  std::vector<int> covered(m, 0);
  for (const auto& p : pieces) {
    for (std::size_t i = 0; i < m; ++i) {
      const double u = f.breaks_[i];
      const double v = f.breaks_[i + 1];
      if (u >= p.x0 - kSnap && v <= p.x1 + kSnap) {
        if (++covered[i] > 1) throw ConfigError("table pieces overlap");
        const double slope = (p.y1 - p.y0) / (p.x1 - p.x0);
        f.y0_[i] = p.y0 + slope * (u - p.x0);
        f.y1_[i] = p.y0 + slope * (v - p.x0);
      }
    }
  }
  f.point_.assign(m + 1, 0.0);
  for (std::size_t i = 1; i <= m; ++i) f.point_[i] = f.y1_[i - 1];
  for (const auto& [x, y] : points) {
    const auto it = std::lower_bound(f.breaks_.begin(), f.breaks_.end(), x - kSnap);
    f.point_[static_cast<std::size_t>(it - f.breaks_.begin())] = y;
  }
  f.validate();
  return f;
}

void WeightFunction::validate() const {
  if (point_.front() != 0.0) throw ConfigError("weight functions must vanish at 0");
}

std::size_t WeightFunction::locate(double x) const {
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  const auto i = static_cast<std::size_t>(it - breaks_.begin());
  return std::min(i == 0 ? 0 : i - 1, y0_.size() - 1);
}

double WeightFunction::operator()(double x) const {
  if (x <= 0.0) return x == 0.0 ? point_.front() : 0.0;
  if (x >= 1.0) return x == 1.0 ? point_.back() : 0.0;
  const std::size_t i = locate(x);
  if (x == breaks_[i]) return point_[i];
  const double u = breaks_[i];
  const double v = breaks_[i + 1];
  return y0_[i] + (y1_[i] - y0_[i]) * (x - u) / (v - u);
}

double WeightFunction::left_limit(double x) const {
  if (x <= 0.0) return 0.0;
  const auto it = std::lower_bound(breaks_.begin(), breaks_.end(), x - kSnap);
  const auto k = static_cast<std::size_t>(it - breaks_.begin());
  if (k < breaks_.size() && std::abs(breaks_[k] - x) <= kSnap) return k == 0 ? 0.0 : y1_[k - 1];
  return (*this)(x);
}

double WeightFunction::right_limit(double x) const {
  if (x >= 1.0) return 0.0;
  const auto it = std::lower_bound(breaks_.begin(), breaks_.end(), x - kSnap);
  const auto k = static_cast<std::size_t>(it - breaks_.begin());
  if (k < breaks_.size() && std::abs(breaks_[k] - x) <= kSnap) return k < y0_.size() ? y0_[k] : 0.0;
  return (*this)(x);
}

double WeightFunction::derivative(double x) const {
  if (x < 0.0 || x >= 1.0) return 0.0;
  const std::size_t i = locate(x);
  return (y1_[i] - y0_[i]) / (breaks_[i + 1] - breaks_[i]);
}

std::string WeightFunction::kind_name() const {
  switch (kind_) {
    case Kind::Zero: return "zero";
    case Kind::Indicator: return "indicator";
    case Kind::SymmetricIndicator: return "symmetric_indicator";
    case Kind::ScaledLinear: return "scaled_linear";
    case Kind::AntisymmetricCount: return "antisymmetric_count";
    case Kind::Table: return "table";
  }
  return "table";
}

std::vector<LinearPiece> WeightFunction::pieces() const {
  std::vector<LinearPiece> out;
  for (std::size_t i = 0; i < y0_.size(); ++i) out.push_back({breaks_[i], breaks_[i + 1], y0_[i], y1_[i]});
  return out;
}

std::vector<std::pair<double, double>> WeightFunction::point_values() const {
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < breaks_.size(); ++i) out.emplace_back(breaks_[i], point_[i]);
  return out;
}

std::vector<Jump> WeightFunction::jumps() const {
  std::vector<Jump> out;
  for (std::size_t i = 1; i + 1 < breaks_.size(); ++i) {
    const double l = y1_[i - 1];
    const double r = y0_[i];
    if (l != r) out.push_back({breaks_[i], l, r, point_[i]});
  }
  return out;
}

bool WeightFunction::is_zero() const {
  auto nz = [](double v) { return v != 0.0; };
  return std::none_of(y0_.begin(), y0_.end(), nz) && std::none_of(y1_.begin(), y1_.end(), nz) &&
         std::none_of(point_.begin(), point_.end(), nz);
}

bool WeightFunction::piecewise_constant() const {
  for (std::size_t i = 0; i < y0_.size(); ++i) {
    if (y0_[i] != y1_[i]) return false;
  }
  return true;
}

std::pair<double, double> WeightFunction::support() const {
  double lo = 1.0;
  double hi = 0.0;
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    if (point_[i] != 0.0) {
      lo = std::min(lo, breaks_[i]);
      hi = std::max(hi, breaks_[i]);
    }
  }
  for (std::size_t i = 0; i < y0_.size(); ++i) {
    if (y0_[i] != 0.0 || y1_[i] != 0.0) {
      lo = std::min(lo, breaks_[i]);
      hi = std::max(hi, breaks_[i + 1]);
    }
  }
  return {lo, hi};
}

WeightFunction WeightFunction::scaled(double factor) const {
  WeightFunction f = *this;
  for (auto& v : f.y0_) v *= factor;
  for (auto& v : f.y1_) v *= factor;
  for (auto& v : f.point_) v *= factor;
  if (kind_ == Kind::ScaledLinear) {
    f.scale_ *= factor;
  } else if (kind_ != Kind::Zero) {
    f.kind_ = Kind::Table;
  }
  return f;
}

WeightFunction WeightFunction::reflected() const {
  if (point_.back() != 0.0) throw ConfigError("reflection needs f(1) = 0");
  std::vector<LinearPiece> ps;
  for (std::size_t i = 0; i < y0_.size(); ++i) ps.push_back({1.0 - breaks_[i + 1], 1.0 - breaks_[i], y1_[i], y0_[i]});
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < breaks_.size(); ++i) pts.emplace_back(1.0 - breaks_[i], point_[i]);
  return table(ps, pts);
}

WeightFunction WeightFunction::plus(const WeightFunction& other) const {
  std::set<double> xs(breaks_.begin(), breaks_.end());
  xs.insert(other.breaks_.begin(), other.breaks_.end());
  const std::vector<double> b = merge_breaks(xs);
  std::vector<LinearPiece> ps;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    ps.push_back({b[i], b[i + 1], right_limit(b[i]) + other.right_limit(b[i]),
                  left_limit(b[i + 1]) + other.left_limit(b[i + 1])});
  }
  std::vector<std::pair<double, double>> pts;
  for (double x : b) pts.emplace_back(x, (*this)(x) + other(x));
  return table(ps, pts);
}

bool approx_equal(const WeightFunction& f, const WeightFunction& g, double tol) {
  std::set<double> xs(f.breakpoints().begin(), f.breakpoints().end());
  xs.insert(g.breakpoints().begin(), g.breakpoints().end());
  for (double x : xs) {
    if (std::abs(f(x) - g(x)) > tol) return false;
    if (std::abs(f.left_limit(x) - g.left_limit(x)) > tol) return false;
    if (std::abs(f.right_limit(x) - g.right_limit(x)) > tol) return false;
    if (x < 1.0 && std::abs(f.derivative(x) - g.derivative(x)) > tol) return false;
  }
  return true;
}

}  // namespace giv
