#include "giv/uniform_sum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "giv/quadrature.hpp"

namespace giv {

UniformSum::UniformSum(std::vector<double> widths) {
  for (double w : widths) {
    if (w != 0.0) widths_.push_back(std::abs(w));
  }
  std::sort(widths_.begin(), widths_.end(), std::greater<>());
  std::vector<double> sums{0.0};
  double running = 0.0;
  for (double w : widths_) {
    std::vector<double> next = sums;
    for (double s : sums) next.push_back(s + w);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    sums = std::move(next);
    breaks_.push_back(sums);
    running += w;
    partial_totals_.push_back(running);
  }
  total_ = running;
}

template <typename F>
double UniformSum::average_over(int k, double x, F&& lower) const {
  // Mean of lower(u) over [x - w_k, x], split at the breakpoints of level k-1.
  const double w = widths_[k];
  const double lo = x - w;
  if (!(x > lo)) return lower(x);
  const auto& cuts = breaks_[k - 1];
  const auto& rule = quad::gauss_legendre(3);
  double acc = 0.0;
  double a = lo;
  auto integrate_piece = [&](double p, double q) {
    if (q <= p) return;
    const double c = 0.5 * (p + q), h = 0.5 * (q - p);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * lower(c + h * rule.nodes[i]);
    acc += s * h;
  };
  for (double b : cuts) {
    if (b <= a) continue;
    if (b >= x) break;
    integrate_piece(a, b);
    a = b;
  }
  integrate_piece(a, x);
  return acc / (x - lo);
}

double UniformSum::cdf_level(int k, double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= partial_totals_[k]) return 1.0;
  if (k == 0) return x / widths_[0];
  return average_over(k, x, [&](double u) { return cdf_level(k - 1, u); });
}

double UniformSum::pdf_level(int k, double x) const {
  if (x < 0.0 || x >= partial_totals_[k]) return 0.0;
  if (k == 0) return 1.0 / widths_[0];
  return average_over(k, x, [&](double u) { return pdf_level(k - 1, u); });
}

double UniformSum::cdf(double x) const {
  if (widths_.empty()) return x >= 0.0 ? 1.0 : 0.0;
  const int top = terms() - 1;
  if (x > 0.5 * total_) return 1.0 - cdf_level(top, total_ - x);
  return cdf_level(top, x);
}

double UniformSum::pdf(double x) const {
  if (widths_.empty()) return 0.0;
  return pdf_level(terms() - 1, x);
}

}  // namespace giv
