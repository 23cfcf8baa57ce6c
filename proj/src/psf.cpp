#include "giv/psf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "giv/error.hpp"
#include "giv/log.hpp"
#include "giv/quadrature.hpp"
#include "giv/root_finding.hpp"

namespace giv {

namespace {

constexpr double kPi = std::numbers::pi;

double ball_lower_tail(int d, double R, double x) {
  if (x <= -R) return 0.0;
  if (x >= 0.0) return 0.5;
  const double u = -x;
  if (d == 2) {
    const double segment = R * R * std::acos(u / R) - u * std::sqrt(std::max(R * R - u * u, 0.0));
    return segment / (kPi * R * R);
  }
  const double h = R - u;
  return (kPi * h * h * (3.0 * R - h) / 3.0) / (4.0 / 3.0 * kPi * R * R * R);
}

double bump_lower_tail(int d, double R, double C, double x) {
  if (x <= -R) return 0.0;
  if (x >= 0.0) return 0.5;
  const double R2 = R * R;
  if (d == 2) {
    auto A = [&](double s) {
      return s * (5.0 * R2 - 2.0 * s * s) * std::sqrt(std::max(R2 - s * s, 0.0)) / 8.0 +
             3.0 * R2 * R2 / 8.0 * std::asin(std::clamp(s / R, -1.0, 1.0));
    };
    return C / R2 * (4.0 / 3.0) * (A(x) - A(-R));
  }
  auto P = [&](double s) { return R2 * R2 * s - 2.0 / 3.0 * R2 * s * s * s + std::pow(s, 5) / 5.0; };
  return C * kPi / (2.0 * R2) * (P(x) - P(-R));
}

double tabulated_value(const TabulatedRadial& t, double r) {
  const auto& xs = t.radii;
  const auto& ys = t.density;
  if (r > xs.back()) return 0.0;
  if (r <= xs.front()) return ys.front();
  const auto it = std::upper_bound(xs.begin(), xs.end(), r);
  const std::size_t i = static_cast<std::size_t>(it - xs.begin());
  if (i >= xs.size()) return ys.back();
  const double u = (r - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + u * (ys[i] - ys[i - 1]);
}

// \int_{n^perp} |y|^{power} rho(y + s n) dy for a radial density given on [0, D].
template <typename Radial>
double hyperplane_integral(int d, const Radial& radial, double D, std::span<const double> nodes, double s,
                           int power) {
  const double s2 = s * s;
  if (s2 >= D * D) return 0.0;
  const double top = std::sqrt(D * D - s2);
  std::vector<double> breaks;
  for (double r : nodes) {
    if (r * r > s2) breaks.push_back(std::sqrt(r * r - s2));
  }
  const int m = d - 1;
  auto integrand = [&](double r) { return radial(std::sqrt(s2 + r * r)) * std::pow(r, m - 1 + power); };
  return unit_sphere_area(m) * quad::integral(integrand, 0.0, top, 1e-13, breaks);
}

void check_dim(int d) {
  if (d != 2 && d != 3) throw ConfigError("psf dimension must be 2 or 3");
}

}  // namespace

Psf::Psf(int dim, PsfVariant variant) : dim_(dim), variant_(std::move(variant)) {
  check_dim(dim);
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BallIndicator> || std::is_same_v<T, Bump>) {
          if (!(v.radius > 0.0)) throw ConfigError("psf radius must be positive");
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          if (!(v.sigma > 0.0)) throw ConfigError("gaussian sigma must be positive");
        } else if constexpr (std::is_same_v<T, BoxIndicator>) {
          for (int i = 0; i < dim; ++i) {
            if (!(v.half_widths[i] > 0.0)) throw ConfigError("box psf half-widths must be positive");
          }
        } else {
          if (v.radii.size() < 2 || v.radii.size() != v.density.size())
            throw ConfigError("tabulated psf needs at least two (radius, density) rows");
          for (std::size_t i = 0; i < v.radii.size(); ++i) {
            if (v.density[i] < 0.0 || !std::isfinite(v.density[i])) throw ConfigError("tabulated density must be >= 0");
            if (i > 0 && !(v.radii[i] > v.radii[i - 1])) throw ConfigError("tabulated radii must increase");
          }
          if (v.radii.front() < 0.0) throw ConfigError("tabulated radii must be >= 0");
        }
      },
      variant_);
  if (const auto* b = std::get_if<Bump>(&variant_)) {
    bump_constant_ = (dim + 2.0) / (2.0 * unit_ball_volume(dim) * std::pow(b->radius, dim));
  }
  truncation_ = truncation_radius();
}

Psf Psf::tabulated(int dim, std::vector<double> radii, std::vector<double> density) {
  check_dim(dim);
  Psf raw(dim, TabulatedRadial{radii, density, 1.0});
  const auto& t = std::get<TabulatedRadial>(raw.variant_);
  auto shell = [&](double r) { return tabulated_value(t, r) * std::pow(r, dim - 1); };
  const double mass = unit_sphere_area(dim) * quad::integral(shell, 0.0, t.radii.back(), 1e-14, t.radii);
  if (!(mass > 0.0)) throw ConfigError("tabulated psf has zero mass");
  const double factor = 1.0 / mass;
  for (double& v : density) v *= factor;
  std::ostringstream msg;
  msg << "tabulated psf renormalized by factor " << factor;
  log(LogLevel::Info, msg.str());
  return Psf(dim, TabulatedRadial{std::move(radii), std::move(density), factor});
}

Psf Psf::load_tabulated_csv(int dim, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open tabulated psf file: " + path);
  std::vector<double> radii;
  std::vector<double> density;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double r = 0.0;
    double v = 0.0;
    if (!(row >> r >> v)) {
      if (first) {
        first = false;
        continue;
      }
      throw ConfigError("malformed row in tabulated psf file: " + line);
    }
    first = false;
    radii.push_back(r);
    density.push_back(v);
  }
  return tabulated(dim, std::move(radii), std::move(density));
}

std::string Psf::kind_name() const {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BallIndicator>) return "ball_indicator";
        if constexpr (std::is_same_v<T, BoxIndicator>) return "box_indicator";
        if constexpr (std::is_same_v<T, Gaussian>) return "gaussian";
        if constexpr (std::is_same_v<T, Bump>) return "bump";
        return "tabulated_radial";
      },
      variant_);
}

bool Psf::continuous() const {
  if (std::holds_alternative<Gaussian>(variant_) || std::holds_alternative<Bump>(variant_)) return true;
  if (const auto* t = std::get_if<TabulatedRadial>(&variant_)) return t->density.back() == 0.0;
  return false;
}

double Psf::radial_density(double r) const {
  r = std::abs(r);
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BallIndicator>) {
          return r <= v.radius ? 1.0 / (unit_ball_volume(dim_) * std::pow(v.radius, dim_)) : 0.0;
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          const double s2 = v.sigma * v.sigma;
          return std::exp(-0.5 * r * r / s2) / std::pow(2.0 * kPi * s2, 0.5 * dim_);
        } else if constexpr (std::is_same_v<T, Bump>) {
          const double u = r / v.radius;
          return u < 1.0 ? bump_constant_ * (1.0 - u * u) : 0.0;
        } else if constexpr (std::is_same_v<T, TabulatedRadial>) {
          return tabulated_value(v, r);
        } else {
          throw IncompatibleError("box psf is not rotation invariant");
        }
      },
      variant_);
}

double Psf::density(const Vec& z) const {
  if (const auto* b = std::get_if<BoxIndicator>(&variant_)) {
    double vol = 1.0;
    for (int i = 0; i < dim_; ++i) {
      if (std::abs(z[i]) > b->half_widths[i]) return 0.0;
      vol *= 2.0 * b->half_widths[i];
    }
    return 1.0 / vol;
  }
  double r2 = 0.0;
  for (int i = 0; i < dim_; ++i) r2 += z[i] * z[i];
  return radial_density(std::sqrt(r2));
}

double Psf::support_radius() const {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BallIndicator> || std::is_same_v<T, Bump>) {
          return v.radius;
        } else if constexpr (std::is_same_v<T, BoxIndicator>) {
          double s = 0.0;
          for (int i = 0; i < dim_; ++i) s += v.half_widths[i] * v.half_widths[i];
          return std::sqrt(s);
        } else if constexpr (std::is_same_v<T, TabulatedRadial>) {
          return v.radii.back();
        } else {
          return truncation_;
        }
      },
      variant_);
}

double Psf::truncation_radius(double tail) const {
  if (const auto* g = std::get_if<Gaussian>(&variant_)) {
    return bisect_boundary([&](double R) { return tail_mass(R) > tail; }, 0.0, 100.0 * g->sigma, 1e-12 * g->sigma);
  }
  return support_radius();
}

double Psf::tail_mass(double R) const {
  if (R <= 0.0) return 1.0;
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BallIndicator>) {
          return R >= v.radius ? 0.0 : 1.0 - std::pow(R / v.radius, dim_);
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          const double r = R / v.sigma;
          if (dim_ == 2) return std::exp(-0.5 * r * r);
          return std::erfc(r / std::numbers::sqrt2) + std::sqrt(2.0 / kPi) * r * std::exp(-0.5 * r * r);
        } else if constexpr (std::is_same_v<T, Bump>) {
          if (R >= v.radius) return 0.0;
          const double inner = bump_constant_ * unit_sphere_area(dim_) *
                               (std::pow(R, dim_) / dim_ - std::pow(R, dim_ + 2) / ((dim_ + 2.0) * v.radius * v.radius));
          return std::max(0.0, 1.0 - inner);
        } else if constexpr (std::is_same_v<T, TabulatedRadial>) {
          if (R >= v.radii.back()) return 0.0;
          auto shell = [&](double r) { return tabulated_value(v, r) * std::pow(r, dim_ - 1); };
          return std::max(0.0, 1.0 - unit_sphere_area(dim_) * quad::integral(shell, 0.0, R, 1e-14, v.radii));
        } else {
          const auto& h = v.half_widths;
          if (R * R >= h[0] * h[0] + h[1] * h[1] + (dim_ == 3 ? h[2] * h[2] : 0.0)) return 0.0;
          auto overlap = [](double half, double reach) { return 2.0 * std::min(half, reach); };
          auto area2 = [&](double r, double hx, double hy) {
            if (r <= 0.0) return 0.0;
            auto chord = [&](double x) { return overlap(hy, std::sqrt(std::max(r * r - x * x, 0.0))); };
            const double top = std::min(hx, r);
            const double k = std::sqrt(std::max(r * r - hy * hy, 0.0));
            const double brk[] = {k};
            return 2.0 * quad::integral(chord, 0.0, top, 1e-13, brk);
          };
          double inside = 0.0;
          double vol = 1.0;
          for (int i = 0; i < dim_; ++i) vol *= 2.0 * h[i];
          if (dim_ == 2) {
            inside = area2(R, h[0], h[1]);
          } else {
            auto slice = [&](double z) { return area2(std::sqrt(std::max(R * R - z * z, 0.0)), h[0], h[1]); };
            std::vector<double> brk;
            for (double c : {R * R - h[0] * h[0], R * R - h[1] * h[1], R * R - h[0] * h[0] - h[1] * h[1]}) {
              if (c > 0.0) brk.push_back(std::sqrt(c));
            }
            inside = 2.0 * quad::integral(slice, 0.0, std::min(h[2], R), 1e-12, brk);
          }
          return std::clamp(1.0 - inside / vol, 0.0, 1.0);
        }
      },
      variant_);
}

double Psf::radial_marginal(double s) const {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        const int m = dim_ - 1;
        if constexpr (std::is_same_v<T, BallIndicator>) {
          const double R = v.radius;
          if (std::abs(s) > R) return 0.0;
          return unit_ball_volume(m) * std::pow(R * R - s * s, 0.5 * m) / (unit_ball_volume(dim_) * std::pow(R, dim_));
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          return std::exp(-0.5 * s * s / (v.sigma * v.sigma)) / (std::sqrt(2.0 * kPi) * v.sigma);
        } else if constexpr (std::is_same_v<T, Bump>) {
          const double R = v.radius;
          if (std::abs(s) >= R) return 0.0;
          const double rho2 = R * R - s * s;
          return bump_constant_ / (R * R) * 2.0 * unit_ball_volume(m) * std::pow(rho2, 0.5 * (m + 2)) / (m + 2.0);
        } else if constexpr (std::is_same_v<T, TabulatedRadial>) {
          auto radial = [&](double r) { return tabulated_value(v, r); };
          return hyperplane_integral(dim_, radial, v.radii.back(), v.radii, s, 0);
        } else {
          throw IncompatibleError("box psf is not rotation invariant");
        }
      },
      variant_);
}

double Psf::radial_second_moment(double s) const {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        const int m = dim_ - 1;
        if constexpr (std::is_same_v<T, BallIndicator>) {
          const double R = v.radius;
          if (std::abs(s) > R) return 0.0;
          const double rho = std::sqrt(R * R - s * s);
          return unit_sphere_area(m) * std::pow(rho, m + 2) / (m + 2.0) / (unit_ball_volume(dim_) * std::pow(R, dim_));
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          return m * v.sigma * v.sigma * std::exp(-0.5 * s * s / (v.sigma * v.sigma)) / (std::sqrt(2.0 * kPi) * v.sigma);
        } else if constexpr (std::is_same_v<T, Bump>) {
          const double R = v.radius;
          if (std::abs(s) >= R) return 0.0;
          const double rho = std::sqrt(R * R - s * s);
          return bump_constant_ / (R * R) * unit_sphere_area(m) * std::pow(rho, m + 4) * 2.0 / ((m + 2.0) * (m + 4.0));
        } else if constexpr (std::is_same_v<T, TabulatedRadial>) {
          auto radial = [&](double r) { return tabulated_value(v, r); };
          return hyperplane_integral(dim_, radial, v.radii.back(), v.radii, s, 2);
        } else {
          throw IncompatibleError("box psf is not rotation invariant");
        }
      },
      variant_);
}

HalfspaceProfile::HalfspaceProfile(const Psf& psf, const Vec& direction)
    : psf_(std::make_shared<const Psf>(psf)), direction_(direction) {
  const int d = psf.dim();
  double n2 = 0.0;
  for (int i = 0; i < d; ++i) n2 += direction[i] * direction[i];
  for (int i = d; i < 3; ++i) {
    if (direction[i] != 0.0) throw ConfigError("direction has components beyond the psf dimension");
  }
  if (std::abs(std::sqrt(n2) - 1.0) > 1e-12) throw ConfigError("direction must be a unit vector");
  if (const auto* b = std::get_if<BoxIndicator>(&psf.variant())) {
    std::vector<double> widths;
    for (int i = 0; i < d; ++i) widths.push_back(2.0 * std::abs(direction[i]) * b->half_widths[i]);
    box_sum_ = std::make_unique<UniformSum>(widths);
    box_half_total_ = 0.5 * box_sum_->total_width();
    reach_ = box_half_total_;
  } else if (const auto* g = std::get_if<Gaussian>(&psf.variant())) {
    reach_ = psf.truncation_radius();
    (void)g;
  } else {
    reach_ = psf.support_radius();
  }
}

double HalfspaceProfile::marginal(double s) const {
  if (box_sum_) return box_sum_->pdf(s + box_half_total_);
  return psf_->radial_marginal(s);
}

double HalfspaceProfile::lower_tail(double x) const {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        const int d = psf_->dim();
        if constexpr (std::is_same_v<T, BallIndicator>) {
          return ball_lower_tail(d, v.radius, x);
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          return 0.5 * std::erfc(-x / (v.sigma * std::numbers::sqrt2));
        } else if constexpr (std::is_same_v<T, Bump>) {
          const double C = (d + 2.0) / (2.0 * unit_ball_volume(d) * std::pow(v.radius, d));
          return bump_lower_tail(d, v.radius, C, x);
        } else if constexpr (std::is_same_v<T, TabulatedRadial>) {
          const double D = v.radii.back();
          if (x <= -D) return 0.0;
          std::vector<double> breaks;
          for (double r : v.radii) breaks.push_back(-r);
          return quad::integral([&](double s) { return psf_->radial_marginal(s); }, -D, x, 1e-13, breaks);
        } else {
          return box_sum_->cdf(x + box_half_total_);
        }
      },
      psf_->variant());
}

double HalfspaceProfile::value(double t) const {
  const double v = t >= 0.0 ? lower_tail(-t) : 1.0 - lower_tail(t);
  return std::clamp(v, 0.0, 1.0);
}

double HalfspaceProfile::derivative(double t) const { return -marginal(-t); }

double HalfspaceProfile::level_crossing(double beta, LevelConvention conv) const {
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("level must lie in [0, 1]");
  const bool interior = beta > 0.0 && beta < 1.0;
  if (!interior) {
    if (!psf_->compact()) throw IncompatibleError("level 0 or 1 has no finite crossing for a non-compact psf");
    if (beta == 0.0 && conv == LevelConvention::Supremum) throw ConfigError("sup{t : theta(t) >= 0} is unbounded");
    if (beta == 1.0 && conv == LevelConvention::Infimum) throw ConfigError("inf{t : theta(t) <= 1} is unbounded");
  }
  double span = reach_ + 1.0;
  if (const auto* g = std::get_if<Gaussian>(&psf_->variant())) span = 40.0 * g->sigma;
  const double tol = 1e-13 * std::max(1.0, span);
  if (conv == LevelConvention::Infimum) {
    return bisect_boundary([&](double t) { return value(t) > beta; }, -span, span, tol);
  }
  double lo = -span;
  double hi = span;
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (value(mid) >= beta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double HalfspaceProfile::phi(double beta, LevelConvention conv) const {
  if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("phi requires a level in (0, 1)");
  return level_crossing(beta, conv);
}

bool HalfspaceProfile::is_regular_value(double beta) const {
  return std::abs(derivative(phi(beta))) > 1e-9;
}

}  // namespace giv
