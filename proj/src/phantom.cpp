#include "giv/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "giv/error.hpp"
#include "giv/quadrature.hpp"

namespace giv {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double binomial(int n, int k) {
  return std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0));
}

double elementary_symmetric(const std::vector<double>& xs, int q) {
  std::vector<double> e(q + 1, 0.0);
  e[0] = 1.0;
  for (double x : xs) {
    for (int k = q; k >= 1; --k) e[k] += e[k - 1] * x;
  }
  return e[q];
}

// Area of a convex polygon clipped to [-hx, hx] x [-hy, hy].
double clipped_area(std::vector<std::array<double, 2>> poly, double hx, double hy) {
  auto clip = [&](int axis, double sign, double bound) {
    std::vector<std::array<double, 2>> out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& p = poly[i];
      const auto& q = poly[(i + 1) % n];
      const double fp = sign * p[axis] - bound;
      const double fq = sign * q[axis] - bound;
      if (fp <= 0.0) out.push_back(p);
      if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
        const double t = fp / (fp - fq);
        out.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
      }
    }
    poly = std::move(out);
  };
  clip(0, 1.0, hx);
  if (poly.empty()) return 0.0;
  clip(0, -1.0, hx);
  if (poly.empty()) return 0.0;
  clip(1, 1.0, hy);
  if (poly.empty()) return 0.0;
  clip(1, -1.0, hy);
  if (poly.size() < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    twice += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * std::abs(twice);
}

}  // namespace

double total_mass(const SurfaceMeasure& measure) {
  if (const auto* s = std::get_if<SphereUniform>(&measure)) return s->mass;
  double m = 0.0;
  for (const auto& atom : std::get<PolytopeAtoms>(measure).atoms) m += atom.mass;
  return m;
}

Phantom::Phantom(int dim, PhantomVariant variant) : dim_(dim), variant_(std::move(variant)) {
  if (dim != 2 && dim != 3) throw ConfigError("phantom dimension must be 2 or 3");
  if (auto* b = std::get_if<BallPhantom>(&variant_)) {
    if (!(b->radius > 0.0)) throw ConfigError("ball radius must be positive");
    for (int i = dim; i < 3; ++i) b->center[i] = 0.0;
  } else if (auto* x = std::get_if<BoxPhantom>(&variant_)) {
    for (int i = 0; i < dim; ++i) {
      if (!(x->half_widths[i] > 0.0)) throw ConfigError("box half-widths must be positive");
    }
    for (int i = dim; i < 3; ++i) {
      x->center[i] = 0.0;
      x->half_widths[i] = 0.0;
    }
    for (int j = 0; j < dim; ++j) {
      for (int k = 0; k < dim; ++k) {
        double g = 0.0;
        for (int i = 0; i < dim; ++i) g += x->rotation[j][i] * x->rotation[k][i];
        if (std::abs(g - (j == k ? 1.0 : 0.0)) > 1e-12) throw ConfigError("box rotation must be orthonormal");
      }
    }
  } else {
    auto& h = std::get<HalfSpacePhantom>(variant_);
    double n2 = 0.0;
    for (int i = 0; i < dim; ++i) n2 += h.normal[i] * h.normal[i];
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-12) throw ConfigError("half-space normal must be a unit vector");
  }
}

Phantom Phantom::box(int dim, const Vec& center, const Vec& half_widths) {
  return Phantom(dim, BoxPhantom{center, half_widths, {Vec{1, 0, 0}, Vec{0, 1, 0}, Vec{0, 0, 1}}});
}

Phantom Phantom::rectangle(const Vec& center, double half_width, double half_height, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return Phantom(2, BoxPhantom{center, {half_width, half_height, 0.0}, {Vec{c, s, 0}, Vec{-s, c, 0}, Vec{0, 0, 1}}});
}

std::string Phantom::kind_name() const {
  if (std::holds_alternative<BallPhantom>(variant_)) return "ball";
  if (std::holds_alternative<BoxPhantom>(variant_)) return "box";
  return "half_space";
}

Vec Phantom::to_local(const Vec& x) const {
  const auto& b = std::get<BoxPhantom>(variant_);
  const Vec r = x - b.center;
  Vec u{};
  for (int j = 0; j < dim_; ++j) {
    for (int i = 0; i < dim_; ++i) u[j] += b.rotation[j][i] * r[i];
  }
  return u;
}

bool Phantom::contains(const Vec& x) const {
  return signed_distance(x) <= 0.0;
}

double Phantom::signed_distance(const Vec& x) const {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BallPhantom>) {
          return norm(x - v.center) - v.radius;
        } else if constexpr (std::is_same_v<T, BoxPhantom>) {
          const Vec u = to_local(x);
          double outside = 0.0;
          double inside = -kInf;
          for (int i = 0; i < dim_; ++i) {
            const double q = std::abs(u[i]) - v.half_widths[i];
            if (q > 0.0) outside += q * q;
            inside = std::max(inside, q);
          }
          return outside > 0.0 ? std::sqrt(outside) : inside;
        } else {
          return dot(x, v.normal) - v.offset;
        }
      },
      variant_);
}

double Phantom::intrinsic_volume(int q) const {
  if (q < 0 || q > dim_) throw ConfigError("intrinsic volume index out of range");
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BallPhantom>) {
          return binomial(dim_, q) * unit_ball_volume(dim_) / unit_ball_volume(dim_ - q) * std::pow(v.radius, q);
        } else if constexpr (std::is_same_v<T, BoxPhantom>) {
          std::vector<double> sides;
          for (int i = 0; i < dim_; ++i) sides.push_back(2.0 * v.half_widths[i]);
          return elementary_symmetric(sides, q);
        } else {
          if (q == 0) return 1.0;
          throw ConfigError("intrinsic volumes of a half-space are infinite");
        }
      },
      variant_);
}

std::pair<Vec, Vec> Phantom::bounding_box() const {
  Vec lo{};
  Vec hi{};
  if (const auto* b = std::get_if<BallPhantom>(&variant_)) {
    for (int i = 0; i < dim_; ++i) {
      lo[i] = b->center[i] - b->radius;
      hi[i] = b->center[i] + b->radius;
    }
  } else if (const auto* x = std::get_if<BoxPhantom>(&variant_)) {
    for (int i = 0; i < dim_; ++i) {
      double e = 0.0;
      for (int j = 0; j < dim_; ++j) e += std::abs(x->rotation[j][i]) * x->half_widths[j];
      lo[i] = x->center[i] - e;
      hi[i] = x->center[i] + e;
    }
  } else {
    throw ConfigError("a half-space has no bounding box");
  }
  return {lo, hi};
}

SurfaceMeasure Phantom::surface_measure() const {
  if (const auto* b = std::get_if<BallPhantom>(&variant_)) {
    return SphereUniform{b->radius, unit_sphere_area(dim_) * std::pow(b->radius, dim_ - 1)};
  }
  if (const auto* x = std::get_if<BoxPhantom>(&variant_)) {
    PolytopeAtoms atoms;
    for (int j = 0; j < dim_; ++j) {
      double area = 1.0;
      for (int k = 0; k < dim_; ++k) {
        if (k != j) area *= 2.0 * x->half_widths[k];
      }
      for (double sign : {1.0, -1.0}) {
        Vec n{};
        for (int i = 0; i < dim_; ++i) n[i] = sign * x->rotation[j][i];
        atoms.atoms.push_back({n, area});
      }
    }
    return atoms;
  }
  throw ConfigError("a half-space has unbounded boundary measure");
}

CurvatureInfo Phantom::curvature() const {
  if (const auto* b = std::get_if<BallPhantom>(&variant_)) return {(dim_ - 1) / b->radius, true};
  if (std::holds_alternative<BoxPhantom>(variant_)) return {0.0, false};
  return {0.0, true};
}

std::pair<double, double> Phantom::chord(const Vec& x, const Vec& e) const {
  return std::visit(
      [&](const auto& v) -> std::pair<double, double> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BallPhantom>) {
          const Vec r = x - v.center;
          const double b = dot(r, e);
          const double disc = b * b - (dot(r, r) - v.radius * v.radius);
          if (disc < 0.0) return {1.0, -1.0};
          const double s = std::sqrt(disc);
          return {-b - s, -b + s};
        } else if constexpr (std::is_same_v<T, BoxPhantom>) {
          const Vec p = to_local(x);
          double lo = -kInf;
          double hi = kInf;
          for (int j = 0; j < dim_; ++j) {
            double ej = 0.0;
            for (int i = 0; i < dim_; ++i) ej += v.rotation[j][i] * e[i];
            const double h = v.half_widths[j];
            if (std::abs(ej) < 1e-300) {
              if (std::abs(p[j]) > h) return {1.0, -1.0};
              continue;
            }
            double s0 = (-h - p[j]) / ej;
            double s1 = (h - p[j]) / ej;
            if (s0 > s1) std::swap(s0, s1);
            lo = std::max(lo, s0);
            hi = std::min(hi, s1);
          }
          return {lo, hi};
        } else {
          const double en = dot(e, v.normal);
          const double gap = v.offset - dot(x, v.normal);
          if (en == 0.0) return gap >= 0.0 ? std::pair{-kInf, kInf} : std::pair{1.0, -1.0};
          if (en > 0.0) return {-kInf, gap / en};
          return {gap / en, kInf};
        }
      },
      variant_);
}

std::vector<double> Phantom::section_breaks(const Vec& p, int k) const {
  std::vector<double> out;
  if (const auto* b = std::get_if<BallPhantom>(&variant_)) {
    double r2 = b->radius * b->radius;
    for (int j = 0; j < k; ++j) r2 -= (p[j] - b->center[j]) * (p[j] - b->center[j]);
    if (r2 > 0.0) {
      out.push_back(b->center[k] - std::sqrt(r2));
      out.push_back(b->center[k] + std::sqrt(r2));
    }
  } else if (const auto* x = std::get_if<BoxPhantom>(&variant_)) {
    const int corners = 1 << dim_;
    auto vertex = [&](int mask) {
      Vec v = x->center;
      for (int j = 0; j < dim_; ++j) {
        const double s = (mask >> j & 1) ? x->half_widths[j] : -x->half_widths[j];
        for (int i = 0; i < dim_; ++i) v[i] += s * x->rotation[j][i];
      }
      return v;
    };
    if (k == 0) {
      for (int m = 0; m < corners; ++m) out.push_back(vertex(m)[0]);
    } else if (k == 1) {
      for (int m = 0; m < corners; ++m) {
        for (int j = 0; j < dim_; ++j) {
          if (m >> j & 1) continue;
          const Vec v0 = vertex(m);
          const Vec v1 = vertex(m | (1 << j));
          const double den = v1[0] - v0[0];
          if (den == 0.0) continue;
          const double t = (p[0] - v0[0]) / den;
          if (t >= 0.0 && t <= 1.0) out.push_back(v0[1] + t * (v1[1] - v0[1]));
        }
      }
    }
  } else {
    const auto& h = std::get<HalfSpacePhantom>(variant_);
    double rest = 0.0;
    for (int j = k + 1; j < dim_; ++j) rest += h.normal[j] * h.normal[j];
    if (rest == 0.0 && h.normal[k] != 0.0) {
      double g = h.offset;
      for (int j = 0; j < k; ++j) g -= p[j] * h.normal[j];
      out.push_back(g / h.normal[k]);
    }
  }
  return out;
}

double Phantom::intensity(const Psf& psf, double a, const Vec& x) const {
  return IntensityEvaluator(*this, psf, a)(x);
}

std::string to_string(IntensityPath path) {
  switch (path) {
    case IntensityPath::HalfspaceProfile: return "halfspace_profile";
    case IntensityPath::BallIntersection: return "ball_intersection";
    case IntensityPath::RadialShell: return "radial_shell_quadrature";
    case IntensityPath::SeparableOverlap: return "separable_overlap";
    case IntensityPath::PolygonClip: return "polygon_clip";
    case IntensityPath::NestedQuadrature: return "nested_quadrature";
  }
  return "unknown";
}

IntensityEvaluator::IntensityEvaluator(const Phantom& phantom, const Psf& psf, double a, bool force_quadrature)
    : phantom_(phantom), psf_(psf), a_(a), radius_(psf.truncation_radius()) {
  if (!(a > 0.0)) throw ConfigError("spacing a must be positive");
  if (phantom.dim() != psf.dim()) throw ConfigError("phantom and psf dimensions differ");
  const auto& pv = phantom.variant();
  const auto& fv = psf.variant();
  if (force_quadrature) {
    path_ = IntensityPath::NestedQuadrature;
  } else if (const auto* h = std::get_if<HalfSpacePhantom>(&pv)) {
    path_ = IntensityPath::HalfspaceProfile;
    profile_ = std::make_unique<HalfspaceProfile>(psf, h->normal);
  } else if (std::holds_alternative<BallPhantom>(pv) && std::holds_alternative<BallIndicator>(fv)) {
    path_ = IntensityPath::BallIntersection;
  } else if (std::holds_alternative<BallPhantom>(pv) && psf.rotation_invariant()) {
    path_ = IntensityPath::RadialShell;
  } else if (const auto* b = std::get_if<BoxPhantom>(&pv); b && std::holds_alternative<BoxIndicator>(fv)) {
    bool aligned = true;
    for (int j = 0; j < phantom.dim() && aligned; ++j) {
      int hit = -1;
      for (int i = 0; i < phantom.dim(); ++i) {
        const double r = std::abs(b->rotation[j][i]);
        if (std::abs(r - 1.0) <= 1e-12) {
          hit = i;
        } else if (r > 1e-12) {
          aligned = false;
        }
      }
      if (hit < 0) aligned = false;
      axis_map_[j] = hit;
    }
    if (aligned) {
      path_ = IntensityPath::SeparableOverlap;
    } else if (phantom.dim() == 2) {
      path_ = IntensityPath::PolygonClip;
    } else {
      path_ = IntensityPath::NestedQuadrature;
    }
  } else {
    path_ = IntensityPath::NestedQuadrature;
  }
}

IntensityEvaluator::~IntensityEvaluator() = default;
IntensityEvaluator::IntensityEvaluator(IntensityEvaluator&&) noexcept = default;

double IntensityEvaluator::operator()(const Vec& point) const {
  Vec x = point;
  for (int i = phantom_.dim(); i < kMaxDim; ++i) x[i] = 0.0;
  const double sd = phantom_.signed_distance(x);
  if (path_ == IntensityPath::HalfspaceProfile) return profile_->value(sd / a_);
  const double reach = a_ * radius_;
  if (sd >= reach) return 0.0;
  if (sd <= -reach) return 1.0;
  double v = 0.0;
  switch (path_) {
    case IntensityPath::BallIntersection: v = ball_intersection(x); break;
    case IntensityPath::RadialShell: v = radial_shell(x); break;
    case IntensityPath::SeparableOverlap: v = separable_overlap(x); break;
    case IntensityPath::PolygonClip: v = polygon_clip(x); break;
    default: v = nested(x); break;
  }
  return std::clamp(v, 0.0, 1.0);
}

double IntensityEvaluator::ball_intersection(const Vec& x) const {
  const auto& b = std::get<BallPhantom>(phantom_.variant());
  const double R = b.radius;
  const double r = a_ * std::get<BallIndicator>(psf_.variant()).radius;
  const double D = norm(x - b.center);
  const int d = phantom_.dim();
  if (D >= R + r) return 0.0;
  if (D <= R - r) return 1.0;
  const double psf_volume = unit_ball_volume(d) * std::pow(r, d);
  if (D <= r - R) return unit_ball_volume(d) * std::pow(R, d) / psf_volume;
  if (d == 2) {
    const double c1 = std::clamp((D * D + r * r - R * R) / (2.0 * D * r), -1.0, 1.0);
    const double c2 = std::clamp((D * D + R * R - r * r) / (2.0 * D * R), -1.0, 1.0);
    const double k = (-D + r + R) * (D + r - R) * (D - r + R) * (D + r + R);
    const double area = r * r * std::acos(c1) + R * R * std::acos(c2) - 0.5 * std::sqrt(std::max(k, 0.0));
    return area / psf_volume;
  }
  const double s = R + r - D;
  const double vol = kPi * s * s * (D * D + 2.0 * D * r - 3.0 * r * r + 2.0 * D * R + 6.0 * r * R - 3.0 * R * R) /
                     (12.0 * D);
  return vol / psf_volume;
}

double IntensityEvaluator::radial_shell(const Vec& x) const {
  const auto& b = std::get<BallPhantom>(phantom_.variant());
  const double R = b.radius;
  const double Dc = norm(x - b.center);
  const int d = phantom_.dim();
  auto fraction = [&](double rho) -> double {
    if (rho <= R - Dc) return 1.0;
    if (rho >= R + Dc || rho <= Dc - R) return 0.0;
    const double c0 = std::clamp((Dc * Dc + rho * rho - R * R) / (2.0 * rho * Dc), -1.0, 1.0);
    return d == 2 ? std::acos(c0) / kPi : 0.5 * (1.0 - c0);
  };
  const double area = unit_sphere_area(d);
  auto integrand = [&](double s) { return psf_.radial_density(s) * area * std::pow(s, d - 1) * fraction(a_ * s); };
  std::vector<double> breaks{std::abs(R - Dc) / a_, (R + Dc) / a_};
  if (const auto* t = std::get_if<TabulatedRadial>(&psf_.variant())) breaks.insert(breaks.end(), t->radii.begin(), t->radii.end());
  return quad::integral(integrand, 0.0, radius_, 1e-12, breaks);
}

double IntensityEvaluator::separable_overlap(const Vec& x) const {
  const auto& b = std::get<BoxPhantom>(phantom_.variant());
  const auto& h = std::get<BoxIndicator>(psf_.variant()).half_widths;
  Vec u{};
  const Vec r = x - b.center;
  for (int j = 0; j < phantom_.dim(); ++j) {
    for (int i = 0; i < phantom_.dim(); ++i) u[j] += b.rotation[j][i] * r[i];
  }
  double v = 1.0;
  for (int j = 0; j < phantom_.dim(); ++j) {
    const double hw = a_ * h[axis_map_[j]];
    const double H = b.half_widths[j];
    const double overlap = std::min(u[j] + hw, H) - std::max(u[j] - hw, -H);
    if (overlap <= 0.0) return 0.0;
    v *= overlap / (2.0 * hw);
  }
  return v;
}

double IntensityEvaluator::polygon_clip(const Vec& x) const {
  const auto& b = std::get<BoxPhantom>(phantom_.variant());
  const auto& h = std::get<BoxIndicator>(psf_.variant()).half_widths;
  const double hx = a_ * h[0];
  const double hy = a_ * h[1];
  std::vector<std::array<double, 2>> poly;
  for (auto [sx, sy] : {std::pair{-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}}) {
    const Vec r{x[0] + sx * hx - b.center[0], x[1] + sy * hy - b.center[1], 0.0};
    poly.push_back({b.rotation[0][0] * r[0] + b.rotation[0][1] * r[1], b.rotation[1][0] * r[0] + b.rotation[1][1] * r[1]});
  }
  return clipped_area(std::move(poly), b.half_widths[0], b.half_widths[1]) / (4.0 * hx * hy);
}

double IntensityEvaluator::nested(const Vec& x) const {
  const int d = phantom_.dim();
  const auto* box = std::get_if<BoxIndicator>(&psf_.variant());
  const bool indicator = box || std::holds_alternative<BallIndicator>(psf_.variant());
  const double constant = indicator ? psf_.density(Vec{}) : 0.0;
  const double D = radius_;
  Vec axis{};
  axis[d - 1] = 1.0;

  const auto* gauss = std::get_if<Gaussian>(&psf_.variant());
  auto range = [&](int k, const Vec& u) {
    if (box) return box->half_widths[k];
    if (gauss) return D;
    double r2 = D * D;
    for (int j = 0; j < k; ++j) r2 -= u[j] * u[j];
    return std::sqrt(std::max(r2, 0.0));
  };

  auto innermost = [&](const Vec& u) -> double {
    const double L = range(d - 1, u);
    if (L <= 0.0) return 0.0;
    Vec p = x;
    for (int j = 0; j < d - 1; ++j) p[j] += a_ * u[j];
    auto [s0, s1] = phantom_.chord(p, axis);
    const double lo = std::max(-L, s0 / a_);
    const double hi = std::min(L, s1 / a_);
    if (!(hi > lo)) return 0.0;
    if (indicator) return constant * (hi - lo);
    double r2 = 0.0;
    for (int j = 0; j < d - 1; ++j) r2 += u[j] * u[j];
    if (gauss) {
      const double s = gauss->sigma * std::numbers::sqrt2;
      const double mass = 0.5 * (std::erf(hi / s) - std::erf(lo / s));
      return mass * std::exp(-0.5 * r2 / (gauss->sigma * gauss->sigma)) /
             std::pow(std::sqrt(2.0 * kPi) * gauss->sigma, d - 1);
    }
    std::vector<double> breaks;
    if (const auto* t = std::get_if<TabulatedRadial>(&psf_.variant())) {
      for (double r : t->radii) {
        if (r * r > r2) {
          breaks.push_back(std::sqrt(r * r - r2));
          breaks.push_back(-std::sqrt(r * r - r2));
        }
      }
    }
    return quad::integral([&](double t) { return psf_.radial_density(std::sqrt(r2 + t * t)); }, lo, hi, 1e-12,
                          breaks);
  };

  std::function<double(int, Vec)> level = [&](int k, Vec u) -> double {
    if (k == d - 1) return innermost(u);
    const double L = range(k, u);
    if (L <= 0.0) return 0.0;
    Vec p = x;
    for (int j = 0; j < k; ++j) p[j] += a_ * u[j];
    std::vector<double> breaks;
    for (double b : phantom_.section_breaks(p, k)) breaks.push_back((b - x[k]) / a_);
    for (int i = 1; i < 4; ++i) breaks.push_back(-L + 0.5 * i * L);
    return quad::integral(
        [&](double t) {
          Vec w = u;
          w[k] = t;
          return level(k + 1, w);
        },
        -L, L, k == 0 ? 1e-10 : 1e-11, breaks);
  };
  return level(0, Vec{});
}

}  // namespace giv
