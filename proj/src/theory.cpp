#include "giv/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "giv/error.hpp"
#include "giv/log.hpp"
#include "giv/quadrature.hpp"
#include "giv/root_finding.hpp"

namespace giv {

namespace {

constexpr double kPi = std::numbers::pi;

Vec first_axis() { return Vec{1.0, 0.0, 0.0}; }

void require_radial(const Psf& psf, const char* what) {
  if (!psf.rotation_invariant()) throw IncompatibleError(std::string(what) + " needs a rotation-invariant psf");
}

// Level sets {u < theta < v} = (lower, upper) with upper = phi(u), lower = phi~(v).
struct LevelInterval {
  double lower = 0.0;
  double upper = 0.0;
  double length() const { return std::max(upper - lower, 0.0); }
};

LevelInterval open_level_set(const HalfspaceProfile& profile, double u, double v) {
  LevelInterval out;
  out.upper = profile.level_crossing(u, LevelConvention::Infimum);
  out.lower = profile.level_crossing(v, LevelConvention::Supremum);
  return out;
}

// Sum over the linear pieces of f of  alpha * A(lo, hi) + slope * B(lo, hi),
// where f = alpha + slope * x on the piece, plus point values times P(b).
template <typename Constant, typename Linear, typename Point>
double piecewise_sum(const HalfspaceProfile& profile, const WeightFunction& f, Constant constant, Linear linear,
                     Point point) {
  double total = 0.0;
  for (const auto& p : f.pieces()) {
    if (p.y0 == 0.0 && p.y1 == 0.0) continue;
    const double slope = (p.y1 - p.y0) / (p.x1 - p.x0);
    const double alpha = p.y0 - slope * p.x0;
    const LevelInterval li = open_level_set(profile, p.x0, p.x1);
    if (!(li.upper > li.lower)) continue;
    total += alpha * constant(li.lower, li.upper);
    if (slope != 0.0) total += slope * linear(li.lower, li.upper);
  }
  for (const auto& [x, y] : f.point_values()) {
    if (y == 0.0 || x <= 0.0 || x >= 1.0) continue;
    const double lo = profile.level_crossing(x, LevelConvention::Infimum);
    const double hi = profile.level_crossing(x, LevelConvention::Supremum);
    if (hi > lo) total += y * point(lo, hi);
  }
  return total;
}

}  // namespace

DirectionGrid DirectionGrid::uniform(int dim, int size) {
  if (dim != 2 && dim != 3) throw ConfigError("direction grids exist for d = 2, 3");
  if (size < 1) throw ConfigError("direction grid size must be positive");
  DirectionGrid g;
  g.dim_ = dim;
  g.size_ = size;
  if (dim == 2) {
    for (int k = 0; k < size; ++k) {
      const double phi = 2.0 * kPi * k / size;
      g.directions_.push_back({std::cos(phi), std::sin(phi), 0.0});
      g.weights_.push_back(2.0 * kPi / size);
    }
    return g;
  }
  const auto& gl = quad::gauss_legendre(size);
  const int azimuths = 2 * size;
  for (int i = 0; i < size; ++i) {
    const double z = gl.nodes[static_cast<std::size_t>(i)];
    const double r = std::sqrt(std::max(1.0 - z * z, 0.0));
    for (int k = 0; k < azimuths; ++k) {
      const double phi = 2.0 * kPi * (k + 0.5) / azimuths;
      g.directions_.push_back({r * std::cos(phi), r * std::sin(phi), z});
      g.weights_.push_back(gl.weights[static_cast<std::size_t>(i)] * 2.0 * kPi / azimuths);
    }
  }
  return g;
}

double DirectionGrid::integrate(const std::function<double(const Vec&)>& g) const {
  double s = 0.0;
  for (std::size_t i = 0; i < directions_.size(); ++i) s += weights_[i] * g(directions_[i]);
  return s;
}

double sphere_integral(int dim, const std::function<double(const Vec&)>& g) {
  if (dim == 2) {
    std::vector<double> breaks;
    for (int k = 1; k < 8; ++k) breaks.push_back(k * kPi / 4.0);
    quad::Options opts;
    opts.abs_tol = 1e-11;
    opts.max_intervals = 20000;
    return quad::integrate([&](double phi) { return g(Vec{std::cos(phi), std::sin(phi), 0.0}); }, 0.0, 2.0 * kPi,
                           opts, breaks)
        .value;
  }
  return DirectionGrid::uniform(3, 96).integrate(g);
}

double support_function(std::span<const Vec> points, const Vec& n) {
  if (points.empty()) throw ConfigError("support function of the empty set");
  double h = -std::numeric_limits<double>::infinity();
  for (const Vec& p : points) h = std::max(h, dot(p, n));
  return h;
}

double mu_integral(const Psf& psf, const Vec& n, const WeightFunction& f) {
  const HalfspaceProfile profile(psf, n);
  auto theta = [&](double t) { return profile.value(t); };
  return piecewise_sum(
      profile, f, [](double lo, double hi) { return hi - lo; },
      [&](double lo, double hi) { return quad::integral(theta, lo, hi, 1e-12); },
      [](double lo, double hi) { return hi - lo; });
}

double nu_integral(const Psf& psf, const Vec& n, const WeightFunction& f) {
  const HalfspaceProfile profile(psf, n);
  auto t_theta = [&](double t) { return t * profile.value(t); };
  auto half_square = [](double lo, double hi) { return 0.5 * (hi * hi - lo * lo); };
  return piecewise_sum(
      profile, f, half_square, [&](double lo, double hi) { return quad::integral(t_theta, lo, hi, 1e-12); },
      half_square);
}

double first_order_mean(const SurfaceMeasure& measure, int dim, const Psf& psf, const WeightFunction& f) {
  if (psf.dim() != dim) throw ConfigError("psf and surface dimensions differ");
  if (const auto* s = std::get_if<SphereUniform>(&measure)) {
    if (psf.rotation_invariant()) return s->mass * mu_integral(psf, first_axis(), f);
    const double scale = s->mass / unit_sphere_area(dim);
    return scale * sphere_integral(dim, [&](const Vec& n) { return mu_integral(psf, n, f); });
  }
  double total = 0.0;
  for (const auto& atom : std::get<PolytopeAtoms>(measure).atoms) total += atom.mass * mu_integral(psf, atom.normal, f);
  return total;
}

double bw_direction_term(const ConfigurationScheme& scheme, const Weights& weights, const Vec& n) {
  const std::size_t m = scheme.configurations();
  if (weights.values.size() != m) throw ConfigError("weight vector length must be 2^(n^d)");
  double total = 0.0;
  for (std::size_t l = 1; l + 1 < m; ++l) {
    const double w = weights.values[l];
    if (w == 0.0) continue;
    double h = -std::numeric_limits<double>::infinity();
    for (const Vec& b : scheme.black(l)) {
      for (const Vec& c : scheme.white(l)) h = std::max(h, dot(b - c, n));
    }
    total += w * std::max(-h, 0.0);
  }
  return total;
}

double bw_first_order_mean(const SurfaceMeasure& measure, int dim, const ConfigurationScheme& scheme,
                           const Weights& weights) {
  if (scheme.dim() != dim) throw ConfigError("scheme and surface dimensions differ");
  const std::size_t m = scheme.configurations();
  if (weights.values.size() == m && (weights.values.front() != 0.0 || weights.values.back() != 0.0)) {
    log(LogLevel::Info, "weights on the all-white/all-black configurations are ignored by the first-order limit");
  }
  if (const auto* s = std::get_if<SphereUniform>(&measure)) {
    const double scale = s->mass / unit_sphere_area(dim);
    return scale * sphere_integral(dim, [&](const Vec& n) { return bw_direction_term(scheme, weights, n); });
  }
  double total = 0.0;
  for (const auto& atom : std::get<PolytopeAtoms>(measure).atoms) {
    total += atom.mass * bw_direction_term(scheme, weights, atom.normal);
  }
  return total;
}

WorstCase worst_case_error(const Psf& psf, const WeightFunction& f) {
  const int d = psf.dim();
  auto err = [&](const Vec& n) { return std::abs(2.0 * mu_integral(psf, n, f) - 1.0); };
  if (psf.rotation_invariant()) return {err(first_axis()), first_axis()};
  WorstCase best;
  if (d == 2) {
    auto at = [&](double phi) { return err(Vec{std::cos(phi), std::sin(phi), 0.0}); };
    double previous = -1.0;
    double best_phi = 0.0;
    int size = 72;
    for (; size <= 4608; size *= 2) {
      double worst = -1.0;
      for (int k = 0; k < size; ++k) {
        const double phi = 2.0 * kPi * k / size;
        const double e = at(phi);
        if (e > worst) {
          worst = e;
          best_phi = phi;
        }
      }
      const bool settled = std::abs(worst - previous) < 1e-4;
      previous = worst;
      if (settled) break;
    }
    // Golden-section refinement in the neighbouring grid cells.
    const double h = 2.0 * kPi / size;
    double lo = best_phi - h;
    double hi = best_phi + h;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo);
    double x2 = lo + g * (hi - lo);
    double f1 = at(x1);
    double f2 = at(x2);
    for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
      if (f1 > f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = at(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = at(x2);
      }
    }
    const double phi = f1 > f2 ? x1 : x2;
    const double e = std::max(f1, f2);
    if (e >= previous) return {e, Vec{std::cos(phi), std::sin(phi), 0.0}};
    return {previous, Vec{std::cos(best_phi), std::sin(best_phi), 0.0}};
  }
  double previous = -1.0;
  for (int size = 8; size <= 64; size *= 2) {
    const DirectionGrid grid = DirectionGrid::uniform(3, size);
    WorstCase here{-1.0, {}};
    for (const Vec& n : grid.directions()) {
      const double e = err(n);
      if (e > here.error) here = {e, n};
    }
    for (const Vec& n : {Vec{1, 0, 0}, Vec{0, 1, 0}, Vec{0, 0, 1}}) {
      const double e = err(n);
      if (e > here.error) here = {e, n};
    }
    best = here;
    const bool settled = std::abs(here.error - previous) < 1e-4;
    previous = here.error;
    if (settled) break;
  }
  return best;
}

WeightFunction symmetrize(const WeightFunction& f) {
  auto points = f.point_values();
  for (auto& [x, y] : points) {
    if (x <= 0.0 || x >= 1.0) y = 0.0;
  }
  const WeightFunction inner = WeightFunction::table(f.pieces(), points);
  const WeightFunction sym = inner.plus(inner.reflected()).scaled(0.5);
  if (approx_equal(sym, f, 1e-14)) return f;
  return sym;
}

double hyperplane_marginal(const Psf& psf, double t) {
  require_radial(psf, "hyperplane moments");
  return psf.radial_marginal(t);
}

double hyperplane_second_moment(const Psf& psf, double t) {
  require_radial(psf, "hyperplane moments");
  return psf.radial_second_moment(t);
}

double psi_Q(const Psf& psf, double trace, double beta) {
  require_radial(psf, "psi_Q");
  const HalfspaceProfile profile(psf, first_axis());
  const double t = profile.phi(beta);
  const double m = psf.radial_marginal(t);
  if (!(m > 1e-12)) throw NumericalError("level is not a regular value (vanishing marginal)");
  return -0.5 * trace / (psf.dim() - 1) * psf.radial_second_moment(t) / m;
}

CurvatureConstants second_order_constants(const Psf& psf, const WeightFunction& f) {
  require_radial(psf, "second-order constants");
  const int d = psf.dim();
  const HalfspaceProfile profile(psf, first_axis());
  CurvatureConstants c;
  c.c1 = nu_integral(psf, first_axis(), f);
  for (const Jump& j : f.jumps()) {
    c.c2 += (j.right - j.left) * psi_Q(psf, 1.0, j.x);
  }
  auto M2 = [&](double t) { return psf.radial_second_moment(t); };
  for (const auto& p : f.pieces()) {
    const double slope = (p.y1 - p.y0) / (p.x1 - p.x0);
    if (slope == 0.0) continue;
    const LevelInterval li = open_level_set(profile, p.x0, p.x1);
    if (!(li.upper > li.lower)) continue;
    c.c3 -= slope / (2.0 * (d - 1)) * quad::integral(M2, li.lower, li.upper, 1e-13);
  }
  return c;
}

CurvatureConstants constants_c123(const Psf& psf, const WeightFunction& f) {
  if (!psf.rotation_invariant() || !psf.compact() || !psf.continuous()) {
    throw IncompatibleError("curvature constants need a rotation-invariant, continuous, compactly supported psf");
  }
  auto points = f.point_values();
  for (auto& [x, y] : points) {
    if (x <= 0.0 || x >= 1.0) y = 0.0;
  }
  const WeightFunction inner = WeightFunction::table(f.pieces(), points);
  if (!approx_equal(inner.plus(inner.reflected()), WeightFunction::zero(), 1e-12)) {
    throw IncompatibleError("curvature constants need an antisymmetric weight function f(x) = -f(1 - x)");
  }
  return second_order_constants(psf, f);
}

double d2_function(const Psf& psf, double t) {
  require_radial(psf, "d2");
  const int d = psf.dim();
  auto dd = [&](double s) { return psf.radial_second_moment(s) / (d - 1) - s * s * psf.radial_marginal(s); };
  return quad::integral(dd, 0.0, t, 1e-14);
}

Beta0 find_beta0(const Psf& psf) {
  if (!psf.rotation_invariant() || !psf.compact() || !psf.continuous()) {
    throw IncompatibleError("beta0 needs a rotation-invariant, continuous, compactly supported psf");
  }
  const int d = psf.dim();
  const double D = psf.support_radius();
  const double hi = D / std::sqrt(static_cast<double>(d));
  auto dd = [&](double s) { return psf.radial_second_moment(s) / (d - 1) - s * s * psf.radial_marginal(s); };
  const int scan = 2000;
  double prev_t = 0.0;
  double prev_v = dd(0.0);
  for (int i = 1; i <= scan; ++i) {
    const double t = hi * i / scan;
    const double v = dd(t);
    if (prev_v > 0.0 && v <= 0.0) {
      Beta0 out;
      out.t0 = bisect_root(dd, prev_t, t, 1e-14);
      out.d2 = d2_function(psf, out.t0);
      if (!(out.d2 > 0.0)) throw NumericalError("d2 has no positive interior maximum");
      out.beta0 = HalfspaceProfile(psf, first_axis()).value(out.t0);
      return out;
    }
    prev_t = t;
    prev_v = v;
  }
  throw NumericalError("no interior maximum of d2 found");
}

double AsymptoticPrediction::mean(int q, int dim, double a) const { return std::pow(a, q - dim) * integral(a); }

double AsymptoticPrediction::first_order_mean(int q, int dim, double a) const {
  return std::pow(a, q - dim) * (order0 + a * order1);
}

AsymptoticPrediction second_order_mean_sphere(const Psf& psf, const WeightFunction& f, double radius) {
  require_radial(psf, "second-order sphere prediction");
  if (!(radius > 0.0)) throw ConfigError("sphere radius must be positive");
  if (f(1.0) != 0.0) throw IncompatibleError("prediction needs f(1) = 0");
  const int d = psf.dim();
  const double area = unit_sphere_area(d) * std::pow(radius, d - 1);
  const double trace = (d - 1) / radius;
  AsymptoticPrediction p;
  p.order1 = area * mu_integral(psf, first_axis(), f);
  p.notes.push_back("order1: surface area times mu integral");
  const CurvatureConstants c = second_order_constants(psf, f);
  p.order2 = area * trace * c.sum();
  p.second_order = true;
  std::ostringstream msg;
  msg << "order2: area * trace(II) * (c1 + c2 + c3) with c1=" << c.c1 << " c2=" << c.c2 << " c3=" << c.c3;
  p.notes.push_back(msg.str());
  if (!f.jumps().empty()) p.notes.push_back("warning: jump-sum extension for discontinuous f");
  if (!psf.continuous() || !psf.compact()) p.notes.push_back("warning: psf outside the second-order hypotheses");
  return p;
}

double mean_curvature_limit(const Psf& psf, const WeightFunction& f) {
  return 2.0 * kPi * constants_c123(psf, f).sum();
}

}  // namespace giv
