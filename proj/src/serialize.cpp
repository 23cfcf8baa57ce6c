#include "giv/serialize.hpp"

#include <cmath>
#include <numbers>

#include "giv/error.hpp"

namespace giv {

namespace {

double number(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) throw ConfigError(std::string("missing numeric field '") + key + "'");
  return j.at(key).get<double>();
}

std::string kind_of(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ConfigError("object with a string field 'kind' expected");
  }
  return j.at("kind").get<std::string>();
}

}  // namespace

Json vec_to_json(const Vec& v, int dim) {
  Json out = Json::array();
  for (int i = 0; i < dim; ++i) out.push_back(v[i]);
  return out;
}

Vec vec_from_json(const Json& j, int dim, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    throw ConfigError(std::string(what) + " must be an array of " + std::to_string(dim) + " numbers");
  }
  Vec v{};
  for (int i = 0; i < dim; ++i) {
    if (!j[static_cast<std::size_t>(i)].is_number()) throw ConfigError(std::string(what) + " must contain numbers");
    v[i] = j[static_cast<std::size_t>(i)].get<double>();
  }
  return v;
}

Json to_json(const Psf& psf) {
  Json out{{"kind", psf.kind_name()}};
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BallIndicator> || std::is_same_v<T, Bump>) {
          out["radius"] = v.radius;
        } else if constexpr (std::is_same_v<T, BoxIndicator>) {
          out["half_widths"] = vec_to_json(v.half_widths, psf.dim());
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          out["sigma"] = v.sigma;
        } else {
          out["radii"] = v.radii;
          out["density"] = v.density;
          out["normalization"] = v.normalization;
        }
      },
      psf.variant());
  return out;
}

Psf psf_from_json(const Json& j, int dim) {
  const std::string kind = kind_of(j);
  if (kind == "ball_indicator") return Psf::ball_indicator(dim, number(j, "radius"));
  if (kind == "bump") return Psf::bump(dim, number(j, "radius"));
  if (kind == "gaussian") return Psf::gaussian(dim, number(j, "sigma"));
  if (kind == "box_indicator") return Psf::box_indicator(dim, vec_from_json(j.at("half_widths"), dim, "half_widths"));
  if (kind == "tabulated_radial") {
    if (j.contains("file")) return Psf::load_tabulated_csv(dim, j.at("file").get<std::string>());
    if (j.contains("normalization")) {
      return Psf(dim, TabulatedRadial{j.at("radii").get<std::vector<double>>(),
                                      j.at("density").get<std::vector<double>>(), number(j, "normalization")});
    }
    return Psf::tabulated(dim, j.at("radii").get<std::vector<double>>(), j.at("density").get<std::vector<double>>());
  }
  throw ConfigError("unknown psf kind: " + kind);
}

Json to_json(const Phantom& phantom) {
  const int d = phantom.dim();
  Json out{{"kind", phantom.kind_name()}};
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BallPhantom>) {
          out["center"] = vec_to_json(v.center, d);
          out["radius"] = v.radius;
        } else if constexpr (std::is_same_v<T, BoxPhantom>) {
          out["center"] = vec_to_json(v.center, d);
          out["half_widths"] = vec_to_json(v.half_widths, d);
          Json rot = Json::array();
          for (int k = 0; k < d; ++k) rot.push_back(vec_to_json(v.rotation[k], d));
          out["rotation"] = rot;
        } else {
          out["normal"] = vec_to_json(v.normal, d);
          out["offset"] = v.offset;
        }
      },
      phantom.variant());
  return out;
}

Phantom phantom_from_json(const Json& j, int dim) {
  const std::string kind = kind_of(j);
  const Vec center = j.contains("center") ? vec_from_json(j.at("center"), dim, "center") : Vec{};
  if (kind == "ball") return Phantom::ball(dim, center, number(j, "radius"));
  if (kind == "half_space") {
    return Phantom::half_space(dim, vec_from_json(j.at("normal"), dim, "normal"), j.value("offset", 0.0));
  }
  if (kind == "box") {
    const Vec h = vec_from_json(j.at("half_widths"), dim, "half_widths");
    if (j.contains("angle_deg")) {
      if (dim != 2) throw ConfigError("angle_deg applies to 2D boxes only");
      return Phantom::rectangle(center, h[0], h[1], number(j, "angle_deg") * std::numbers::pi / 180.0);
    }
    BoxPhantom b{center, h, {Vec{1, 0, 0}, Vec{0, 1, 0}, Vec{0, 0, 1}}};
    if (j.contains("rotation")) {
      const Json& r = j.at("rotation");
      if (!r.is_array() || static_cast<int>(r.size()) != dim) throw ConfigError("rotation must list d axis vectors");
      for (int k = 0; k < dim; ++k) b.rotation[k] = vec_from_json(r[static_cast<std::size_t>(k)], dim, "rotation axis");
    }
    return Phantom(dim, b);
  }
  throw ConfigError("unknown phantom kind: " + kind);
}

Json to_json(const WeightFunction& f) {
  Json out{{"kind", f.kind_name()}};
  switch (f.kind()) {
    case WeightFunction::Kind::Zero:
      break;
    case WeightFunction::Kind::Indicator:
      out["beta"] = f.beta();
      out["omega"] = f.omega();
      out["closed_left"] = f.closed_left();
      out["closed_right"] = f.closed_right();
      break;
    case WeightFunction::Kind::SymmetricIndicator:
    case WeightFunction::Kind::AntisymmetricCount:
      out["beta"] = f.beta();
      break;
    case WeightFunction::Kind::ScaledLinear:
      out["scale"] = f.scale();
      out["beta0"] = f.beta();
      break;
    case WeightFunction::Kind::Table: {
      Json pieces = Json::array();
      for (const auto& p : f.pieces()) pieces.push_back({p.x0, p.x1, p.y0, p.y1});
      Json points = Json::array();
      for (const auto& [x, y] : f.point_values()) points.push_back({x, y});
      out["pieces"] = pieces;
      out["points"] = points;
      break;
    }
  }
  return out;
}

WeightFunction weight_function_from_json(const Json& j) {
  const std::string kind = kind_of(j);
  if (kind == "zero") return WeightFunction::zero();
  if (kind == "indicator") {
    return WeightFunction::indicator(number(j, "beta"), number(j, "omega"), j.value("closed_left", false),
                                     j.value("closed_right", true));
  }
  if (kind == "symmetric_indicator") return WeightFunction::symmetric_indicator(number(j, "beta"));
  if (kind == "antisymmetric_count") return WeightFunction::antisymmetric_count(number(j, "beta"));
  if (kind == "scaled_linear") return WeightFunction::scaled_linear(number(j, "scale"), number(j, "beta0"));
  if (kind == "table") {
    std::vector<LinearPiece> pieces;
    for (const auto& p : j.at("pieces")) {
      if (!p.is_array() || p.size() != 4) throw ConfigError("table pieces are [x0, x1, y0, y1]");
      pieces.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>(), p[3].get<double>()});
    }
    std::vector<std::pair<double, double>> points;
    if (j.contains("points")) {
      for (const auto& p : j.at("points")) {
        if (!p.is_array() || p.size() != 2) throw ConfigError("table points are [x, y]");
        points.emplace_back(p[0].get<double>(), p[1].get<double>());
      }
    }
    return WeightFunction::table(pieces, points);
  }
  throw ConfigError("unknown weight function kind: " + kind);
}

Json to_json(const Lattice& lattice) {
  const int d = lattice.dim();
  Json basis = Json::array();
  for (int k = 0; k < d; ++k) basis.push_back(vec_to_json(lattice.basis()[k], d));
  return {{"dim", d}, {"basis", basis}, {"spacing", lattice.spacing()}, {"offset", vec_to_json(lattice.offset(), d)}};
}

Lattice lattice_from_json(const Json& j) {
  const int d = j.at("dim").get<int>();
  std::array<Vec, 3> basis{Vec{1, 0, 0}, Vec{0, 1, 0}, Vec{0, 0, 1}};
  if (j.contains("basis")) {
    const Json& b = j.at("basis");
    if (!b.is_array() || static_cast<int>(b.size()) != d) throw ConfigError("basis must list d column vectors");
    for (int k = 0; k < d; ++k) basis[k] = vec_from_json(b[static_cast<std::size_t>(k)], d, "basis vector");
  }
  const Vec offset = j.contains("offset") ? vec_from_json(j.at("offset"), d, "offset") : Vec{};
  return Lattice(d, basis, number(j, "spacing"), offset);
}

Json to_json(const Window& window) {
  return {{"lo", vec_to_json(window.lo, window.dim)}, {"hi", vec_to_json(window.hi, window.dim)}};
}

Window window_from_json(const Json& j, int dim) {
  Window w;
  w.dim = dim;
  w.lo = vec_from_json(j.at("lo"), dim, "window lo");
  w.hi = vec_from_json(j.at("hi"), dim, "window hi");
  return w;
}

Json to_json(const IndexBox& box) {
  Json lo = Json::array();
  Json count = Json::array();
  for (int i = 0; i < box.dim; ++i) {
    lo.push_back(box.lo[i]);
    count.push_back(box.count[i]);
  }
  return {{"dim", box.dim}, {"lo", lo}, {"count", count}};
}

IndexBox index_box_from_json(const Json& j) {
  IndexBox box;
  box.dim = j.at("dim").get<int>();
  for (int i = 0; i < box.dim; ++i) {
    box.lo[i] = j.at("lo").at(static_cast<std::size_t>(i)).get<std::int64_t>();
    box.count[i] = j.at("count").at(static_cast<std::size_t>(i)).get<std::int64_t>();
  }
  return box;
}

}  // namespace giv
