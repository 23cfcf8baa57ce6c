#include "giv/study.hpp"

#include <charconv>
#include <map>
#include <mutex>
#include <cmath>
#include <numbers>
#include <sstream>

#include "giv/error.hpp"
#include "giv/imaging.hpp"
#include "giv/parallel.hpp"
#include "giv/theory.hpp"

namespace giv {

namespace {

Weights weights_from_spec(const EstimatorSpec& spec, int dim) {
  if (!spec.preset.empty()) {
    if (spec.preset == "bw_surface_2x2") {
      if (dim != 2) throw ConfigError("preset bw_surface_2x2 is two-dimensional");
      return bw_surface_preset_2d();
    }
    throw ConfigError("unknown weight preset: " + spec.preset);
  }
  if (!spec.weights) throw ConfigError("configuration estimators need 'weights' or 'preset'");
  const ConfigurationScheme scheme(dim, spec.cell);
  if (spec.weights->values.size() != scheme.configurations()) {
    throw ConfigError("weights must have 2^(n^d) = " + std::to_string(scheme.configurations()) + " entries");
  }
  return *spec.weights;
}

std::string type_name(EstimatorSpec::Type t) {
  switch (t) {
    case EstimatorSpec::Type::Grey: return "grey";
    case EstimatorSpec::Type::Surface: return "surface";
    case EstimatorSpec::Type::MeanCurvature: return "mean_curvature";
    case EstimatorSpec::Type::Thresholded: return "thresholded";
    case EstimatorSpec::Type::Midpoint: return "midpoint";
  }
  return "grey";
}

bool grey_type(EstimatorSpec::Type t) {
  return t == EstimatorSpec::Type::Grey || t == EstimatorSpec::Type::Surface || t == EstimatorSpec::Type::MeanCurvature;
}

double sample_mean(const std::vector<double>& xs) { return pairwise_sum(xs) / static_cast<double>(xs.size()); }

double standard_error(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - mean) * (xs[i] - mean);
  const double var = pairwise_sum(sq) / static_cast<double>(xs.size() - 1);
  return std::sqrt(var / static_cast<double>(xs.size()));
}

// Standard error of the overall mean from the spread of the replicate means.
double replicate_error(const std::vector<double>& xs, int replicates) {
  const auto r = static_cast<std::size_t>(replicates);
  std::vector<std::vector<double>> groups(r);
  for (std::size_t k = 0; k < xs.size(); ++k) groups[k % r].push_back(xs[k]);
  std::vector<double> means;
  for (const auto& g : groups) means.push_back(sample_mean(g));
  return standard_error(means, sample_mean(means));
}

}  // namespace

EstimatorSpec estimator_spec_from_json(const Json& j, int dim) {
  if (!j.is_object()) throw ConfigError("estimator must be an object");
  EstimatorSpec s;
  const std::string type = j.value("kind", std::string("surface"));
  if (j.contains("q")) s.q = j.at("q").get<int>();
  if (j.contains("beta")) s.beta = j.at("beta").get<double>();
  if (j.contains("omega")) s.omega = j.at("omega").get<double>();
  s.scale = j.value("scale", 1.0);
  if (type == "grey") {
    s.type = EstimatorSpec::Type::Grey;
    if (!j.contains("weight_function")) throw ConfigError("grey estimator needs 'weight_function'");
    s.f = weight_function_from_json(j.at("weight_function"));
  } else if (type == "surface") {
    s.type = EstimatorSpec::Type::Surface;
    if (!s.beta) s.beta = 0.3;
  } else if (type == "mean_curvature") {
    s.type = EstimatorSpec::Type::MeanCurvature;
    const std::string variant = j.value("variant", std::string("linear"));
    if (variant == "linear") {
      s.variant = CurvatureVariant::Linear;
    } else if (variant == "antisymmetric_count") {
      s.variant = CurvatureVariant::AntisymmetricCount;
    } else {
      throw ConfigError("unknown mean-curvature variant: " + variant);
    }
  } else if (type == "thresholded" || type == "midpoint") {
    s.type = type == "thresholded" ? EstimatorSpec::Type::Thresholded : EstimatorSpec::Type::Midpoint;
    s.cell = j.value("n", 2);
    s.preset = j.value("preset", std::string());
    if (j.contains("weights")) {
      Weights w;
      w.values = j.at("weights").get<std::vector<double>>();
      w.q = s.q.value_or(dim - 1);
      s.weights = w;
    }
    if (type == "thresholded" && !s.beta) throw ConfigError("thresholded estimator needs 'beta'");
  } else {
    throw ConfigError("unknown estimator type: " + type);
  }
  return s;
}

Json to_json(const EstimatorSpec& spec) {
  Json j{{"kind", type_name(spec.type)}, {"scale", spec.scale}};
  if (spec.q) j["q"] = *spec.q;
  if (spec.beta) j["beta"] = *spec.beta;
  if (spec.omega) j["omega"] = *spec.omega;
  if (spec.type == EstimatorSpec::Type::Grey) j["weight_function"] = to_json(spec.f);
  if (spec.type == EstimatorSpec::Type::MeanCurvature) {
    j["variant"] = spec.variant == CurvatureVariant::Linear ? "linear" : "antisymmetric_count";
  }
  if (spec.type == EstimatorSpec::Type::Thresholded || spec.type == EstimatorSpec::Type::Midpoint) {
    j["n"] = spec.cell;
    if (!spec.preset.empty()) j["preset"] = spec.preset;
    if (spec.weights) j["weights"] = spec.weights->values;
  }
  return j;
}

StudyConfig study_config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("study config must be a JSON object");
  StudyConfig c;
  c.source = j;
  c.dim = j.value("dim", 2);
  if (c.dim != 2 && c.dim != 3) throw ConfigError("dim must be 2 or 3");
  if (!j.contains("phantom") || !j.contains("psf")) throw ConfigError("config needs 'phantom' and 'psf'");
  c.phantom = j.at("phantom");
  c.psf = j.at("psf");
  (void)phantom_from_json(c.phantom, c.dim);
  (void)psf_from_json(c.psf, c.dim);
  c.estimator = estimator_spec_from_json(j.value("estimator", Json::object()), c.dim);
  if (j.contains("resolutions")) c.resolutions = j.at("resolutions").get<std::vector<double>>();
  if (c.resolutions.empty()) throw ConfigError("config needs a nonempty 'resolutions' list");
  for (std::size_t i = 0; i < c.resolutions.size(); ++i) {
    if (!(c.resolutions[i] > 0.0)) throw ConfigError("resolutions must be positive");
    if (i > 0 && !(c.resolutions[i] < c.resolutions[i - 1])) throw ConfigError("resolutions must strictly decrease");
  }
  c.offsets = j.value("offsets", 1);
  if (c.offsets < 1) throw ConfigError("offsets must be >= 1");
  c.seed = j.value("seed", std::uint64_t{1});
  const std::string design = j.value("offset_design", std::string("iid"));
  if (design == "iid") {
    c.design = OffsetDesign::Iid;
  } else if (design == "lattice") {
    c.design = OffsetDesign::ShiftedLattice;
  } else {
    throw ConfigError("offset_design must be 'iid' or 'lattice'");
  }
  c.replicates = j.value("replicates", 10);
  if (c.design == OffsetDesign::ShiftedLattice && (c.replicates < 2 || c.replicates > c.offsets)) {
    throw ConfigError("the lattice design needs 2 <= replicates <= offsets");
  }
  c.threads = j.value("threads", 1);
  if (j.contains("window")) c.window = window_from_json(j.at("window"), c.dim);
  if (j.contains("output")) {
    c.csv_path = j.at("output").value("csv", std::string());
    c.json_path = j.at("output").value("json", std::string());
  }
  return c;
}

ResolvedEstimator resolve_estimator(const EstimatorSpec& spec, const Psf& psf, int dim) {
  ResolvedEstimator r;
  r.type = spec.type;
  r.scale = spec.scale;
  r.cell = spec.cell;
  r.description = to_json(spec);
  switch (spec.type) {
    case EstimatorSpec::Type::Grey:
      check_weight_compatibility(psf, spec.f);
      r.f = spec.f;
      r.q = spec.q.value_or(dim - 1);
      break;
    case EstimatorSpec::Type::Surface: {
      const double beta = spec.beta.value_or(0.3);
      const ScaledWeightFunction s = make_surface_estimator(psf, beta, spec.omega.value_or(1.0 - beta));
      r.f = s.f;
      r.scale = spec.scale * s.scale;
      r.q = s.q;
      break;
    }
    case EstimatorSpec::Type::MeanCurvature: {
      const CurvatureEstimator c = make_mean_curvature_estimator(psf, spec.variant, spec.beta);
      r.f = c.estimator.f;
      r.scale = spec.scale * c.estimator.scale;
      r.q = c.estimator.q;
      r.description["t0"] = c.beta0.t0;
      r.description["beta0"] = c.beta0.beta0;
      r.description["c1"] = c.constants.c1;
      r.description["c2"] = c.constants.c2;
      r.description["c3"] = c.constants.c3;
      break;
    }
    case EstimatorSpec::Type::Thresholded:
    case EstimatorSpec::Type::Midpoint:
      r.weights = weights_from_spec(spec, dim);
      if (spec.q) r.weights.q = *spec.q;
      r.q = r.weights.q;
      if (spec.type == EstimatorSpec::Type::Thresholded) {
        r.beta = spec.beta.value_or(0.5);
        if (!(r.beta >= 0.0 && r.beta < 1.0)) throw ConfigError("threshold must lie in [0, 1)");
      }
      r.description["weights"] = r.weights.values;
      break;
  }
  if (grey_type(spec.type)) r.description["weight_function"] = to_json(r.f);
  r.description["resolved_scale"] = r.scale;
  r.description["q"] = r.q;
  return r;
}

double ResolvedEstimator::evaluate(const Phantom& phantom, const GreyImage& image, int threads) const {
  const double a = image.lattice.spacing();
  if (grey_type(type)) return scale * grey_estimate(image, f, a, q);
  const ConfigurationScheme scheme(image.lattice.dim(), cell);
  const BinaryImage bits = type == EstimatorSpec::Type::Thresholded
                               ? threshold(image, beta)
                               : midpoint_binary(phantom, image.lattice, image.window, threads);
  return scale * bw_estimate(count_configurations(bits, scheme, true), weights, a);
}

Prediction predict(const StudyConfig& config) {
  const Psf psf = psf_from_json(config.psf, config.dim);
  return predict(config, resolve_estimator(config.estimator, psf, config.dim));
}

Prediction predict(const StudyConfig& config, const ResolvedEstimator& est) {
  const int d = config.dim;
  const Phantom phantom = phantom_from_json(config.phantom, d);
  const Psf psf = psf_from_json(config.psf, d);
  Prediction p;
  auto fill = [&](auto first, auto second) {
    for (double a : config.resolutions) p.rows.push_back({a, first(a), second(a)});
  };
  auto none = [](double) { return std::optional<double>{}; };
  if (!phantom.bounded()) {
    p.notes.push_back("no prediction: unbounded phantom");
    fill(none, none);
    return p;
  }
  try {
    if (grey_type(est.type)) {
      const WeightFunction fe = est.f.scaled(est.scale);
      if (fe(1.0) != 0.0) {
        p.notes.push_back("no prediction: f(1) != 0 adds interior volume terms");
        fill(none, none);
        return p;
      }
      const auto* ball = std::get_if<BallPhantom>(&phantom.variant());
      if (ball && psf.rotation_invariant()) {
        try {
          const AsymptoticPrediction ap = second_order_mean_sphere(psf, fe, ball->radius);
          p.formula = "sphere_second_order_expansion";
          p.notes = ap.notes;
          fill([&](double a) { return std::optional<double>(ap.first_order_mean(est.q, d, a)); },
               [&](double a) { return std::optional<double>(ap.mean(est.q, d, a)); });
          return p;
        } catch (const IncompatibleError& e) {
          p.notes.push_back(std::string("second order unavailable: ") + e.what());
        }
      }
      const double limit = first_order_mean(phantom.surface_measure(), d, psf, fe);
      p.formula = "surface_integral_of_mu";
      fill([&](double a) { return std::optional<double>(std::pow(a, est.q - d + 1) * limit); }, none);
      return p;
    }
    const ConfigurationScheme scheme(d, est.cell);
    const double limit = est.scale * bw_first_order_mean(phantom.surface_measure(), d, scheme, est.weights);
    p.formula = "configuration_support_function_integral";
    fill([&](double a) { return std::optional<double>(std::pow(a, est.q - d + 1) * limit); }, none);
  } catch (const IncompatibleError& e) {
    p.formula = "none";
    p.notes.push_back(std::string("no prediction: ") + e.what());
    p.rows.clear();
    fill(none, none);
  }
  return p;
}

namespace {

// Generating vector (1, g, g^2 mod N) of a rank-1 lattice with N points in
// [0, 1)^d, g chosen to maximize the minimal toroidal distance.
std::array<std::uint64_t, 3> korobov_vector(std::uint64_t n, int dim) {
  std::array<std::uint64_t, 3> best{1, 1, 1};
  if (n < 3) return best;
  double best_dist = -1.0;
  const std::uint64_t limit = std::min<std::uint64_t>(n, 2048);
  for (std::uint64_t g = 1; g < limit; ++g) {
    const std::array<std::uint64_t, 3> z{1, g, (g * g) % n};
    double dmin = 1e300;
    for (std::uint64_t k = 1; k < n && dmin > best_dist; ++k) {
      double d2 = 0.0;
      for (int i = 0; i < dim; ++i) {
        double u = static_cast<double>((k * z[i]) % n) / static_cast<double>(n);
        u = std::min(u, 1.0 - u);
        d2 += u * u;
      }
      dmin = std::min(dmin, d2);
    }
    if (dmin > best_dist) {
      best_dist = dmin;
      best = z;
    }
  }
  return best;
}

std::array<std::uint64_t, 3> cached_korobov_vector(std::uint64_t n, int dim) {
  static std::mutex mutex;
  static std::map<std::pair<std::uint64_t, int>, std::array<std::uint64_t, 3>> cache;
  std::lock_guard lock(mutex);
  const auto key = std::make_pair(n, dim);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, korobov_vector(n, dim)).first;
  return it->second;
}

}  // namespace

Vec study_offset(const StudyConfig& config, double a, std::size_t resolution_index, std::size_t offset_index) {
  const int d = config.dim;
  Vec c{};
  if (config.design == OffsetDesign::Iid) {
    SeedStream stream(config.seed, resolution_index, offset_index);
    for (int i = 0; i < d; ++i) c[i] = a * stream.uniform();
    return c;
  }
  const auto reps = static_cast<std::uint64_t>(config.replicates);
  const std::uint64_t replicate = offset_index % reps;
  const std::uint64_t index = offset_index / reps;
  const std::uint64_t total = static_cast<std::uint64_t>(config.offsets);
  const std::uint64_t n = total / reps + (replicate < total % reps ? 1 : 0);
  SeedStream stream(config.seed, resolution_index, std::numeric_limits<std::uint64_t>::max() - replicate);
  const auto z = cached_korobov_vector(n, d);
  for (int i = 0; i < d; ++i) {
    const double u = static_cast<double>((index * z[i]) % n) / static_cast<double>(n) + stream.uniform();
    c[i] = a * (u - std::floor(u));
  }
  return c;
}

std::vector<StudyReport> run_study(const StudyConfig& config, const std::vector<EstimatorSpec>& estimators) {
  const int d = config.dim;
  const Phantom phantom = phantom_from_json(config.phantom, d);
  const Psf psf = psf_from_json(config.psf, d);
  std::vector<ResolvedEstimator> resolved;
  int cell = 1;
  for (const auto& spec : estimators) {
    resolved.push_back(resolve_estimator(spec, psf, d));
    cell = std::max(cell, resolved.back().cell);
  }
  std::vector<Prediction> predictions;
  for (const auto& r : resolved) predictions.push_back(predict(config, r));

  std::vector<StudyReport> reports(resolved.size());
  const std::size_t n = static_cast<std::size_t>(config.offsets);
  for (std::size_t ri = 0; ri < config.resolutions.size(); ++ri) {
    const double a = config.resolutions[ri];
    const Window window = config.window ? *config.window : auto_window(phantom, psf, a, cell);
    std::vector<std::vector<double>> samples(resolved.size(), std::vector<double>(n, 0.0));
    parallel_for(n, config.threads, [&](std::size_t k) {
      const Lattice lattice = Lattice::identity(d, a, study_offset(config, a, ri, k));
      RenderOptions opts;
      opts.cell_size = cell;
      const GreyImage image = render(phantom, psf, lattice, window, opts);
      for (std::size_t e = 0; e < resolved.size(); ++e) samples[e][k] = resolved[e].evaluate(phantom, image);
    });
    for (std::size_t e = 0; e < resolved.size(); ++e) {
      StudyRow row;
      row.a = a;
      row.mean = sample_mean(samples[e]);
      row.std_error = config.design == OffsetDesign::Iid ? standard_error(samples[e], row.mean)
                                                         : replicate_error(samples[e], config.replicates);
      const int q = resolved[e].q;
      row.reference = phantom.bounded() && q >= 0 && q <= d ? phantom.intrinsic_volume(q)
                                                             : std::numeric_limits<double>::quiet_NaN();
      row.relative_bias = row.mean / row.reference - 1.0;
      row.first_order = predictions[e].rows[ri].first_order;
      row.second_order = predictions[e].rows[ri].second_order;
      row.samples = std::move(samples[e]);
      reports[e].rows.push_back(std::move(row));
    }
  }
  for (std::size_t e = 0; e < resolved.size(); ++e) {
    Json rows = Json::array();
    for (const auto& r : reports[e].rows) {
      rows.push_back({{"a", r.a}, {"mean", r.mean}, {"std_error", r.std_error}, {"reference", r.reference},
                      {"first_order", r.first_order ? Json(*r.first_order) : Json(nullptr)},
                      {"second_order", r.second_order ? Json(*r.second_order) : Json(nullptr)},
                      {"relative_bias", r.relative_bias}});
    }
    reports[e].metadata = {
        {"version", kVersion},
        {"config", config.source},
        {"estimator", resolved[e].description},
        {"prediction", {{"formula", predictions[e].formula}, {"notes", predictions[e].notes}}},
        {"intensity_path", to_string(IntensityEvaluator(phantom, psf, config.resolutions.front()).path())},
        {"offset_design", config.design == OffsetDesign::Iid ? "iid" : "lattice"},
        {"replicates", config.design == OffsetDesign::Iid ? Json(nullptr) : Json(config.replicates)},
        {"rows", rows}};
  }
  return reports;
}

StudyReport run_study(const StudyConfig& config) { return run_study(config, {config.estimator}).front(); }

std::vector<StudyReport> sweep_beta(const StudyConfig& config, const std::vector<double>& betas) {
  std::vector<EstimatorSpec> specs;
  for (double beta : betas) {
    EstimatorSpec s = config.estimator;
    s.beta = beta;
    if (s.type == EstimatorSpec::Type::Surface) s.omega.reset();
    if (s.type == EstimatorSpec::Type::Grey) {
      switch (s.f.kind()) {
        case WeightFunction::Kind::SymmetricIndicator: s.f = WeightFunction::symmetric_indicator(beta); break;
        case WeightFunction::Kind::AntisymmetricCount: s.f = WeightFunction::antisymmetric_count(beta); break;
        case WeightFunction::Kind::Indicator:
          s.f = WeightFunction::indicator(beta, s.f.omega(), s.f.closed_left(), s.f.closed_right());
          break;
        case WeightFunction::Kind::ScaledLinear: s.f = WeightFunction::scaled_linear(s.f.scale(), beta); break;
        default: throw ConfigError("this weight function has no level parameter to sweep");
      }
    }
    specs.push_back(s);
  }
  return run_study(config, specs);
}

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string optional_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

void append_row(std::string& out, const StudyRow& r) {
  out += format_number(r.a) + ',' + format_number(r.mean) + ',' + format_number(r.std_error) + ',' +
         format_number(r.reference) + ',' + optional_number(r.first_order) + ',' + optional_number(r.second_order) +
         ',' + format_number(r.relative_bias) + '\n';
}

constexpr const char* kHeader = "a,mean,std_error,reference,first_order,second_order,relative_bias";

}  // namespace

std::string report_csv(const StudyReport& report) {
  std::string out = std::string(kHeader) + '\n';
  for (const auto& r : report.rows) append_row(out, r);
  return out;
}

std::string sweep_csv(const std::vector<double>& betas, const std::vector<StudyReport>& reports) {
  std::string out = std::string("beta,") + kHeader + '\n';
  for (std::size_t i = 0; i < reports.size(); ++i) {
    for (const auto& r : reports[i].rows) {
      out += format_number(betas[i]) + ',';
      append_row(out, r);
    }
  }
  return out;
}

std::string prediction_csv(const Prediction& prediction) {
  std::string out = "a,first_order,second_order,formula\n";
  for (const auto& r : prediction.rows) {
    out += format_number(r.a) + ',' + optional_number(r.first_order) + ',' + optional_number(r.second_order) + ',' +
           prediction.formula + '\n';
  }
  return out;
}

}  // namespace giv
