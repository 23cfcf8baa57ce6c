#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "giv/error.hpp"
#include "giv/image_io.hpp"
#include "giv/imaging.hpp"
#include "giv/log.hpp"
#include "giv/study.hpp"
#include "giv/theory.hpp"

namespace {

using giv::Json;

struct Common {
  std::string config_path;
  std::optional<int> dim;
  std::string phantom;
  std::string psf;
  std::string estimator;
  std::optional<std::uint64_t> seed;
  std::optional<int> offsets;
  std::optional<int> threads;
  std::vector<double> resolutions;
  std::string design;
  std::optional<int> replicates;
  std::string csv;
  std::string json;
  bool quiet = false;
  bool verbose = false;
};

Json parse_json_text(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw giv::ConfigError(std::string("malformed JSON in ") + what + ": " + e.what());
  }
}

Json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw giv::ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path.c_str());
}

// Config file first, then flag overrides.
Json merged_config(const Common& c) {
  Json j = c.config_path.empty() ? Json::object() : load_file(c.config_path);
  if (!j.is_object()) throw giv::ConfigError("config must be a JSON object");
  if (c.dim) j["dim"] = *c.dim;
  if (!c.phantom.empty()) j["phantom"] = parse_json_text(c.phantom, "--phantom");
  if (!c.psf.empty()) j["psf"] = parse_json_text(c.psf, "--psf");
  if (!c.estimator.empty()) j["estimator"] = parse_json_text(c.estimator, "--estimator");
  if (c.seed) j["seed"] = *c.seed;
  if (c.offsets) j["offsets"] = *c.offsets;
  if (!c.resolutions.empty()) j["resolutions"] = c.resolutions;
  if (!c.design.empty()) j["offset_design"] = c.design;
  if (c.replicates) j["replicates"] = *c.replicates;
  if (!c.csv.empty()) j["output"]["csv"] = c.csv;
  if (!c.json.empty()) j["output"]["json"] = c.json;
  return j;
}

giv::StudyConfig study_config(const Common& c) {
  Json j = merged_config(c);
  giv::StudyConfig config = giv::study_config_from_json(j);
  if (c.threads) config.threads = *c.threads;
  return config;
}

void add_common(CLI::App* app, Common& c, bool study_keys) {
  app->add_option("-c,--config", c.config_path, "JSON configuration file");
  app->add_option("--dim", c.dim, "Dimension (2 or 3)");
  app->add_option("--phantom", c.phantom, "Phantom as inline JSON");
  app->add_option("--psf", c.psf, "Point spread function as inline JSON");
  app->add_option("--estimator", c.estimator, "Estimator as inline JSON");
  app->add_flag("-q,--quiet", c.quiet, "Suppress informational messages");
  app->add_flag("-v,--verbose", c.verbose, "Debug messages");
  if (!study_keys) return;
  app->add_option("--seed", c.seed, "Master seed");
  app->add_option("--offsets", c.offsets, "Offsets per resolution");
  app->add_option("--threads", c.threads, "Worker threads");
  app->add_option("--resolutions", c.resolutions, "Lattice spacings, strictly decreasing");
  app->add_option("--offset-design", c.design, "iid or lattice");
  app->add_option("--replicates", c.replicates, "Independent random shifts for the lattice design");
  app->add_option("--csv", c.csv, "CSV output path (default stdout)");
  app->add_option("--json", c.json, "JSON metadata output path");
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw giv::ConfigError("cannot write " + path);
  out << text;
}

Json report_json(const giv::StudyReport& report) { return report.metadata; }

int cmd_profile(const Common& c, const std::vector<double>& direction, const std::vector<double>& ts,
                const std::vector<double>& betas) {
  const Json j = merged_config(c);
  const int dim = j.value("dim", 2);
  if (!j.contains("psf")) throw giv::ConfigError("profile needs a psf");
  const giv::Psf psf = giv::psf_from_json(j.at("psf"), dim);
  giv::Vec n{};
  if (direction.empty()) {
    n[0] = 1.0;
  } else {
    if (static_cast<int>(direction.size()) != dim) throw giv::ConfigError("--direction needs dim components");
    for (int i = 0; i < dim; ++i) n[i] = direction[i];
  }
  const giv::HalfspaceProfile profile(psf, n);
  std::ostringstream out;
  if (!betas.empty()) {
    out << "beta,phi,phi_tilde\n";
    for (double b : betas) {
      out << giv::format_number(b) << ',' << giv::format_number(profile.phi(b, giv::LevelConvention::Infimum)) << ','
          << giv::format_number(profile.phi(b, giv::LevelConvention::Supremum)) << '\n';
    }
  } else {
    std::vector<double> grid = ts;
    if (grid.empty()) {
      const double r = std::min(psf.truncation_radius(), 10.0);
      for (int i = 0; i <= 40; ++i) grid.push_back(-r + 2.0 * r * i / 40.0);
    }
    out << "t,theta,derivative\n";
    for (double t : grid) {
      out << giv::format_number(t) << ',' << giv::format_number(profile.value(t)) << ','
          << giv::format_number(profile.derivative(t)) << '\n';
    }
  }
  std::cout << out.str();
  return 0;
}

int cmd_constants(const Common& c, const std::string& fjson) {
  const Json j = merged_config(c);
  const int dim = j.value("dim", 2);
  if (!j.contains("psf")) throw giv::ConfigError("constants needs a psf");
  const giv::Psf psf = giv::psf_from_json(j.at("psf"), dim);
  Json out{{"psf", giv::to_json(psf)}, {"dim", dim}};
  const giv::Beta0 b = giv::find_beta0(psf);
  out["beta0"] = {{"t0", b.t0}, {"beta0", b.beta0}, {"d2", b.d2}};
  if (!fjson.empty()) {
    const giv::WeightFunction f = giv::weight_function_from_json(parse_json_text(fjson, "--f"));
    out["weight_function"] = giv::to_json(f);
    const giv::WorstCase w = giv::worst_case_error(psf, f);
    out["worst_case_error"] = {{"error", w.error}, {"direction", giv::vec_to_json(w.direction, dim)}};
    const giv::CurvatureConstants k = giv::second_order_constants(psf, f);
    out["second_order"] = {{"c1", k.c1}, {"c2", k.c2}, {"c3", k.c3}, {"sum", k.sum()}};
  } else if (psf.compact() && psf.rotation_invariant()) {
    const giv::CurvatureEstimator e = giv::make_mean_curvature_estimator(psf, giv::CurvatureVariant::Linear);
    out["mean_curvature"] = {{"scale", e.estimator.scale},
                             {"c1", e.constants.c1},
                             {"c2", e.constants.c2},
                             {"c3", e.constants.c3},
                             {"weight_function", giv::to_json(e.estimator.f)}};
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_render(const Common& c, double a, std::size_t index, const std::string& out_path, const std::string& pgm,
               int quantize_levels) {
  const Json j = merged_config(c);
  const int dim = j.value("dim", 2);
  if (!j.contains("phantom") || !j.contains("psf")) throw giv::ConfigError("render needs phantom and psf");
  if (!(a > 0.0)) throw giv::ConfigError("--a must be positive");
  const giv::Phantom phantom = giv::phantom_from_json(j.at("phantom"), dim);
  const giv::Psf psf = giv::psf_from_json(j.at("psf"), dim);
  giv::StudyConfig seeds;
  seeds.dim = dim;
  seeds.seed = j.value("seed", std::uint64_t{1});
  const giv::Lattice lattice = giv::Lattice::identity(dim, a, giv::study_offset(seeds, a, 0, index));
  const giv::Window window = j.contains("window") ? giv::window_from_json(j.at("window"), dim)
                                                  : giv::auto_window(phantom, psf, a);
  giv::RenderOptions opts;
  opts.threads = c.threads.value_or(1);
  giv::GreyImage image = giv::render(phantom, psf, lattice, window, opts);
  if (quantize_levels > 0) image = giv::quantize(image, quantize_levels);
  if (!out_path.empty()) giv::write_image(out_path, image);
  if (!pgm.empty()) giv::write_pgm(pgm, image);
  giv::log(giv::LogLevel::Info, "rendered " + std::to_string(image.values.size()) + " points via " +
                                    image.provenance.value("intensity_path", std::string("?")));
  return 0;
}

int cmd_estimate(const Common& c, const std::string& image_path) {
  const Json j = merged_config(c);
  const giv::GreyImage image = giv::read_image(image_path);
  const int dim = image.lattice.dim();
  if (!j.contains("psf")) throw giv::ConfigError("estimate needs the psf used for rendering");
  const giv::Psf psf = giv::psf_from_json(j.at("psf"), dim);
  const giv::ResolvedEstimator est =
      giv::resolve_estimator(giv::estimator_spec_from_json(j.value("estimator", Json::object()), dim), psf, dim);
  std::optional<giv::Phantom> phantom;
  if (est.type == giv::EstimatorSpec::Type::Midpoint) {
    if (!j.contains("phantom")) throw giv::ConfigError("the midpoint estimator needs the phantom");
    phantom = giv::phantom_from_json(j.at("phantom"), dim);
  } else {
    phantom = giv::Phantom::half_space(dim, giv::Vec{1.0, 0.0, 0.0}, 0.0);
  }
  std::cout << giv::format_number(est.evaluate(*phantom, image, c.threads.value_or(1))) << '\n';
  return 0;
}

int cmd_study(const Common& c) {
  const giv::StudyConfig config = study_config(c);
  const giv::StudyReport report = giv::run_study(config);
  write_text(config.csv_path, giv::report_csv(report));
  if (!config.json_path.empty()) write_text(config.json_path, report_json(report).dump(2) + "\n");
  return 0;
}

int cmd_predict(const Common& c) {
  const giv::StudyConfig config = study_config(c);
  const giv::Prediction p = giv::predict(config);
  write_text(config.csv_path, giv::prediction_csv(p));
  for (const auto& note : p.notes) giv::log(giv::LogLevel::Info, note);
  if (!config.json_path.empty()) {
    write_text(config.json_path, Json{{"version", giv::kVersion}, {"formula", p.formula}, {"notes", p.notes},
                                      {"config", config.source}}
                                         .dump(2) +
                                     "\n");
  }
  return 0;
}

int cmd_sweep(const Common& c, const std::vector<double>& betas) {
  if (betas.empty()) throw giv::ConfigError("sweep needs --betas");
  const giv::StudyConfig config = study_config(c);
  const auto reports = giv::sweep_beta(config, betas);
  write_text(config.csv_path, giv::sweep_csv(betas, reports));
  if (!config.json_path.empty()) {
    Json all = Json::array();
    for (const auto& r : reports) all.push_back(report_json(r));
    write_text(config.json_path, all.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grey-value intrinsic volume estimation: rendering, estimators, asymptotic theory"};
  app.set_version_flag("--version", giv::kVersion);
  app.require_subcommand(1);
  Common common;

  auto* profile = app.add_subcommand("profile", "Halfspace profile theta(t) and level inverses");
  std::vector<double> direction, ts, betas;
  add_common(profile, common, false);
  profile->add_option("--direction", direction, "Unit normal");
  profile->add_option("--t", ts, "Evaluation points");
  profile->add_option("--beta", betas, "Levels for phi and phi_tilde");

  auto* constants = app.add_subcommand("constants", "beta0, curvature constants and worst-case error");
  std::string fjson;
  add_common(constants, common, false);
  constants->add_option("--f", fjson, "Weight function as inline JSON");

  auto* render = app.add_subcommand("render", "Render one grey-value image");
  double a = 0.05;
  std::size_t index = 0;
  std::string out_path, pgm;
  int levels = 0;
  add_common(render, common, false);
  render->add_option("--a", a, "Lattice spacing");
  render->add_option("--offset-index", index, "Offset stream index");
  render->add_option("--seed", common.seed, "Master seed");
  render->add_option("--threads", common.threads, "Worker threads");
  render->add_option("-o,--out", out_path, "Image file");
  render->add_option("--export-pgm", pgm, "8-bit PGM preview");
  render->add_option("--quantize", levels, "Quantize to k grey levels");

  auto* estimate = app.add_subcommand("estimate", "Apply an estimator to an image file");
  std::string image_path;
  add_common(estimate, common, false);
  estimate->add_option("--image", image_path, "Image file")->required();
  estimate->add_option("--threads", common.threads, "Worker threads");

  auto* study = app.add_subcommand("study", "Design-based mean over random offsets at several resolutions");
  add_common(study, common, true);
  auto* predict = app.add_subcommand("predict", "Asymptotic predictions for a study configuration");
  add_common(predict, common, true);
  auto* sweep = app.add_subcommand("sweep", "Repeat a study for several levels beta on shared offsets");
  add_common(sweep, common, true);
  std::vector<double> sweep_betas;
  sweep->add_option("--betas", sweep_betas, "Levels")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  giv::set_log_level(common.quiet ? giv::LogLevel::Quiet : common.verbose ? giv::LogLevel::Debug : giv::LogLevel::Info);

  try {
    if (*profile) return cmd_profile(common, direction, ts, betas);
    if (*constants) return cmd_constants(common, fjson);
    if (*render) return cmd_render(common, a, index, out_path, pgm, levels);
    if (*estimate) return cmd_estimate(common, image_path);
    if (*study) return cmd_study(common);
    if (*predict) return cmd_predict(common);
    if (*sweep) return cmd_sweep(common, sweep_betas);
  } catch (const giv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const giv::IncompatibleError& e) {
    std::cerr << "incompatible: " << e.what() << '\n';
    return 3;
  } catch (const giv::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 4;
  } catch (const Json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
