#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <string>
#include <vector>

#include "giv/error.hpp"
#include "giv/estimator.hpp"
#include "giv/imaging.hpp"
#include "giv/log.hpp"
#include "giv/study.hpp"
#include "giv/theory.hpp"
#include "oracles.hpp"

using namespace giv;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, bool pass, const std::string& title, const std::string& detail) {
  std::printf("criterion %d %s %s: %s\n", id, pass ? "PASS" : "FAIL", title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Json disk_setup() {
  return Json::parse(R"({
    "dim": 2,
    "phantom": {"kind": "ball", "center": [0, 0], "radius": 1},
    "psf": {"kind": "ball_indicator", "radius": 0.5},
    "estimator": {"kind": "surface", "beta": 0.3},
    "resolutions": [0.1, 0.05, 0.025, 0.0125],
    "offsets": 200,
    "offset_design": "lattice",
    "replicates": 10,
    "seed": 20240601
  })");
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

std::string join(const std::vector<double>& v, const char* f) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(f, v[i]);
  return s + "]";
}

// Weighted least squares slope of y on x with standard errors se.
std::pair<double, double> fitted_slope(const std::vector<double>& x, const std::vector<double>& y,
                                       const std::vector<double>& se) {
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = 1.0 / (se[i] * se[i]);
    sw += w;
    sx += w * x[i];
    sy += w * y[i];
  }
  const double mx = sx / sw;
  const double my = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = 1.0 / (se[i] * se[i]);
    sxx += w * (x[i] - mx) * (x[i] - mx);
    sxy += w * (x[i] - mx) * (y[i] - my);
  }
  return {sxy / sxx, std::sqrt(1.0 / sxx)};
}

// Limit through three resolutions a, a/2, a/4 assuming g(a) = L + c1 a + c2 a^2.
double richardson3(const std::vector<double>& g) { return (8.0 * g[2] - 6.0 * g[1] + g[0]) / 3.0; }

oracle::Density oracle_density(const Psf& psf) {
  oracle::Density rho;
  rho.dim = psf.dim();
  if (const auto* b = std::get_if<BallIndicator>(&psf.variant())) {
    rho.kind = oracle::Density::Ball;
    rho.r = b->radius;
  } else if (const auto* x = std::get_if<BoxIndicator>(&psf.variant())) {
    rho.kind = oracle::Density::Box;
    rho.h = x->half_widths;
  } else if (const auto* g = std::get_if<Gaussian>(&psf.variant())) {
    rho.kind = oracle::Density::Gauss;
    rho.r = g->sigma;
  } else if (const auto* u = std::get_if<Bump>(&psf.variant())) {
    rho.kind = oracle::Density::Bump;
    rho.r = u->radius;
  }
  return rho;
}

void criterion1() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  double worst_half = 0.0;
  for (int dim : {2, 3}) {
    const std::vector<Psf> psfs{Psf::gaussian(dim, 0.5), Psf::ball_indicator(dim, 1.0),
                                Psf::box_indicator(dim, {0.5, 0.35, 0.25}), Psf::bump(dim, 1.0)};
    for (const auto& psf : psfs) {
      const auto rho = oracle_density(psf);
      const double span = std::holds_alternative<Gaussian>(psf.variant()) ? 4.0 * 0.5 : rho.reach();
      for (int k = 0; k < 10; ++k) {
        Vec n{};
        if (dim == 2) {
          const double t = 0.3 + 2.0 * std::numbers::pi * k / 10.0;
          n = {std::cos(t), std::sin(t), 0.0};
        } else {
          const double z = -0.95 + 1.9 * (k + 0.5) / 10.0;
          const double r = std::sqrt(1.0 - z * z);
          const double phi = 2.399963229728653 * k;
          n = {r * std::cos(phi), r * std::sin(phi), z};
        }
        const HalfspaceProfile profile(psf, n);
        for (int i = 0; i < 50; ++i) {
          const double t = -1.05 * span + 2.1 * span * i / 49.0;
          worst = std::max(worst, std::abs(profile.value(t) - oracle::profile(rho, n, t)));
        }
        worst_half = std::max(worst_half, std::abs(profile.phi(0.5)));
      }
    }
    std::vector<double> radii{0.0, 0.5, 1.0};
    const Psf tab = Psf::tabulated(dim, radii, {1.0, 0.8, 0.0});
    worst_half = std::max(worst_half, std::abs(HalfspaceProfile(tab, {1, 0, 0}).phi(0.5)));
  }
  const double elapsed = seconds_since(t0);
  report(1, worst <= 1e-7 && worst_half <= 1e-12 && elapsed < 10.0, "profile correctness",
         "max |theta - oracle| " + fmt("%.2e", worst) + " (tol 1e-7), max |phi(1/2)| " + fmt("%.2e", worst_half) +
             " (tol 1e-12), " + fmt("%.1f", elapsed) + " s (limit 10 s)");
}

void criteria2and7() {
  const auto t0 = Clock::now();
  const StudyConfig config = study_config_from_json(disk_setup());
  EstimatorSpec symmetric = config.estimator;
  EstimatorSpec asymmetric = config.estimator;
  asymmetric.beta = 0.2;
  asymmetric.omega = 0.6;
  const auto reports = run_study(config, {symmetric, asymmetric});
  const double elapsed = seconds_since(t0);
  const double target = Phantom::ball(2, {}, 1.0).intrinsic_volume(1);

  std::vector<double> bias;
  for (const auto& row : reports[0].rows) bias.push_back(std::abs(row.mean / target - 1.0));
  const std::vector<double> last3(bias.end() - 3, bias.end());
  const bool pass2 = strictly_decreasing(last3) && bias.back() <= 0.02 && elapsed < 120.0;
  report(2, pass2, "surface estimator, disk",
         "|mean/V1 - 1| at a=0.1..0.0125 " + join(bias, "%.5f") + " (last three strictly decreasing, <= 0.02 at " +
             "a=0.0125), " + fmt("%.1f", elapsed) + " s (limit 120 s)");

  auto slope_of = [&](const StudyReport& r) {
    std::vector<double> a, y, se;
    for (std::size_t i = r.rows.size() - 3; i < r.rows.size(); ++i) {
      a.push_back(r.rows[i].a);
      y.push_back(r.rows[i].mean - target);
      se.push_back(r.rows[i].std_error);
    }
    return fitted_slope(a, y, se);
  };
  const auto [s_sym, e_sym] = slope_of(reports[0]);
  const auto [s_asym, e_asym] = slope_of(reports[1]);
  const bool pass7 = std::abs(s_sym) < 3.0 * e_sym && std::abs(s_asym) > 3.0 * e_asym;
  report(7, pass7, "vanishing first-order bias",
         "symmetric slope " + fmt("%.4f", s_sym) + " +- " + fmt("%.4f", e_sym) + " (needs |slope| < 3 se); " +
             "1_(0.2,0.6] slope " + fmt("%.4f", s_asym) + " +- " + fmt("%.4f", e_asym) + " (needs |slope| > 3 se)");
}

void criterion3() {
  const auto t0 = Clock::now();
  Json j = disk_setup();
  j["dim"] = 3;
  j["phantom"] = Json::parse(R"({"kind": "ball", "center": [0, 0, 0], "radius": 1})");
  j["resolutions"] = {0.1, 0.05};
  j["offsets"] = 50;
  const StudyReport r = run_study(study_config_from_json(j));
  const double target = Phantom::ball(3, {}, 1.0).intrinsic_volume(2);
  std::vector<double> bias;
  for (const auto& row : r.rows) bias.push_back(std::abs(row.mean / target - 1.0));
  const double elapsed = seconds_since(t0);
  report(3, bias.back() <= 0.05 && elapsed < 600.0, "surface estimator, ball",
         "|mean/V2 - 1| at a=0.1,0.05 " + join(bias, "%.5f") + " (<= 0.05 at a=0.05), " + fmt("%.1f", elapsed) +
             " s (limit 600 s)");
}

void criterion4() {
  const std::vector<double> as{0.1, 0.05, 0.025};
  const Phantom disk = Phantom::ball(2, {}, 1.0);
  const Psf psf = Psf::ball_indicator(2, 0.5);
  const ConfigurationScheme scheme(2, 2);
  Weights corner;
  corner.q = 1;
  corner.values.assign(16, 0.0);
  corner.values[8] = 1.0;
  const double theory = bw_first_order_mean(disk.surface_measure(), 2, scheme, corner);

  Json j = disk_setup();
  j["resolutions"] = as;
  j["estimator"] = {{"kind", "midpoint"}, {"weights", corner.values}, {"q", 1}};
  const StudyConfig base = study_config_from_json(j);
  std::vector<EstimatorSpec> specs;
  for (double beta : {0.3, 0.5, 0.7}) {
    EstimatorSpec s = base.estimator;
    s.type = EstimatorSpec::Type::Thresholded;
    s.beta = beta;
    specs.push_back(s);
  }
  specs.push_back(base.estimator);
  const auto reports = run_study(base, specs);
  std::vector<double> limits;
  for (const auto& r : reports) {
    std::vector<double> g;
    for (const auto& row : r.rows) g.push_back(row.mean);
    limits.push_back(richardson3(g));
  }
  double spread = 0.0;
  for (double x : limits) {
    spread = std::max(spread, std::abs(x / theory - 1.0));
    for (double y : limits) spread = std::max(spread, std::abs(x / y - 1.0));
  }
  report(4, spread <= 0.02, "threshold and configuration-count limits",
         "extrapolated a E N_l for beta=0.3,0.5,0.7 and midpoint " + join(limits, "%.5f") + ", theory " +
             fmt("%.5f", theory) + ", max relative disagreement " + fmt("%.4f", spread) + " (tol 0.02)");
}

void criterion5() {
  const double h = 0.5;
  const double beta = 0.3;
  const Psf psf = Psf::box_indicator(2, {h, h, 0});
  const HalfspaceProfile axis(psf, {1, 0, 0});
  const double gap0 = axis.phi(beta) - axis.phi(1.0 - beta);
  const double scale = 1.0 / (2.0 * gap0);
  const auto f = WeightFunction::symmetric_indicator(beta);
  const WorstCase wc = worst_case_error(psf, f.scaled(scale));

  std::vector<double> biases;
  bool within = true;
  for (double deg : {0.0, 15.0, 30.0, 45.0}) {
    Json j = disk_setup();
    j["phantom"] = {{"kind", "box"}, {"center", {0.0, 0.0}}, {"half_widths", {0.8, 0.5}}, {"angle_deg", deg}};
    j["psf"] = {{"kind", "box_indicator"}, {"half_widths", {h, h}}};
    j["estimator"] = {{"kind", "grey"}, {"weight_function", to_json(f)}, {"scale", scale}, {"q", 1}};
    j["resolutions"] = {0.0125};
    j["offsets"] = 100;
    const StudyReport r = run_study(study_config_from_json(j));
    biases.push_back(r.rows.front().relative_bias);
    within = within && std::abs(biases.back()) <= wc.error + 0.01;
  }
  const bool reproduces = std::abs(biases.back()) >= 0.5 * wc.error;
  report(5, within && reproduces, "worst-case directional error",
         "relative bias at 0,15,30,45 deg " + join(biases, "%.5f") + ", predicted worst case " +
             fmt("%.5f", wc.error) + " (each |bias| <= worst + 0.01; 45 deg >= half of worst)");
}

void criterion6() {
  const auto t0 = Clock::now();
  Json j = Json::parse(R"({
    "dim": 2,
    "phantom": {"kind": "ball", "center": [0, 0], "radius": 1},
    "psf": {"kind": "bump", "radius": 1},
    "estimator": {"kind": "mean_curvature", "variant": "linear"},
    "resolutions": [0.05, 0.025, 0.0125],
    "offsets": 400,
    "offset_design": "lattice",
    "replicates": 10,
    "seed": 20240602
  })");
  const StudyConfig c2 = study_config_from_json(j);
  EstimatorSpec counting = c2.estimator;
  counting.variant = CurvatureVariant::AntisymmetricCount;
  const auto two = run_study(c2, {c2.estimator, counting});
  auto gate2 = [](const StudyReport& r, std::vector<double>& bias) {
    for (const auto& row : r.rows) bias.push_back(std::abs(row.relative_bias));
    return strictly_decreasing(bias) && bias.back() <= 0.05;
  };
  std::vector<double> b_lin, b_cnt;
  const bool lin_ok = gate2(two[0], b_lin);
  const bool cnt_ok = gate2(two[1], b_cnt);

  j["dim"] = 3;
  j["phantom"] = Json::parse(R"({"kind": "ball", "center": [0, 0, 0], "radius": 1})");
  j["resolutions"] = {0.1, 0.05};
  j["offsets"] = 100;
  const StudyReport three = run_study(study_config_from_json(j));
  std::vector<double> b3;
  for (const auto& row : three.rows) b3.push_back(std::abs(row.relative_bias));
  const bool three_ok = b3.back() <= 0.10;
  std::vector<double> se;
  for (const auto& row : two[0].rows) se.push_back(row.std_error);
  report(6, lin_ok && cnt_ok && three_ok, "mean-curvature estimator",
         "2D linear |bias| " + join(b_lin, "%.4f") + " (se " + join(se, "%.4f") + "), 2D count |bias| " +
             join(b_cnt, "%.4f") + " (decreasing, <= 0.05 at finest); 3D |bias| " + join(b3, "%.4f") +
             " (<= 0.10 at a=0.05); " + fmt("%.1f", seconds_since(t0)) + " s");
}

void criterion8() {
  const Phantom disk = Phantom::ball(2, {}, 1.0);
  const Psf psf = Psf::ball_indicator(2, 0.5);
  const Vec n{1, 0, 0};
  const double lo = 0.1, hi = 0.9;
  const double mass = mu_integral(psf, n, WeightFunction::indicator(lo, hi));
  const double surface = total_mass(disk.surface_measure());
  auto theory_cdf = [&](double x) {
    if (x <= lo) return 0.0;
    if (x >= hi) return 1.0;
    return mu_integral(psf, n, WeightFunction::indicator(lo, x)) / mass;
  };
  const StudyConfig config = study_config_from_json(disk_setup());
  std::vector<double> distances;
  for (std::size_t ri = 0; ri < 3; ++ri) {
    const double a = std::vector<double>{0.1, 0.05, 0.025}[ri];
    const int offsets = 50;
    std::vector<double> values;
    for (int k = 0; k < offsets; ++k) {
      StudyConfig c = config;
      c.offsets = offsets;
      const Lattice lat = Lattice::identity(2, a, study_offset(c, a, ri, static_cast<std::size_t>(k)));
      const GreyImage img = render(disk, psf, lat, auto_window(disk, psf, a));
      for (double v : img.values) {
        if (v > lo && v < hi) values.push_back(v);
      }
    }
    std::sort(values.begin(), values.end());
    // Empirical measure a^{d-1} counts / offsets, normalized by the limit mass S * mu((lo, hi)).
    const double unit = a / offsets / (surface * mass);
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double f = theory_cdf(values[i]);
      d = std::max({d, std::abs(unit * static_cast<double>(i + 1) - f), std::abs(unit * static_cast<double>(i) - f)});
    }
    d = std::max(d, std::abs(unit * static_cast<double>(values.size()) - 1.0));
    distances.push_back(d);
  }
  report(8, strictly_decreasing(distances) && distances.back() <= 0.05, "weak convergence of grey values",
         "Kolmogorov distance at a=0.1,0.05,0.025 " + join(distances, "%.5f") + " (decreasing, <= 0.05 at finest)");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void criterion9() {
  Json j = disk_setup();
  j["resolutions"] = {0.1, 0.05};
  j["offsets"] = 24;
  const std::string cfg = "acceptance_determinism.json";
  std::ofstream(cfg) << j.dump(2);
  const std::string cli = GIV_CLI_PATH;
  std::vector<std::string> outputs;
  bool ran = true;
  for (int threads : {1, 3, 8}) {
    const std::string out = "acceptance_determinism_" + std::to_string(threads) + ".csv";
    const std::string cmd =
        "\"" + cli + "\" study -q --config " + cfg + " --threads " + std::to_string(threads) + " --csv " + out;
    ran = ran && std::system(cmd.c_str()) == 0;
    outputs.push_back(slurp(out));
    std::remove(out.c_str());
  }
  std::remove(cfg.c_str());
  const bool same = ran && !outputs[0].empty() && outputs[0] == outputs[1] && outputs[0] == outputs[2];
  report(9, same, "determinism across thread counts",
         std::string("study CSV with 1, 3 and 8 threads ") + (same ? "byte-identical" : "differs or failed"));
}

}  // namespace

int main() {
  set_log_level(LogLevel::Quiet);
  const std::vector<std::function<void()>> steps{criterion1, criteria2and7, criterion3, criterion4,
                                                 criterion5, criterion6,    criterion8, criterion9};
  for (const auto& step : steps) {
    try {
      step();
    } catch (const std::exception& e) {
      std::printf("criterion error: %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%d criterion check(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
