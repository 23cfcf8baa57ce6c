#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "giv/configuration.hpp"
#include "giv/estimator.hpp"
#include "giv/phantom.hpp"
#include "giv/psf.hpp"
#include "giv/serialize.hpp"

namespace giv {

inline constexpr const char* kVersion = "1.0.0";

struct EstimatorSpec {
  enum class Type { Grey, Surface, MeanCurvature, Thresholded, Midpoint };
  Type type = Type::Surface;
  /// Grey: weight function, overall scale, target index q.
  WeightFunction f;
  double scale = 1.0;
  std::optional<int> q;
  /// Surface: (beta, omega]; Thresholded: threshold beta; MeanCurvature: optional level.
  std::optional<double> beta;
  std::optional<double> omega;
  CurvatureVariant variant = CurvatureVariant::Linear;
  /// Configuration-count estimators.
  std::optional<Weights> weights;
  std::string preset;
  int cell = 2;
};

/// Iid uniform offsets, or independently shifted rank-1 lattices: offset k
/// belongs to replicate k mod R, a lattice rule with its own uniform random
/// shift. Every offset is uniform on the cell, so means stay unbiased; the
/// standard error then comes from the spread of the R replicate means.
enum class OffsetDesign { Iid, ShiftedLattice };

struct StudyConfig {
  int dim = 2;
  Json phantom;
  Json psf;
  EstimatorSpec estimator;
  std::vector<double> resolutions;
  int offsets = 1;
  std::uint64_t seed = 1;
  OffsetDesign design = OffsetDesign::Iid;
  int replicates = 10;
  int threads = 1;
  std::optional<Window> window;
  std::string csv_path;
  std::string json_path;
  Json source = Json::object();  // the parsed config, echoed into reports
};

StudyConfig study_config_from_json(const Json& j);
EstimatorSpec estimator_spec_from_json(const Json& j, int dim);
Json to_json(const EstimatorSpec& spec);

/// An estimator with every parameter fixed, ready to apply to images.
struct ResolvedEstimator {
  EstimatorSpec::Type type = EstimatorSpec::Type::Grey;
  int q = 1;
  WeightFunction f;  // grey types
  double scale = 1.0;
  double beta = 0.0;  // threshold for configuration counts
  Weights weights;
  int cell = 2;
  Json description = Json::object();

  /// Estimate for one rendered image; the midpoint type ignores the image.
  double evaluate(const Phantom& phantom, const GreyImage& image, int threads = 1) const;
};

/// Checks compatibility and computes scales; throws before any rendering.
ResolvedEstimator resolve_estimator(const EstimatorSpec& spec, const Psf& psf, int dim);

struct PredictionRow {
  double a = 0.0;
  std::optional<double> first_order;
  std::optional<double> second_order;
};

struct Prediction {
  std::string formula = "none";
  std::vector<std::string> notes;
  std::vector<PredictionRow> rows;
};

Prediction predict(const StudyConfig& config);
Prediction predict(const StudyConfig& config, const ResolvedEstimator& estimator);

struct StudyRow {
  double a = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  double reference = 0.0;
  std::optional<double> first_order;
  std::optional<double> second_order;
  double relative_bias = 0.0;
  std::vector<double> samples;
};

struct StudyReport {
  std::vector<StudyRow> rows;
  Json metadata = Json::object();
};

/// Offset for (resolution index, offset index) in [0, a)^d.
Vec study_offset(const StudyConfig& config, double a, std::size_t resolution_index, std::size_t offset_index);

StudyReport run_study(const StudyConfig& config);
/// Several estimators on shared images (same offsets for all).
std::vector<StudyReport> run_study(const StudyConfig& config, const std::vector<EstimatorSpec>& estimators);
/// One report per beta; all share images and offsets.
std::vector<StudyReport> sweep_beta(const StudyConfig& config, const std::vector<double>& betas);

/// Fixed schema: a,mean,std_error,reference,first_order,second_order,relative_bias.
std::string report_csv(const StudyReport& report);
std::string sweep_csv(const std::vector<double>& betas, const std::vector<StudyReport>& reports);
std::string prediction_csv(const Prediction& prediction);
/// Shortest round-trip decimal representation; empty for NaN.
std::string format_number(double v);

}  // namespace giv
