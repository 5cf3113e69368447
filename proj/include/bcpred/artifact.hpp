#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "bcpred/boruta.hpp"
#include "bcpred/dataset.hpp"
#include "bcpred/logreg.hpp"
#include "bcpred/metrics.hpp"
#include "bcpred/smote.hpp"

namespace bcpred {

inline constexpr int kArtifactSchemaVersion = 1;

/// Raw-unit summary of one feature over the training rows; feeds form hints.
struct FeatureRange {
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
};

struct TrainingMeta {
  std::uint64_t seed = 42;
  double test_fraction = 0.2;
  SmoteConfig smote;
  bool boruta_enabled = true;
  int boruta_iterations = 50;
  double boruta_alpha = 0.05;
  bool boruta_drop_tentative = false;
  std::vector<FeatureDecision> boruta_decisions;
  TrainConfig train;
  int iterations_run = 0;
  bool converged = false;
  double final_cost = 0.0;
  std::size_t n_train = 0;
  std::size_t n_train_resampled = 0;
  std::string timestamp;
};

/// Everything prediction needs, plus how the model was produced and how it
/// scored on its held-out fold.
struct ModelArtifact {
  int schema_version = kArtifactSchemaVersion;
  std::vector<std::string> feature_names;
  StandardizationParams standardization;
  Coefficients coefficients;
  double threshold = 0.5;
  std::vector<FeatureRange> feature_ranges;
  TrainingMeta meta;
  EvaluationReport metrics;

  /// Checks arity agreement between names, scaling, weights and ranges.
  void validate() const;
  /// Stable identifier derived from the numeric model content.
  std::string version() const;
};

std::string artifact_to_json(const ModelArtifact& artifact);
ModelArtifact artifact_from_json(const std::string& text);

/// Writes via a temporary file and rename, so a failed write leaves no
/// partial artifact behind.
void save_artifact(const ModelArtifact& artifact, const std::filesystem::path& path);
ModelArtifact load_artifact(const std::filesystem::path& path);

struct PredictResponse {
  double probability = 0.0;
  std::string label;  // "B" or "M"
  double threshold = 0.5;
  std::string model_version;
};

/// Scores raw (unstandardized) feature values against an artifact. Shared by
/// the CLI and the HTTP service.
class Predictor {
 public:
  explicit Predictor(ModelArtifact artifact);

  const ModelArtifact& artifact() const noexcept { return artifact_; }
  const std::string& version() const noexcept { return version_; }

  /// Requires exactly the model's features, all finite; otherwise throws
  /// ValidationError with one message per offending field.
  PredictResponse predict(const std::map<std::string, double>& features) const;
  PredictResponse predict_ordered(std::span<const double> raw) const;

 private:
  ModelArtifact artifact_;
  std::string version_;
};

std::string predict_response_text(const PredictResponse& response);

}  // namespace bcpred
