#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bcpred/artifact.hpp"
#include "bcpred/boruta.hpp"
#include "bcpred/dataset.hpp"
#include "bcpred/error.hpp"

namespace bcpred {

struct PipelineOptions {
  std::uint64_t seed = 42;
  double test_fraction = 0.2;
  TrainConfig train;
  int smote_k = 5;
  double smote_ratio = 1.0;
  bool boruta = true;
  int boruta_iterations = 50;
  double boruta_alpha = 0.05;
  bool boruta_drop_tentative = false;
  /// Fit settings for Boruta's per-iteration importance model.
  TrainConfig boruta_train = BorutaConfig{}.inner_train_config;
  double threshold = 0.5;
};

/// Failure inside one pipeline stage; what() is prefixed with the stage name.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& message)
      : Error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct TrainOutcome {
  ModelArtifact artifact;
  SplitIndices split;
  // Dataset rows handed to each fitting stage.
  std::vector<std::size_t> standardize_rows;
  std::vector<std::size_t> boruta_rows;
  std::vector<std::size_t> smote_rows;
  std::vector<std::size_t> fit_rows;
};

/// split -> standardize (train rows) -> Boruta (train rows) -> drop rejected
/// features -> SMOTE (train rows) -> gradient descent -> score the test fold.
TrainOutcome train_pipeline(const Dataset& data, const PipelineOptions& options,
                            std::string timestamp = {});

std::string protocol_description(const PipelineOptions& options);

/// Scores every dataset row through the artifact. The dataset must carry
/// every model feature (matched by name).
EvaluationReport evaluate_artifact(const ModelArtifact& artifact, const Dataset& data);

/// Current UTC time, ISO 8601.
std::string utc_timestamp();

}  // namespace bcpred
