#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bcpred/logreg.hpp"
#include "bcpred/matrix.hpp"

namespace bcpred {

struct BorutaConfig {
  int n_iterations = 50;
  /// Two-sided binomial test level, Bonferroni-corrected over the features.
  double significance = 0.05;
  std::uint64_t seed = 42;
  /// Fit settings for the per-iteration importance model.
  TrainConfig inner_train_config{0.1, 1000, 1e-6, std::nullopt};

  void validate() const;
};

enum class FeatureStatus { Confirmed, Rejected, Tentative };

const char* to_string(FeatureStatus s) noexcept;
FeatureStatus feature_status_from_string(const std::string& s);

struct FeatureDecision {
  std::string feature_name;
  FeatureStatus status = FeatureStatus::Tentative;
  int hits = 0;
  double mean_importance = 0.0;

  friend bool operator==(const FeatureDecision&, const FeatureDecision&) = default;
};

/// Importance per column of the augmented matrix: real features first, then
/// their shadows in the same order.
using ImportanceVector = std::vector<double>;

/// Number of shuffles averaged per column in importance_permutation.
inline constexpr int kImportanceShuffles = 5;

/// Appends one shadow column per input column: a copy shuffled across rows
/// with SplitMix64(seed). Output has 2n columns.
Matrix shadow_augment(const Matrix& x, std::uint64_t seed);

/// Permutation importance under a logistic model fitted on `x_aug`: the drop
/// in training accuracy when one column is shuffled, averaged over
/// kImportanceShuffles shuffles.
ImportanceVector importance_permutation(const Matrix& x_aug, std::span<const int> y,
                                        const TrainConfig& config, std::uint64_t seed);

/// Two-sided binomial test of `hits` out of `trials` against p = 1/2.
double binomial_two_sided_p(int hits, int trials);

/// Classification of one feature from its hit count.
FeatureStatus classify_hits(int hits, int trials, double significance, std::size_t n_features);

/// All-relevant feature selection. Each iteration draws fresh shadows, scores
/// every column, and counts a hit for a real feature whose importance is
/// strictly above the best shadow. Iteration i uses derive_seed(seed, i), so
/// the result does not depend on evaluation order.
std::vector<FeatureDecision> boruta_run(const Matrix& x, std::span<const int> y,
                                        const std::vector<std::string>& feature_names,
                                        const BorutaConfig& config = {});

}  // namespace bcpred
