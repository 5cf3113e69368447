#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bcpred/matrix.hpp"

namespace bcpred {

/// Intercept plus one weight per model feature.
struct Coefficients {
  double intercept = 0.0;
  std::vector<double> weights;

  static Coefficients zeros(std::size_t n) { return {0.0, std::vector<double>(n, 0.0)}; }
  std::size_t size() const noexcept { return weights.size(); }
  double logit(std::span<const double> x) const;

  friend bool operator==(const Coefficients&, const Coefficients&) = default;
};

struct TrainConfig {
  double learning_rate = 0.1;
  int max_iters = 10000;
  /// Stop once |dC| / max(C, 1e-12) falls below this.
  double tolerance = 1e-8;
  /// Starting point; all zeros when unset.
  std::optional<Coefficients> init;

  void validate() const;
};

struct TrainTrace {
  /// Mean NLL at the start point followed by one entry per accepted step.
  std::vector<double> cost_history;
  int iterations_run = 0;
  bool converged = false;
  /// Learning rate in effect after any divergence-guard halvings.
  double final_learning_rate = 0.0;
};

struct FitResult {
  Coefficients coefficients;
  TrainTrace trace;
};

/// Logistic function, evaluated in the branch that never overflows.
double sigmoid(double z) noexcept;
/// log(1 + exp(z)) without overflow.
double softplus(double z) noexcept;

double predict_proba(const Coefficients& coeffs, std::span<const double> features);
/// 1 iff predict_proba >= threshold (a tie classifies as malignant).
int predict_label(const Coefficients& coeffs, std::span<const double> features,
                  double threshold = 0.5);
int label_for_probability(double probability, double threshold) noexcept;

std::vector<double> predict_proba(const Coefficients& coeffs, const Matrix& x);

/// Sum over rows of y log p + (1 - y) log(1 - p), via softplus so saturated
/// probabilities never produce NaN.
double log_likelihood(const Coefficients& coeffs, const Matrix& x, std::span<const int> y);
/// -log_likelihood / m.
double nll_cost(const Coefficients& coeffs, const Matrix& x, std::span<const int> y);
/// Gradient of nll_cost; intercept first, then one entry per weight.
std::vector<double> gradient(const Coefficients& coeffs, const Matrix& x,
                             std::span<const int> y);

/// Full-batch gradient descent on the mean NLL.
///
/// Each step moves against the gradient. If the cost rises (or stops being
/// finite) the learning rate is halved and the step retried; the reduced rate
/// is kept for later steps. More than 30 consecutive halvings throws
/// DivergenceError. Deterministic for a fixed config.
FitResult fit_gradient_descent(const Matrix& x, std::span<const int> y,
                               const TrainConfig& config = {});

/// Fraction of rows whose predicted label matches y.
double training_accuracy(const Coefficients& coeffs, const Matrix& x, std::span<const int> y,
                         double threshold = 0.5);

}  // namespace bcpred
