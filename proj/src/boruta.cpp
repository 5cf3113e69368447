#include "bcpred/boruta.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bcpred/error.hpp"
#include "bcpred/random.hpp"

namespace bcpred {

void BorutaConfig::validate() const {
  if (n_iterations < 20) {
    throw PreconditionError("boruta needs at least 20 iterations, got " +
                            std::to_string(n_iterations));
  }
  if (!(significance > 0.0 && significance < 1.0)) {
    throw PreconditionError("boruta significance must lie in (0, 1)");
  }
  inner_train_config.validate();
}

const char* to_string(FeatureStatus s) noexcept {
  switch (s) {
    case FeatureStatus::Confirmed: return "Confirmed";
    case FeatureStatus::Rejected: return "Rejected";
    case FeatureStatus::Tentative: return "Tentative";
  }
  return "Tentative";
}

FeatureStatus feature_status_from_string(const std::string& s) {
  if (s == "Confirmed") return FeatureStatus::Confirmed;
  if (s == "Rejected") return FeatureStatus::Rejected;
  if (s == "Tentative") return FeatureStatus::Tentative;
  throw ParseError("unknown feature status '" + s + "'");
}

Matrix shadow_augment(const Matrix& x, std::uint64_t seed) {
  if (x.cols() == 0 || x.rows() < 2) {
    throw PreconditionError("shadow_augment needs at least 1 column and 2 rows");
  }
  const std::size_t n = x.cols();
  Matrix out(x.rows(), 2 * n);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = x(i, j);

  SplitMix64 rng(seed);
  std::vector<double> col;
  for (std::size_t j = 0; j < n; ++j) {
    col = x.column(j);
    rng.shuffle(std::span<double>(col));
    for (std::size_t i = 0; i < x.rows(); ++i) out(i, n + j) = col[i];
  }
  return out;
}

ImportanceVector importance_permutation(const Matrix& x_aug, std::span<const int> y,
                                        const TrainConfig& config, std::uint64_t seed) {
  const FitResult fit = fit_gradient_descent(x_aug, y, config);
  const Coefficients& beta = fit.coefficients;
  const std::size_t m = x_aug.rows();

  std::vector<double> logits(m);
  std::size_t base_correct = 0;
  for (std::size_t i = 0; i < m; ++i) {
    logits[i] = beta.logit(x_aug.row(i));
    base_correct += label_for_probability(sigmoid(logits[i]), 0.5) == y[i] ? 1 : 0;
  }
  const double base_acc = static_cast<double>(base_correct) / static_cast<double>(m);

  // Shuffling one column changes each logit by w_j * (x_perm - x).
  SplitMix64 rng(seed);
  ImportanceVector importance(x_aug.cols(), 0.0);
  std::vector<std::size_t> perm(m);
  for (std::size_t j = 0; j < x_aug.cols(); ++j) {
    const double w = beta.weights[j];
    double drop = 0.0;
    for (int r = 0; r < kImportanceShuffles; ++r) {
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      rng.shuffle(std::span<std::size_t>(perm));
      std::size_t correct = 0;
      for (std::size_t i = 0; i < m; ++i) {
        const double z = logits[i] + w * (x_aug(perm[i], j) - x_aug(i, j));
        correct += label_for_probability(sigmoid(z), 0.5) == y[i] ? 1 : 0;
      }
      drop += base_acc - static_cast<double>(correct) / static_cast<double>(m);
    }
    importance[j] = drop / kImportanceShuffles;
  }
  return importance;
}

double binomial_two_sided_p(int hits, int trials) {
  if (trials <= 0 || hits < 0 || hits > trials) {
    throw PreconditionError("binomial test needs 0 <= hits <= trials, trials > 0");
  }
  // P(X = k) for X ~ Binomial(trials, 1/2), in log space.
  const auto log_pmf = [trials](int k) {
    return std::lgamma(trials + 1.0) - std::lgamma(k + 1.0) - std::lgamma(trials - k + 1.0) -
           trials * std::log(2.0);
  };
  double lower = 0.0, upper = 0.0;
  for (int k = 0; k <= hits; ++k) lower += std::exp(log_pmf(k));
  for (int k = hits; k <= trials; ++k) upper += std::exp(log_pmf(k));
  return std::min(1.0, 2.0 * std::min(lower, upper));
}

FeatureStatus classify_hits(int hits, int trials, double significance, std::size_t n_features) {
  const double level = significance / static_cast<double>(std::max<std::size_t>(n_features, 1));
  if (binomial_two_sided_p(hits, trials) >= level) return FeatureStatus::Tentative;
  return 2 * hits > trials ? FeatureStatus::Confirmed : FeatureStatus::Rejected;
}

std::vector<FeatureDecision> boruta_run(const Matrix& x, std::span<const int> y,
                                        const std::vector<std::string>& feature_names,
                                        const BorutaConfig& config) {
  config.validate();
  const std::size_t n = x.cols();
  if (n == 0) throw PreconditionError("boruta_run needs at least one feature");
  if (feature_names.size() != n) throw PreconditionError("boruta_run: feature name count mismatch");
  if (x.rows() != y.size()) throw PreconditionError("boruta_run: rows and labels differ in length");

  std::vector<int> hits(n, 0);
  std::vector<double> importance_sum(n, 0.0);
  for (int it = 0; it < config.n_iterations; ++it) {
    const std::uint64_t iter_seed = derive_seed(config.seed, static_cast<std::uint64_t>(it));
    const Matrix augmented = shadow_augment(x, derive_seed(iter_seed, 0));
    const ImportanceVector imp =
        importance_permutation(augmented, y, config.inner_train_config, derive_seed(iter_seed, 1));
    const double shadow_max = *std::max_element(imp.begin() + static_cast<std::ptrdiff_t>(n), imp.end());
    for (std::size_t j = 0; j < n; ++j) {
      if (imp[j] > shadow_max) ++hits[j];
      importance_sum[j] += imp[j];
    }
  }

  std::vector<FeatureDecision> out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.push_back({feature_names[j],
                   classify_hits(hits[j], config.n_iterations, config.significance, n), hits[j],
                   importance_sum[j] / config.n_iterations});
  }
  return out;
}

}  // namespace bcpred
