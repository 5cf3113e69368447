#include "bcpred/logreg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bcpred/error.hpp"

namespace bcpred {

namespace {

constexpr int kMaxHalvings = 30;

void check_shapes(const Coefficients& coeffs, const Matrix& x, std::span<const int> y) {
  if (x.rows() == 0) throw PreconditionError("empty design matrix");
  if (x.rows() != y.size()) {
    throw PreconditionError("design matrix has " + std::to_string(x.rows()) +
                            " rows but " + std::to_string(y.size()) + " labels");
  }
  if (x.cols() != coeffs.size()) {
    throw PreconditionError("design matrix has " + std::to_string(x.cols()) +
                            " columns but model has " + std::to_string(coeffs.size()) +
                            " weights");
  }
  for (int v : y) {
    if (v != 0 && v != 1) throw PreconditionError("labels must be 0 or 1");
  }
}

}  // namespace

double Coefficients::logit(std::span<const double> x) const {
  if (x.size() != weights.size()) {
    throw PreconditionError("expected " + std::to_string(weights.size()) +
                            " features, got " + std::to_string(x.size()));
  }
  double z = intercept;
  for (std::size_t j = 0; j < x.size(); ++j) z += weights[j] * x[j];
  return z;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw PreconditionError("learning_rate must be a positive finite number");
  if (max_iters <= 0) throw PreconditionError("max_iters must be positive");
  if (!(tolerance > 0.0)) throw PreconditionError("tolerance must be positive");
}

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) noexcept {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

double predict_proba(const Coefficients& coeffs, std::span<const double> features) {
  return sigmoid(coeffs.logit(features));
}

int label_for_probability(double probability, double threshold) noexcept {
  return probability >= threshold ? 1 : 0;
}

int predict_label(const Coefficients& coeffs, std::span<const double> features,
                  double threshold) {
  return label_for_probability(predict_proba(coeffs, features), threshold);
}

std::vector<double> predict_proba(const Coefficients& coeffs, const Matrix& x) {
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict_proba(coeffs, x.row(i));
  return out;
}

double log_likelihood(const Coefficients& coeffs, const Matrix& x, std::span<const int> y) {
  check_shapes(coeffs, x, y);
  // log p = -softplus(-z), log(1 - p) = -softplus(z)
  double ll = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double z = coeffs.logit(x.row(i));
    ll -= y[i] == 1 ? softplus(-z) : softplus(z);
  }
  return ll;
}

double nll_cost(const Coefficients& coeffs, const Matrix& x, std::span<const int> y) {
  return -log_likelihood(coeffs, x, y) / static_cast<double>(x.rows());
}

std::vector<double> gradient(const Coefficients& coeffs, const Matrix& x,
                             std::span<const int> y) {
  check_shapes(coeffs, x, y);
  std::vector<double> g(coeffs.size() + 1, 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto row = x.row(i);
    const double r = sigmoid(coeffs.logit(row)) - y[i];
    g[0] += r;
    for (std::size_t j = 0; j < row.size(); ++j) g[j + 1] += r * row[j];
  }
  const auto m = static_cast<double>(x.rows());
  for (double& v : g) v /= m;
  return g;
}

FitResult fit_gradient_descent(const Matrix& x, std::span<const int> y,
                               const TrainConfig& config) {
  config.validate();
  const bool has_pos = std::find(y.begin(), y.end(), 1) != y.end();
  const bool has_neg = std::find(y.begin(), y.end(), 0) != y.end();
  if (!has_pos || !has_neg) {
    throw PreconditionError("training labels must contain both classes");
  }

  Coefficients beta = config.init ? *config.init : Coefficients::zeros(x.cols());
  if (beta.size() != x.cols()) {
    throw PreconditionError("initial coefficients do not match the feature count");
  }

  FitResult result;
  TrainTrace& trace = result.trace;
  double alpha = config.learning_rate;
  double cost = nll_cost(beta, x, y);
  trace.cost_history.push_back(cost);

  Coefficients candidate = beta;
  for (int iter = 0; iter < config.max_iters; ++iter) {
    const auto g = gradient(beta, x, y);
    double next_cost = 0.0;
    int halvings = 0;
    for (;;) {
      candidate.intercept = beta.intercept - alpha * g[0];
      for (std::size_t j = 0; j < beta.size(); ++j)
        candidate.weights[j] = beta.weights[j] - alpha * g[j + 1];
      next_cost = nll_cost(candidate, x, y);
      if (std::isfinite(next_cost) && next_cost <= cost) break;
      if (++halvings > kMaxHalvings) {
        throw DivergenceError("gradient descent diverged: cost kept increasing after " +
                              std::to_string(kMaxHalvings) + " learning-rate halvings");
      }
      alpha *= 0.5;
    }
    std::swap(beta, candidate);
    const double rel = (cost - next_cost) / std::max(cost, 1e-12);
    cost = next_cost;
    trace.cost_history.push_back(cost);
    trace.iterations_run = iter + 1;
    if (rel < config.tolerance) {
      trace.converged = true;
      break;
    }
  }
  trace.final_learning_rate = alpha;
  result.coefficients = std::move(beta);
  return result;
}

double training_accuracy(const Coefficients& coeffs, const Matrix& x, std::span<const int> y,
                         double threshold) {
  check_shapes(coeffs, x, y);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < x.rows(); ++i)
    correct += predict_label(coeffs, x.row(i), threshold) == y[i] ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(x.rows());
}

}  // namespace bcpred
