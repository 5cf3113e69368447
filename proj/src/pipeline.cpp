#include "bcpred/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <sstream>

#include "bcpred/boruta.hpp"
#include "bcpred/random.hpp"
#include "bcpred/smote.hpp"

namespace bcpred {

namespace {

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

}  // namespace

std::string protocol_description(const PipelineOptions& o) {
  std::ostringstream s;
  s << "holdout stratified split test_fraction=" << o.test_fraction << " seed=" << o.seed
    << "; standardize on train; ";
  if (o.boruta) {
    s << "boruta iterations=" << o.boruta_iterations << " alpha=" << o.boruta_alpha
      << " drop_tentative=" << (o.boruta_drop_tentative ? "true" : "false") << "; ";
  } else {
    s << "boruta off; ";
  }
  s << "smote k=" << o.smote_k << " ratio=" << o.smote_ratio << "; gradient descent lr="
    << o.train.learning_rate << " max_iters=" << o.train.max_iters
    << " tol=" << o.train.tolerance << "; threshold=" << o.threshold;
  return s.str();
}

TrainOutcome train_pipeline(const Dataset& data, const PipelineOptions& options,
                            std::string timestamp) {
  TrainOutcome out;
  if (!(options.threshold > 0.0 && options.threshold < 1.0)) {
    throw StageError("config", "threshold must lie in (0, 1)");
  }
  const std::vector<int> labels = data.labels();

  out.split = stage("split", [&] {
    return stratified_split(data, options.test_fraction, options.seed);
  });
  const auto& train = out.split.train;
  const auto& test = out.split.test;

  out.standardize_rows = train;
  const StandardizationParams full_params =
      stage("standardize", [&] { return standardize_fit(data, train); });
  const Matrix train_z = standardize_apply(data.features(train), full_params);
  std::vector<int> train_y;
  train_y.reserve(train.size());
  for (auto i : train) train_y.push_back(labels[i]);

  std::vector<std::size_t> selected;
  std::vector<FeatureDecision> decisions;
  if (options.boruta) {
    out.boruta_rows = train;
    decisions = stage("boruta", [&] {
      BorutaConfig cfg;
      cfg.n_iterations = options.boruta_iterations;
      cfg.significance = options.boruta_alpha;
      cfg.seed = derive_seed(options.seed, 1);
      cfg.inner_train_config = options.boruta_train;
      return boruta_run(train_z, train_y, data.feature_names(), cfg);
    });
    for (std::size_t j = 0; j < decisions.size(); ++j) {
      const auto s = decisions[j].status;
      if (s == FeatureStatus::Confirmed ||
          (s == FeatureStatus::Tentative && !options.boruta_drop_tentative)) {
        selected.push_back(j);
      }
    }
    if (selected.empty()) throw StageError("boruta", "every feature was rejected");
  } else {
    for (std::size_t j = 0; j < data.feature_count(); ++j) selected.push_back(j);
  }

  const Matrix selected_z = train_z.select_cols(selected);
  SmoteConfig smote_cfg{options.smote_k, options.smote_ratio, derive_seed(options.seed, 2)};
  out.smote_rows = train;
  const SmoteResult resampled =
      stage("smote", [&] { return smote_oversample(selected_z, train_y, smote_cfg); });

  out.fit_rows = train;
  const FitResult fit = stage("fit", [&] {
    return fit_gradient_descent(resampled.features, resampled.labels, options.train);
  });

  ModelArtifact& a = out.artifact;
  a.standardization = full_params.restricted(selected);
  a.feature_names = a.standardization.feature_names;
  a.coefficients = fit.coefficients;
  a.threshold = options.threshold;

  const Matrix train_raw = data.features(train);
  for (auto j : selected) {
    const auto col = train_raw.column(j);
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    a.feature_ranges.push_back({*lo, full_params.means[j], *hi});
  }

  a.meta.seed = options.seed;
  a.meta.test_fraction = options.test_fraction;
  a.meta.smote = smote_cfg;
  a.meta.boruta_enabled = options.boruta;
  a.meta.boruta_iterations = options.boruta_iterations;
  a.meta.boruta_alpha = options.boruta_alpha;
  a.meta.boruta_drop_tentative = options.boruta_drop_tentative;
  a.meta.boruta_decisions = std::move(decisions);
  a.meta.train = options.train;
  a.meta.iterations_run = fit.trace.iterations_run;
  a.meta.converged = fit.trace.converged;
  a.meta.final_cost = fit.trace.cost_history.back();
  a.meta.n_train = train.size();
  a.meta.n_train_resampled = resampled.labels.size();
  a.meta.timestamp = std::move(timestamp);

  a.metrics = stage("evaluate", [&] {
    const Matrix test_z = standardize_apply(data.features(test).select_cols(selected),
                                            a.standardization);
    std::vector<int> test_y;
    for (auto i : test) test_y.push_back(labels[i]);
    return evaluate_scores(test_y, predict_proba(a.coefficients, test_z), a.threshold,
                           protocol_description(options));
  });
  return out;
}

EvaluationReport evaluate_artifact(const ModelArtifact& artifact, const Dataset& data) {
  std::vector<std::size_t> columns;
  std::string missing;
  for (const auto& name : artifact.feature_names) {
    const auto& names = data.feature_names();
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
      missing += (missing.empty() ? "" : ", ") + name;
    } else {
      columns.push_back(static_cast<std::size_t>(it - names.begin()));
    }
  }
  if (!missing.empty()) {
    throw PreconditionError("dataset is missing model feature(s): " + missing);
  }
  const Predictor predictor(artifact);
  const Matrix raw = data.features().select_cols(columns);
  std::vector<double> scores(raw.rows());
  for (std::size_t i = 0; i < raw.rows(); ++i)
    scores[i] = predictor.predict_ordered(raw.row(i)).probability;
  return evaluate_scores(data.labels(), scores, artifact.threshold,
                         "all " + std::to_string(data.size()) + " rows scored with model " +
                             predictor.version());
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace bcpred
