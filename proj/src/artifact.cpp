#include "bcpred/artifact.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "bcpred/error.hpp"
#include "json_io.hpp"

namespace bcpred {

using nlohmann::json;

void ModelArtifact::validate() const {
  if (schema_version != kArtifactSchemaVersion) {
    throw ParseError("unsupported schema version " + std::to_string(schema_version));
  }
  const std::size_t n = feature_names.size();
  if (n == 0) throw ParseError("artifact has no features");
  if (coefficients.size() != n) {
    throw ParseError("artifact has " + std::to_string(coefficients.size()) + " weights for " +
                     std::to_string(n) + " features");
  }
  if (standardization.size() != n || standardization.std_devs.size() != n ||
      standardization.feature_names != feature_names) {
    throw ParseError("artifact standardization does not match its feature list");
  }
  if (!feature_ranges.empty() && feature_ranges.size() != n) {
    throw ParseError("artifact feature ranges do not match its feature list");
  }
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(coefficients.intercept)) throw ParseError("artifact intercept is not finite");
  for (std::size_t j = 0; j < n; ++j) {
    if (!finite(coefficients.weights[j]) || !finite(standardization.means[j]) ||
        !(standardization.std_devs[j] > 0.0) || !finite(standardization.std_devs[j])) {
      throw ParseError("artifact has an invalid numeric value for feature '" +
                       feature_names[j] + "'");
    }
  }
  if (!(threshold > 0.0 && threshold < 1.0)) throw ParseError("artifact threshold outside (0, 1)");
}

std::string ModelArtifact::version() const {
  // FNV-1a over the fields that determine predictions.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto feed = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  char buf[40];
  const auto feed_real = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g;", v);
    feed(buf);
  };
  for (std::size_t j = 0; j < feature_names.size(); ++j) {
    feed(feature_names[j] + ";");
    feed_real(coefficients.weights[j]);
    feed_real(standardization.means[j]);
    feed_real(standardization.std_devs[j]);
  }
  feed_real(coefficients.intercept);
  feed_real(threshold);
  std::snprintf(buf, sizeof buf, "v%d-%016llx", schema_version,
                static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json threshold_json(double t) { return std::isfinite(t) ? json(t) : json(nullptr); }

json train_config_json(const TrainConfig& c) {
  return {{"learning_rate", c.learning_rate}, {"max_iters", c.max_iters},
          {"tolerance", c.tolerance}, {"init", "zeros"}};
}

TrainConfig train_config_from(const json& j) {
  TrainConfig c;
  c.learning_rate = j.at("learning_rate").get<double>();
  c.max_iters = j.at("max_iters").get<int>();
  c.tolerance = j.at("tolerance").get<double>();
  return c;
}

json report_json(const EvaluationReport& r) {
  json roc = json::array();
  for (const auto& p : r.roc)
    roc.push_back({{"fpr", p.fpr}, {"tpr", p.tpr}, {"threshold", threshold_json(p.threshold)}});
  return {{"confusion", {{"tp", r.confusion.tp}, {"fp", r.confusion.fp},
                         {"fn", r.confusion.fn}, {"tn", r.confusion.tn}}},
          {"accuracy", r.accuracy},
          {"precision", r.pr.precision},
          {"recall", r.pr.recall},
          {"f1", r.pr.f1},
          {"degenerate", {{"precision", r.pr.precision_degenerate},
                          {"recall", r.pr.recall_degenerate},
                          {"f1", r.pr.f1_degenerate}}},
          {"auc", r.auc},
          {"n_test", r.n_test},
          {"protocol", r.protocol},
          {"roc", roc}};
}

EvaluationReport report_from(const json& j) {
  EvaluationReport r;
  const auto& cm = j.at("confusion");
  r.confusion = {cm.at("tp").get<std::size_t>(), cm.at("fp").get<std::size_t>(),
                 cm.at("fn").get<std::size_t>(), cm.at("tn").get<std::size_t>()};
  r.accuracy = j.at("accuracy").get<double>();
  r.pr.precision = j.at("precision").get<double>();
  r.pr.recall = j.at("recall").get<double>();
  r.pr.f1 = j.at("f1").get<double>();
  const auto& deg = j.at("degenerate");
  r.pr.precision_degenerate = deg.at("precision").get<bool>();
  r.pr.recall_degenerate = deg.at("recall").get<bool>();
  r.pr.f1_degenerate = deg.at("f1").get<bool>();
  r.auc = j.at("auc").get<double>();
  r.n_test = j.at("n_test").get<std::size_t>();
  r.protocol = j.at("protocol").get<std::string>();
  for (const auto& p : j.at("roc")) {
    const auto& t = p.at("threshold");
    r.roc.push_back({p.at("fpr").get<double>(), p.at("tpr").get<double>(),
                     t.is_null() ? std::numeric_limits<double>::infinity() : t.get<double>()});
  }
  return r;
}

}  // namespace

json report_to_json(const EvaluationReport& r) { return report_json(r); }

std::string artifact_to_json(const ModelArtifact& a) {
  json decisions = json::array();
  for (const auto& d : a.meta.boruta_decisions) {
    decisions.push_back({{"feature", d.feature_name}, {"status", to_string(d.status)},
                         {"hits", d.hits}, {"mean_importance", d.mean_importance}});
  }
  json ranges = json::array();
  for (const auto& r : a.feature_ranges)
    ranges.push_back({{"min", r.min}, {"mean", r.mean}, {"max", r.max}});

  json j = {
      {"schema_version", a.schema_version},
      {"feature_names", a.feature_names},
      {"standardization", {{"means", a.standardization.means},
                           {"std_devs", a.standardization.std_devs}}},
      {"coefficients", {{"intercept", a.coefficients.intercept},
                        {"weights", a.coefficients.weights}}},
      {"threshold", a.threshold},
      {"label_map", {{"0", "B"}, {"1", "M"}}},
      {"feature_ranges", ranges},
      {"training_meta",
       {{"seed", a.meta.seed},
        {"test_fraction", a.meta.test_fraction},
        {"smote", {{"k", a.meta.smote.k}, {"target_ratio", a.meta.smote.target_ratio},
                   {"seed", a.meta.smote.seed}}},
        {"boruta", {{"enabled", a.meta.boruta_enabled},
                    {"iterations", a.meta.boruta_iterations},
                    {"alpha", a.meta.boruta_alpha},
                    {"drop_tentative", a.meta.boruta_drop_tentative},
                    {"decisions", decisions}}},
        {"train_config", train_config_json(a.meta.train)},
        {"iterations_run", a.meta.iterations_run},
        {"converged", a.meta.converged},
        {"final_cost", a.meta.final_cost},
        {"n_train", a.meta.n_train},
        {"n_train_resampled", a.meta.n_train_resampled},
        {"timestamp", a.meta.timestamp}}},
      {"metrics", report_json(a.metrics)},
  };
  return j.dump(2) + "\n";
}

ModelArtifact artifact_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("artifact is not valid JSON: ") + e.what());
  }
  ModelArtifact a;
  try {
    a.schema_version = j.at("schema_version").get<int>();
    if (a.schema_version != kArtifactSchemaVersion) {
      throw ParseError("unsupported schema version " + std::to_string(a.schema_version));
    }
    a.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    a.standardization.feature_names = a.feature_names;
    a.standardization.means = j.at("standardization").at("means").get<std::vector<double>>();
    a.standardization.std_devs = j.at("standardization").at("std_devs").get<std::vector<double>>();
    a.coefficients.intercept = j.at("coefficients").at("intercept").get<double>();
    a.coefficients.weights = j.at("coefficients").at("weights").get<std::vector<double>>();
    a.threshold = j.at("threshold").get<double>();
    for (const auto& r : j.at("feature_ranges"))
      a.feature_ranges.push_back({r.at("min").get<double>(), r.at("mean").get<double>(),
                                  r.at("max").get<double>()});

    const auto& m = j.at("training_meta");
    a.meta.seed = m.at("seed").get<std::uint64_t>();
    a.meta.test_fraction = m.at("test_fraction").get<double>();
    a.meta.smote = {m.at("smote").at("k").get<int>(), m.at("smote").at("target_ratio").get<double>(),
                    m.at("smote").at("seed").get<std::uint64_t>()};
    const auto& b = m.at("boruta");
    a.meta.boruta_enabled = b.at("enabled").get<bool>();
    a.meta.boruta_iterations = b.at("iterations").get<int>();
    a.meta.boruta_alpha = b.at("alpha").get<double>();
    a.meta.boruta_drop_tentative = b.at("drop_tentative").get<bool>();
    for (const auto& d : b.at("decisions")) {
      a.meta.boruta_decisions.push_back(
          {d.at("feature").get<std::string>(),
           feature_status_from_string(d.at("status").get<std::string>()),
           d.at("hits").get<int>(), d.at("mean_importance").get<double>()});
    }
    a.meta.train = train_config_from(m.at("train_config"));
    a.meta.iterations_run = m.at("iterations_run").get<int>();
    a.meta.converged = m.at("converged").get<bool>();
    a.meta.final_cost = m.at("final_cost").get<double>();
    a.meta.n_train = m.at("n_train").get<std::size_t>();
    a.meta.n_train_resampled = m.at("n_train_resampled").get<std::size_t>();
    a.meta.timestamp = m.at("timestamp").get<std::string>();
    a.metrics = report_from(j.at("metrics"));
  } catch (const json::exception& e) {
    throw ParseError(std::string("corrupt artifact field: ") + e.what());
  }
  a.validate();
  return a;
}

void save_artifact(const ModelArtifact& artifact, const std::filesystem::path& path) {
  artifact.validate();
  const std::string text = artifact_to_json(artifact);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FileError(tmp.string());
    out << text;
    if (!out.flush()) {
      std::filesystem::remove(tmp);
      throw Error("failed writing '" + tmp.string() + "'");
    }
  }
  std::filesystem::rename(tmp, path);
}

ModelArtifact load_artifact(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError(path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return artifact_from_json(buf.str());
}

// ---------------------------------------------------------------------------
// Prediction

Predictor::Predictor(ModelArtifact artifact) : artifact_(std::move(artifact)) {
  artifact_.validate();
  version_ = artifact_.version();
}

PredictResponse Predictor::predict_ordered(std::span<const double> raw) const {
  const auto z = standardize_apply(raw, artifact_.standardization);
  PredictResponse r;
  r.probability = predict_proba(artifact_.coefficients, z);
  r.threshold = artifact_.threshold;
  r.label = label_for_probability(r.probability, r.threshold) == 1 ? "M" : "B";
  r.model_version = version_;
  return r;
}

PredictResponse Predictor::predict(const std::map<std::string, double>& features) const {
  std::map<std::string, std::string> problems;
  std::vector<double> raw(artifact_.feature_names.size());
  for (std::size_t j = 0; j < raw.size(); ++j) {
    const auto& name = artifact_.feature_names[j];
    const auto it = features.find(name);
    if (it == features.end()) {
      problems[name] = "missing";
    } else if (!std::isfinite(it->second)) {
      problems[name] = "must be a finite number";
    } else {
      raw[j] = it->second;
    }
  }
  for (const auto& [name, value] : features) {
    if (std::find(artifact_.feature_names.begin(), artifact_.feature_names.end(), name) ==
        artifact_.feature_names.end()) {
      problems[name] = "not a model feature";
    }
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return predict_ordered(raw);
}

std::string predict_response_text(const PredictResponse& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", r.probability);
  std::string out = "probability=" + std::string(buf) + "\n";
  out += "label=" + r.label + "\n";
  std::snprintf(buf, sizeof buf, "%.17g", r.threshold);
  out += "threshold=" + std::string(buf) + "\n";
  out += "model_version=" + r.model_version + "\n";
  return out;
}

}  // namespace bcpred
