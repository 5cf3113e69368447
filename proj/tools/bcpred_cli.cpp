// bcpred: train, evaluate and serve the breast-cancer logistic model.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bcpred/artifact.hpp"
#include "bcpred/dataset.hpp"
#include "bcpred/error.hpp"
#include "bcpred/pipeline.hpp"
#include "bcpred/service.hpp"

namespace fs = std::filesystem;
using namespace bcpred;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FileError(path.string());
  out << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError(path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_summary(const EvaluationReport& r) {
  std::printf("n_test=%zu accuracy=%.4f precision=%.4f recall=%.4f f1=%.4f auc=%.4f\n",
              r.n_test, r.accuracy, r.pr.precision, r.pr.recall, r.pr.f1, r.auc);
  std::printf("confusion: tp=%zu fp=%zu fn=%zu tn=%zu\n", r.confusion.tp, r.confusion.fp,
              r.confusion.fn, r.confusion.tn);
}

double parse_value(const std::string& name, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) {
    throw ValidationError(std::map<std::string, std::string>{{name, "'" + text + "' is not a number"}});
  }
  return v;
}

// Pulls the model's features out of a one-row CSV with a header line. Other
// columns (id, diagnosis, features the model dropped) are ignored.
std::map<std::string, double> features_from_csv(const fs::path& path,
                                                const std::vector<std::string>& wanted) {
  std::istringstream in(read_file(path));
  std::string header, row;
  std::getline(in, header);
  while (std::getline(in, row) && row.find_first_not_of(" \r\t") == std::string::npos) {
  }
  const auto split = [](const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream s(line);
    while (std::getline(s, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"')
        cell = cell.substr(1, cell.size() - 2);
      out.push_back(cell);
    }
    return out;
  };
  const auto names = split(header);
  const auto values = split(row);
  if (row.empty()) throw ParseError("'" + path.string() + "' has no data row");
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < names.size() && i < values.size(); ++i) {
    if (std::find(wanted.begin(), wanted.end(), names[i]) != wanted.end())
      out[names[i]] = parse_value(names[i], values[i]);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Breast-cancer malignancy classifier: logistic regression with SMOTE and Boruta"};
  app.require_subcommand(1);

  // train
  std::string data_path, out_path, model_path, report_path, roc_path;
  PipelineOptions opt;
  auto* train = app.add_subcommand("train", "Fit a model and write the artifact JSON");
  train->add_option("--data", data_path, "WDBC CSV file")->required();
  train->add_option("--out", out_path, "Artifact output path")->required();
  train->add_option("--seed", opt.seed, "Seed for split, Boruta and SMOTE")->capture_default_str();
  train->add_option("--test-fraction", opt.test_fraction, "Held-out fraction")->capture_default_str();
  train->add_option("--learning-rate", opt.train.learning_rate, "Gradient descent step size")
      ->capture_default_str();
  train->add_option("--max-iters", opt.train.max_iters, "Gradient descent iteration cap")
      ->capture_default_str();
  train->add_option("--tol", opt.train.tolerance, "Relative cost-decrease stopping threshold")
      ->capture_default_str();
  train->add_option("--smote-k", opt.smote_k, "SMOTE neighbour count")->capture_default_str();
  train->add_option("--smote-ratio", opt.smote_ratio, "Target minority/majority ratio")
      ->capture_default_str();
  train->add_flag("--boruta,!--no-boruta", opt.boruta, "Run Boruta feature selection (default on)");
  train->add_option("--boruta-iters", opt.boruta_iterations, "Boruta iterations")
      ->capture_default_str();
  train->add_option("--boruta-alpha", opt.boruta_alpha, "Boruta significance level")
      ->capture_default_str();
  train->add_flag("--boruta-drop-tentative", opt.boruta_drop_tentative,
                  "Also drop features Boruta leaves Tentative");
  train->add_option("--threshold", opt.threshold, "Malignant probability cut-off")
      ->capture_default_str();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Score a dataset with an artifact");
  evaluate->add_option("--model", model_path, "Artifact JSON")->required();
  evaluate->add_option("--data", data_path, "WDBC CSV file")->required();
  evaluate->add_option("--report", report_path, "Report output path")->required();
  evaluate->add_option("--roc", roc_path, "ROC CSV output path (default: <report>.roc.csv)");

  // predict
  std::vector<std::string> assignments;
  std::string csv_path;
  auto* predict = app.add_subcommand("predict", "Predict one case");
  predict->add_option("--model", model_path, "Artifact JSON")->required();
  predict->add_option("--set,values", assignments, "name=value pairs (raw units)");
  predict->add_option("--csv", csv_path, "One-row CSV with a header line");

  // serve
  std::string host = "0.0.0.0";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Serve the /api/v1 HTTP API");
  serve->add_option("--model", model_path, "Artifact JSON")->required();
  serve->add_option("--port", port, "TCP port")->capture_default_str();
  serve->add_option("--host", host, "Bind address")->capture_default_str();

  // correlation
  std::string rows_mode = "all";
  auto* corr = app.add_subcommand("correlation", "Export the Pearson correlation matrix as CSV");
  corr->add_option("--data", data_path, "WDBC CSV file")->required();
  corr->add_option("--out", out_path, "CSV output path")->required();
  corr->add_option("--rows", rows_mode, "all | train (train fold of --seed/--test-fraction)")
      ->check(CLI::IsMember({"all", "train"}))
      ->capture_default_str();
  corr->add_option("--seed", opt.seed, "Split seed for --rows train");
  corr->add_option("--test-fraction", opt.test_fraction, "Split fraction for --rows train");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*train) {
      const Dataset data = parse_wdbc_csv(data_path);
      const TrainOutcome outcome = train_pipeline(data, opt, utc_timestamp());
      save_artifact(outcome.artifact, out_path);
      const auto& meta = outcome.artifact.meta;
      std::printf("features: %zu of %zu kept", outcome.artifact.feature_names.size(),
                  data.feature_count());
      if (meta.boruta_enabled) {
        int confirmed = 0, tentative = 0, rejected = 0;
        for (const auto& d : meta.boruta_decisions) {
          confirmed += d.status == FeatureStatus::Confirmed;
          tentative += d.status == FeatureStatus::Tentative;
          rejected += d.status == FeatureStatus::Rejected;
        }
        std::printf(" (boruta: %d confirmed, %d tentative, %d rejected)", confirmed, tentative,
                    rejected);
      }
      std::printf("\ntraining: %d iterations, converged=%s, cost=%.6g, %zu rows after smote\n",
                  meta.iterations_run, meta.converged ? "true" : "false", meta.final_cost,
                  meta.n_train_resampled);
      print_summary(outcome.artifact.metrics);
      std::printf("wrote %s\n", out_path.c_str());
    } else if (*evaluate) {
      const ModelArtifact artifact = load_artifact(model_path);
      const Dataset data = parse_wdbc_csv(data_path);
      const EvaluationReport report = evaluate_artifact(artifact, data);
      if (roc_path.empty()) roc_path = report_path + ".roc.csv";
      write_file(report_path, report_text(report));
      write_file(roc_path, roc_csv(report.roc));
      print_summary(report);
    } else if (*predict) {
      const Predictor predictor(load_artifact(model_path));
      std::map<std::string, double> features;
      if (!csv_path.empty()) {
        features = features_from_csv(csv_path, predictor.artifact().feature_names);
      }
      for (const auto& kv : assignments) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ValidationError(std::map<std::string, std::string>{{kv, "expected name=value"}});
        const std::string name = kv.substr(0, eq);
        features[name] = parse_value(name, kv.substr(eq + 1));
      }
      std::cout << predict_response_text(predictor.predict(features));
    } else if (*serve) {
      serve_http(load_artifact(model_path), host, port);
    } else if (*corr) {
      const Dataset data = parse_wdbc_csv(data_path);
      std::vector<std::size_t> rows;
      if (rows_mode == "train") {
        rows = stratified_split(data, opt.test_fraction, opt.seed).train;
      } else {
        for (std::size_t i = 0; i < data.size(); ++i) rows.push_back(i);
      }
      write_file(out_path, correlation_csv(correlation_matrix(data, rows)));
    }
  } catch (const FileError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const ValidationError& e) {
    for (const auto& [name, reason] : e.fields())
      std::fprintf(stderr, "error: feature '%s': %s\n", name.c_str(), reason.c_str());
    return kExitFailure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
  return 0;
}
