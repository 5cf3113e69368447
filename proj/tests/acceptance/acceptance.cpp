// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "bcpred/artifact.hpp"
#include "bcpred/boruta.hpp"
#include "bcpred/logreg.hpp"
#include "bcpred/metrics.hpp"
#include "bcpred/pipeline.hpp"
#include "bcpred/service.hpp"
#include "bcpred/smote.hpp"
#include "httplib.h"
#include "json.hpp"

using namespace bcpred;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(const std::string& name, const Outcome& o) {
  std::printf("%s  %-22s %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

void run(const std::string& name, const std::function<Outcome()>& check) {
  try {
    report(name, check());
  } catch (const std::exception& e) {
    report(name, {false, std::string("exception: ") + e.what()});
  }
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Command {
  int exit_code = -1;
  std::string output;
};

Command cli(const std::string& args) {
  const std::string cmd = std::string("\"") + BCPRED_CLI_PATH + "\" " + args + " 2>&1";
  Command r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) r.output += buf.data();
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

fs::path scratch() {
  static const fs::path dir = [] {
    auto p = fs::temp_directory_path() / ("bcpred-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

// Trains through the CLI, as a user would.
fs::path cli_train(std::uint64_t seed, const std::string& name) {
  const fs::path out = scratch() / name;
  const auto r = cli("train --data " + q(BCPRED_WDBC_CSV) + " --seed " + std::to_string(seed) +
                     " --out " + q(out));
  if (r.exit_code != 0) throw std::runtime_error("train failed: " + r.output);
  return out;
}

Outcome headline() {
  const auto start = std::chrono::steady_clock::now();
  const ModelArtifact a = load_artifact(cli_train(42, "seed42.json"));
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const Dataset data = parse_wdbc_csv(BCPRED_WDBC_CSV);
  double lo = a.metrics.accuracy, hi = a.metrics.accuracy;
  std::string band;
  for (std::uint64_t seed = 43; seed <= 51; ++seed) {
    PipelineOptions opt;
    opt.seed = seed;
    const auto m = train_pipeline(data, opt).artifact.metrics;
    lo = std::min(lo, m.accuracy);
    hi = std::max(hi, m.accuracy);
    band += fmt(" %llu:%.4f/%.4f", static_cast<unsigned long long>(seed), m.accuracy, m.auc);
  }
  const bool pass = data.size() == 569 && a.metrics.accuracy >= 0.95 && a.metrics.auc >= 0.98 &&
                    lo <= 0.98 && 0.98 <= hi && seconds < 30.0;
  return {pass, fmt("seed 42 accuracy %.4f auc %.4f in %.1f s; accuracy range over seeds 42-51 "
                    "[%.4f, %.4f] (acc/auc%s)",
                    a.metrics.accuracy, a.metrics.auc, seconds, lo, hi, band.c_str())};
}

struct Instance {
  Coefficients beta;
  std::vector<std::vector<double>> rows;
  std::vector<int> y;
};

Instance random_instance(SplitMix64& rng, std::size_t m, std::size_t n) {
  Instance in;
  in.beta.intercept = 4.0 * rng.uniform() - 2.0;
  for (std::size_t j = 0; j < n; ++j) in.beta.weights.push_back(4.0 * rng.uniform() - 2.0);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> r(n);
    for (double& v : r) v = oracle::normal(rng);
    in.rows.push_back(r);
    in.y.push_back(rng.uniform() < 0.5 ? 1 : 0);
  }
  return in;
}

Outcome gradient_oracle() {
  SplitMix64 rng(20240601);
  double worst = 0.0;
  int bad = 0;
  for (int t = 0; t < 100; ++t) {
    const auto in = random_instance(rng, 1 + rng.below(50), 1 + rng.below(10));
    const auto g = gradient(in.beta, Matrix::from_rows(in.rows), in.y);
    std::vector<double> theta{in.beta.intercept};
    theta.insert(theta.end(), in.beta.weights.begin(), in.beta.weights.end());
    const auto fd = oracle::central_difference(
        [&](const std::vector<double>& th) { return oracle::mean_nll(th, in.rows, in.y); }, theta,
        1e-6);
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double rel = std::abs(g[k] - fd[k]) / std::abs(fd[k]);
      worst = std::max(worst, rel);
      bad += rel >= 1e-6;
    }
  }
  return {bad == 0, fmt("100 instances, worst relative error %.3g", worst)};
}

Outcome optimizer_oracle() {
  const auto inst = oracle::optimizer_instance();
  const double grid = oracle::grid_min_nll_3d(inst.x, inst.y, -5.0, 5.0, 100);
  const Matrix x = Matrix::from_rows(inst.x);
  const auto fit = fit_gradient_descent(x, inst.y, TrainConfig{});
  const double nll = nll_cost(fit.coefficients, x, inst.y);
  return {nll <= grid + 1e-3, fmt("converged NLL %.9f, grid minimum %.9f", nll, grid)};
}

Outcome auc_oracle() {
  SplitMix64 rng(99);
  double worst = 0.0;
  int done = 0;
  while (done < 100) {
    const std::size_t n = 2 + rng.below(29);
    std::vector<int> y(n);
    std::vector<double> s(n);
    const int levels = 1 + static_cast<int>(rng.below(8));  // few levels forces ties
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = rng.uniform() < 0.5 ? 1 : 0;
      s[i] = static_cast<double>(rng.below(levels)) / levels;
    }
    if (std::count(y.begin(), y.end(), 1) == 0 || std::count(y.begin(), y.end(), 0) == 0) continue;
    worst = std::max(worst, std::abs(auc_trapezoid(roc_curve(y, s)) - oracle::mann_whitney_auc(y, s)));
    ++done;
  }
  return {worst <= 1e-12, fmt("100 instances with ties, worst |diff| %.3g", worst)};
}

Outcome smote_properties() {
  SplitMix64 rng(314);
  double worst = 0.0;
  int count_errors = 0, repro_errors = 0, cases = 0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t minority = 6 + rng.below(20), majority = minority + 5 + rng.below(60);
    const std::size_t n = 1 + rng.below(5);
    std::vector<std::vector<double>> rows;
    std::vector<int> y;
    for (std::size_t i = 0; i < minority + majority; ++i) {
      std::vector<double> r(n);
      for (double& v : r) v = oracle::normal(rng);
      rows.push_back(r);
      y.push_back(i < minority ? 1 : 0);
    }
    SmoteConfig cfg;
    cfg.k = 1 + static_cast<int>(rng.below(5));
    cfg.target_ratio = 0.5 + 0.5 * rng.uniform();
    cfg.seed = rng.next();
    const Matrix x = Matrix::from_rows(rows);
    const auto res = smote_oversample(x, y, cfg);
    const auto again = smote_oversample(x, y, cfg);
    repro_errors += !(res.features == again.features && res.labels == again.labels);

    const auto target = static_cast<std::size_t>(std::llround(cfg.target_ratio * majority));
    const auto pos = static_cast<std::size_t>(std::count(res.labels.begin(), res.labels.end(), 1));
    const auto neg = static_cast<std::size_t>(std::count(res.labels.begin(), res.labels.end(), 0));
    count_errors += !(pos == std::max(target, minority) && neg == majority);

    for (std::size_t s = 0; s < res.provenance.size(); ++s) {
      const auto& p = res.provenance[s];
      const auto got = res.features.row(rows.size() + s);
      for (std::size_t c = 0; c < n; ++c) {
        const double expect = rows[p.base][c] + p.gap * (rows[p.neighbor][c] - rows[p.base][c]);
        worst = std::max(worst, std::abs(got[c] - expect));
      }
      worst = std::max(worst, (p.gap < 0.0 || p.gap > 1.0) ? 1.0 : 0.0);
    }
    ++cases;
  }
  const bool pass = worst <= 1e-12 && count_errors == 0 && repro_errors == 0;
  return {pass, fmt("%d cases: worst segment residual %.3g, count errors %d, "
                    "non-reproducible %d",
                    cases, worst, count_errors, repro_errors)};
}

Outcome boruta_ground_truth() {
  const std::vector<std::string> names{"inf0", "inf1", "inf2", "noise0", "noise1", "noise2"};
  int correct = 0;
  std::string misses;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = oracle::boruta_instance(seed);
    BorutaConfig cfg;
    cfg.seed = seed;
    const auto d = boruta_run(Matrix::from_rows(g.x), g.y, names, cfg);
    bool ok = true;
    for (std::size_t j = 0; j < d.size(); ++j) {
      const auto want = j < 3 ? FeatureStatus::Confirmed : FeatureStatus::Rejected;
      if (d[j].status != want) {
        ok = false;
        misses += fmt(" seed %llu %s %s(%d hits);", static_cast<unsigned long long>(seed),
                      d[j].feature_name.c_str(), to_string(d[j].status), d[j].hits);
      }
    }
    correct += ok;
  }
  int confirmed_noise = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = oracle::boruta_instance(seed, 500, true);
    BorutaConfig cfg;
    cfg.seed = seed;
    for (const auto& d : boruta_run(Matrix::from_rows(g.x), g.y, names, cfg))
      confirmed_noise += d.status == FeatureStatus::Confirmed;
  }
  return {correct >= 9 && confirmed_noise == 0,
          fmt("%d/10 seeds fully correct;%s all-noise Confirmed count %d", correct,
              misses.c_str(), confirmed_noise)};
}

std::string numeric_content(const fs::path& p) {
  auto j = json::parse(slurp(p));
  j["training_meta"].erase("timestamp");
  return j.dump();
}

Outcome determinism() {
  const fs::path a = cli_train(42, "det-a.json");
  const fs::path b = cli_train(42, "det-b.json");
  const bool same = numeric_content(a) == numeric_content(b);
  return {same, same ? "two seed-42 runs identical apart from timestamp"
                     : "artifacts differ beyond the timestamp"};
}

std::map<std::string, std::string> key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (const auto eq = line.find('='); eq != std::string::npos)
      kv[line.substr(0, eq)] = line.substr(eq + 1);
  return kv;
}

Outcome service_conformance() {
  const fs::path model = scratch() / "seed42.json";
  const ModelArtifact a = load_artifact(model);
  const PredictionService svc(a);
  std::vector<std::string> failed;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) failed.push_back(what);
  };

  json means = json::object();
  for (std::size_t j = 0; j < a.feature_names.size(); ++j)
    means[a.feature_names[j]] = a.standardization.means[j];
  const auto r = svc.handle("POST", "/api/v1/predict", json{{"features", means}}.dump());
  expect(r.status == 200, "means predict status");
  const double p = json::parse(r.body).value("probability", -1.0);
  expect(std::abs(p - sigmoid(a.coefficients.intercept)) <= 1e-15, "means predict = sigmoid(b0)");

  json partial = means;
  partial.erase(a.feature_names.front());
  const auto missing = svc.handle("POST", "/api/v1/predict", json{{"features", partial}}.dump());
  expect(missing.status == 422 &&
             json::parse(missing.body)["fields"].contains(a.feature_names.front()),
         "missing feature 422");
  expect(svc.handle("POST", "/api/v1/predict", "{oops").status == 400, "malformed 400");
  expect(svc.handle("GET", "/api/v1/unknown", "").status == 404, "unknown 404");

  const json model_body = json::parse(svc.handle("GET", "/api/v1/model", "").body);
  expect(model_body["feature_names"].get<std::vector<std::string>>() == a.feature_names &&
             model_body["features"].size() == a.feature_names.size() &&
             model_body.contains("threshold") && model_body["version"] == a.version(),
         "model metadata");

  const json metrics = json::parse(svc.handle("GET", "/api/v1/metrics", "").body);
  std::vector<RocPoint> pts;
  const json roc = json::parse(svc.handle("GET", "/api/v1/roc", "").body);
  for (const auto& pt : roc["points"])
    pts.push_back({pt["fpr"].get<double>(), pt["tpr"].get<double>(),
                   pt["threshold"].is_null() ? INFINITY : pt["threshold"].get<double>()});
  expect(std::abs(auc_trapezoid(pts) - metrics["auc"].get<double>()) <= 1e-9, "roc auc = metrics auc");

  // /predict against the CLI on every WDBC row, over real HTTP
  HttpServer server(a);
  const int port = server.bind("127.0.0.1", 0);
  std::thread t([&] { server.listen(); });
  httplib::Client client("127.0.0.1", port);
  const Dataset data = parse_wdbc_csv(BCPRED_WDBC_CSV);
  double worst = 0.0;
  for (std::size_t i = 0; i < data.size(); i += 57) {
    json f = json::object();
    std::string args = "predict --model " + q(model);
    for (const auto& name : a.feature_names) {
      const double v = data.record(i).features[data.feature_index(name)];
      f[name] = v;
      args += " --set \"" + name + "=" + fmt("%.17g", v) + "\"";
    }
    const auto http = client.Post("/api/v1/predict", json{{"features", f}}.dump(), "application/json");
    const auto c = cli(args);
    if (!http || http->status != 200 || c.exit_code != 0) {
      failed.push_back("row " + std::to_string(i) + " request");
      continue;
    }
    const json body = json::parse(http->body);
    const auto kv = key_values(c.output);
    worst = std::max(worst, std::abs(body["probability"].get<double>() - std::stod(kv.at("probability"))));
    expect(body["label"] == kv.at("label"), "label agreement");
  }
  const auto cors = client.Options("/api/v1/predict");
  expect(cors && cors->get_header_value("Access-Control-Allow-Origin") == "*", "CORS headers");
  server.stop();
  t.join();
  expect(worst <= 1e-15, "/predict vs cmd_predict");

  std::string detail = fmt("/predict vs cmd_predict worst |diff| %.3g", worst);
  for (const auto& f : failed) detail += "; failed: " + f;
  return {failed.empty(), detail};
}

}  // namespace

int main() {
  run("headline", headline);
  run("gradient-oracle", gradient_oracle);
  run("optimizer-oracle", optimizer_oracle);
  run("auc-oracle", auc_oracle);
  run("smote-properties", smote_properties);
  run("boruta-ground-truth", boruta_ground_truth);
  run("determinism", determinism);
  run("service-conformance", service_conformance);
  std::error_code ec;
  fs::remove_all(scratch(), ec);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
