#include "bcpred/service.hpp"

#include <cmath>
#include <cstdio>

#include "bcpred/error.hpp"
#include "httplib.h"
#include "json_io.hpp"

namespace bcpred {

using nlohmann::json;

namespace {

constexpr std::string_view kPrefix = "/api/v1/";

HttpResponse json_response(int status, const json& body) { return {status, body.dump(), "application/json"}; }

HttpResponse error_response(int status, const std::string& message) {
  return json_response(status, {{"error", message}});
}

}  // namespace

PredictionService::PredictionService(ModelArtifact artifact) : predictor_(std::move(artifact)) {}

HttpResponse PredictionService::handle(std::string_view method, std::string_view path,
                                       std::string_view body) const {
  // Strip any query string.
  if (const auto q = path.find('?'); q != std::string_view::npos) path = path.substr(0, q);
  if (method == "OPTIONS") return {204, "", "text/plain"};
  if (!path.starts_with(kPrefix)) return error_response(404, "not found");
  const std::string_view route = path.substr(kPrefix.size());

  struct Route {
    std::string_view name;
    std::string_view method;
  };
  static constexpr Route routes[] = {
      {"predict", "POST"}, {"model", "GET"}, {"metrics", "GET"}, {"roc", "GET"}};
  for (const auto& r : routes) {
    if (route != r.name) continue;
    if (method != r.method) {
      return error_response(405, "method " + std::string(method) + " not allowed on " +
                                     std::string(path));
    }
    if (r.name == "predict") return predict(body);
    if (r.name == "model") return model();
    if (r.name == "metrics") return metrics();
    return roc();
  }
  return error_response(404, "not found");
}

HttpResponse PredictionService::predict(std::string_view body) const {
  json request;
  try {
    request = json::parse(body);
  } catch (const json::parse_error&) {
    return error_response(400, "malformed JSON body");
  }
  if (!request.is_object() || !request.contains("features") || !request["features"].is_object()) {
    return json_response(422, {{"error", "validation failed"},
                               {"fields", {{"features", "expected an object of name: number"}}}});
  }

  std::map<std::string, double> features;
  std::map<std::string, std::string> problems;
  for (const auto& [name, value] : request["features"].items()) {
    if (value.is_number()) {
      features[name] = value.get<double>();
    } else {
      problems[name] = "must be a finite number";
    }
  }
  try {
    if (!problems.empty()) {
      // Fold in the missing/extra checks so the client sees every problem at once.
      try {
        predictor_.predict(features);
      } catch (const ValidationError& e) {
        for (const auto& [k, v] : e.fields()) problems.emplace(k, v);
      }
      throw ValidationError(std::move(problems));
    }
    const PredictResponse r = predictor_.predict(features);
    return json_response(200, {{"probability", r.probability},
                               {"label", r.label},
                               {"threshold", r.threshold},
                               {"model_version", r.model_version}});
  } catch (const ValidationError& e) {
    return json_response(422, {{"error", "validation failed"}, {"fields", e.fields()}});
  }
}

HttpResponse PredictionService::model() const {
  const ModelArtifact& a = predictor_.artifact();
  json features = json::array();
  for (std::size_t j = 0; j < a.feature_names.size(); ++j) {
    json f = {{"name", a.feature_names[j]}};
    if (j < a.feature_ranges.size()) {
      f["min"] = a.feature_ranges[j].min;
      f["mean"] = a.feature_ranges[j].mean;
      f["max"] = a.feature_ranges[j].max;
    }
    features.push_back(std::move(f));
  }
  return json_response(200, {{"feature_names", a.feature_names},
                             {"features", features},
                             {"threshold", a.threshold},
                             {"version", predictor_.version()},
                             {"schema_version", a.schema_version},
                             {"label_map", {{"0", "B"}, {"1", "M"}}},
                             {"test_accuracy", a.metrics.accuracy},
                             {"test_auc", a.metrics.auc}});
}

HttpResponse PredictionService::metrics() const {
  json j = report_to_json(predictor_.artifact().metrics);
  j.erase("roc");
  return json_response(200, j);
}

HttpResponse PredictionService::roc() const {
  return json_response(200, {{"points", report_to_json(predictor_.artifact().metrics)["roc"]}});
}

// ---------------------------------------------------------------------------

struct HttpServer::Impl {
  explicit Impl(ModelArtifact artifact) : service(std::move(artifact)) {}
  PredictionService service;
  httplib::Server server;
};

HttpServer::HttpServer(ModelArtifact artifact)
    : impl_(std::make_unique<Impl>(std::move(artifact))) {
  auto& server = impl_->server;
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  const auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    const HttpResponse r = impl_->service.handle(req.method, req.path, req.body);
    res.status = r.status;
    if (!r.body.empty()) res.set_content(r.body, r.content_type);
  };
  server.Get(".*", handler);
  server.Post(".*", handler);
  server.Put(".*", handler);
  server.Delete(".*", handler);
  server.Patch(".*", handler);
  server.Options(".*", handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  int bound = -1;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (impl_->server.bind_to_port(host, port)) {
    bound = port;
  }
  if (bound <= 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

void serve_http(ModelArtifact artifact, const std::string& host, int port) {
  HttpServer server(std::move(artifact));
  const int bound = server.bind(host, port);
  std::fprintf(stderr, "serving on http://%s:%d/api/v1/\n", host.c_str(), bound);
  server.listen();
}

}  // namespace bcpred
