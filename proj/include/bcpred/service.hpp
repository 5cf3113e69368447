#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "bcpred/artifact.hpp"

namespace bcpred {

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Routes the /api/v1 JSON API against one loaded artifact. Holds no mutable
/// state, so handle() may be called from any number of threads.
///
///   POST /api/v1/predict   {"features": {name: value, ...}}
///   GET  /api/v1/model     feature names, per-feature min/mean/max, threshold
///   GET  /api/v1/metrics   held-out evaluation report
///   GET  /api/v1/roc       {"points": [{fpr, tpr, threshold}, ...]}
class PredictionService {
 public:
  explicit PredictionService(ModelArtifact artifact);

  HttpResponse handle(std::string_view method, std::string_view path,
                      std::string_view body) const;

  const Predictor& predictor() const noexcept { return predictor_; }

 private:
  HttpResponse predict(std::string_view body) const;
  HttpResponse model() const;
  HttpResponse metrics() const;
  HttpResponse roc() const;

  Predictor predictor_;
};

/// Blocking HTTP front end for PredictionService.
class HttpServer {
 public:
  explicit HttpServer(ModelArtifact artifact);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds host:port (port 0 picks a free one). Throws Error if binding fails.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Binds host:port and serves `artifact` until the process is killed.
void serve_http(ModelArtifact artifact, const std::string& host, int port);

}  // namespace bcpred
