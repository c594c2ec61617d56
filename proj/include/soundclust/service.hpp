#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "soundclust/corpus.hpp"
#include "soundclust/features.hpp"

namespace soundclust {

struct ServiceConfig {
  std::size_t max_results = 500;      // ranking cutoff applied to each request
  std::size_t max_documents = 10000;  // larger requests are rejected with 413
  std::uint64_t default_seed = 0;
  std::optional<ProjectionModel> projection;
};

struct HttpReply {
  int status = 200;
  std::string body;
  std::optional<double> pipeline_ms;
};

// Request handling independent of the transport. Handlers are safe to call
// concurrently; corpus replacement is atomic with respect to cluster requests.
class ClusterService {
 public:
  explicit ClusterService(ServiceConfig config = {});

  void replace_corpus(Corpus corpus);
  std::shared_ptr<const Corpus> corpus_snapshot() const;
  const ServiceConfig& config() const { return config_; }

  HttpReply health() const;
  HttpReply load_corpus(std::string_view body);
  HttpReply cluster(std::string_view body) const;

 private:
  ServiceConfig config_;
  mutable std::mutex corpus_mutex_;
  std::shared_ptr<const Corpus> corpus_;
};

// HTTP binding: GET /v1/health, POST /v1/corpus, POST /v1/cluster.
class HttpServer {
 public:
  explicit HttpServer(ClusterService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Returns the bound port; port 0 picks a free one. Throws Error(kIo).
  int bind(const std::string& host, int port);
  // Blocks until stop() is called.
  void serve();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace soundclust
