#include "soundclust/service.hpp"

#include <chrono>

#include <httplib.h>

#include "soundclust/error.hpp"
#include "soundclust/json_io.hpp"
#include "soundclust/pipeline.hpp"

namespace soundclust {
namespace {

HttpReply error_reply(int status, ErrorCode code, const std::string& message) {
  json body{{"error", {{"code", error_code_name(code)}, {"message", message}}}};
  return HttpReply{status, body.dump(), std::nullopt};
}

HttpReply json_reply(const json& body) { return HttpReply{200, body.dump(), std::nullopt}; }

template <class T>
T field_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key) || obj[key].is_null()) return fallback;
  try {
    return obj[key].get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kMalformedJson, std::string("field \"") + key + "\" has the wrong type");
  }
}

}  // namespace

ClusterService::ClusterService(ServiceConfig config)
    : config_(std::move(config)), corpus_(std::make_shared<const Corpus>()) {}

void ClusterService::replace_corpus(Corpus corpus) {
  auto next = std::make_shared<const Corpus>(std::move(corpus));
  std::lock_guard<std::mutex> lock(corpus_mutex_);
  corpus_ = std::move(next);
}

std::shared_ptr<const Corpus> ClusterService::corpus_snapshot() const {
  std::lock_guard<std::mutex> lock(corpus_mutex_);
  return corpus_;
}

HttpReply ClusterService::health() const {
  return json_reply(json{{"status", "ok"}, {"corpus_documents", corpus_snapshot()->size()}});
}

HttpReply ClusterService::load_corpus(std::string_view body) {
  try {
    Corpus corpus = parse_corpus(body);
    const std::size_t n = corpus.size();
    replace_corpus(std::move(corpus));
    return json_reply(json{{"loaded", n}});
  } catch (const Error& e) {
    return error_reply(400, e.code(), e.what());
  }
}

HttpReply ClusterService::cluster(std::string_view body) const {
  const auto snapshot = corpus_snapshot();
  try {
    const json request = parse_json_text(body);
    if (!request.is_object()) throw Error(ErrorCode::kMalformedJson, "request must be a JSON object");
    const bool by_id = request.contains("ids") && !request["ids"].is_null();
    const bool inline_docs = request.contains("documents") && !request["documents"].is_null();
    if (by_id == inline_docs) {
      throw Error(ErrorCode::kInvalidArgument, "request needs exactly one of \"ids\" or \"documents\"");
    }

    std::optional<Corpus> inline_corpus;
    std::vector<const SoundDocument*> docs;
    const std::unordered_map<std::string, std::size_t>* frequency = nullptr;
    std::unordered_map<std::string, std::size_t> corpus_frequency;
    if (by_id) {
      const auto ids = field_or<std::vector<std::string>>(request, "ids", {});
      if (ids.size() > config_.max_documents) {
        return error_reply(413, ErrorCode::kTooManyDocuments,
                           std::to_string(ids.size()) + " documents exceed the limit of " +
                               std::to_string(config_.max_documents));
      }
      for (const auto& id : ids) {
        const SoundDocument* doc = snapshot->find(id);
        if (doc == nullptr) throw Error(ErrorCode::kUnknownId, "unknown document id: " + id);
        docs.push_back(doc);
      }
      corpus_frequency = snapshot->tag_document_frequency();
      frequency = &corpus_frequency;
    } else {
      if (!request["documents"].is_array()) {
        throw Error(ErrorCode::kMalformedJson, "\"documents\" must be an array");
      }
      if (request["documents"].size() > config_.max_documents) {
        return error_reply(413, ErrorCode::kTooManyDocuments,
                           std::to_string(request["documents"].size()) +
                               " documents exceed the limit of " +
                               std::to_string(config_.max_documents));
      }
      inline_corpus = corpus_from_json(json{{"documents", request["documents"]}});
      for (const auto& d : inline_corpus->documents()) docs.push_back(&d);
    }

    const auto max_results = field_or<std::size_t>(request, "max_results", config_.max_results);
    if (max_results == 0) throw Error(ErrorCode::kInvalidArgument, "max_results must be positive");
    if (docs.size() > max_results) docs.resize(max_results);

    PipelineInput input;
    input.documents = std::move(docs);
    input.tag_frequency = frequency;
    input.projection = config_.projection ? &*config_.projection : nullptr;
    input.clustering.seed = field_or<std::uint64_t>(request, "seed", config_.default_seed);
    input.clustering.prune = field_or<bool>(request, "prune", false);
    if (request.contains("prune_threshold") && !request["prune_threshold"].is_null()) {
      input.clustering.prune_threshold = field_or<double>(request, "prune_threshold", 0.0);
    }
    if (request.contains("k") && !request["k"].is_null()) {
      const auto k = field_or<std::int64_t>(request, "k", 0);
      if (k <= 0) throw Error(ErrorCode::kInvalidArgument, "k must be positive");
      input.clustering.graph.k_override = static_cast<std::size_t>(k);
    }
    const auto scheme = field_or<std::string>(request, "scheme", "clip");
    if (scheme != "clip") {
      input.features.scheme = scheme_from_name(scheme);
      if (!input.features.scheme) throw Error(ErrorCode::kInvalidArgument, "unknown scheme: " + scheme);
    }
    input.n_labels = field_or<std::size_t>(request, "n_labels", kDefaultLabelCount);
    if (input.n_labels == 0) throw Error(ErrorCode::kInvalidArgument, "n_labels must be positive");
    const bool include_timing = field_or<bool>(request, "timing", false);

    const auto start = std::chrono::steady_clock::now();
    const PipelineResult result = run_pipeline(input);
    const double elapsed =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    json response = pipeline_result_to_json(result, input);
    if (include_timing) response["timing_ms"] = elapsed;
    HttpReply reply = json_reply(response);
    reply.pipeline_ms = elapsed;
    return reply;
  } catch (const Error& e) {
    return error_reply(400, e.code(), e.what());
  }
}

struct HttpServer::Impl {
  ClusterService& service;
  httplib::Server server;

  explicit Impl(ClusterService& s) : service(s) {}
};

namespace {

void send(httplib::Response& res, const HttpReply& reply) {
  res.status = reply.status;
  if (reply.pipeline_ms) res.set_header("X-Pipeline-Ms", json(*reply.pipeline_ms).dump());
  res.set_content(reply.body, "application/json");
}

}  // namespace

HttpServer::HttpServer(ClusterService& service) : impl_(std::make_unique<Impl>(service)) {
  auto& svc = impl_->service;
  impl_->server.Get("/v1/health", [&svc](const httplib::Request&, httplib::Response& res) {
    send(res, svc.health());
  });
  impl_->server.Post("/v1/corpus", [&svc](const httplib::Request& req, httplib::Response& res) {
    send(res, svc.load_corpus(req.body));
  });
  impl_->server.Post("/v1/cluster", [&svc](const httplib::Request& req, httplib::Response& res) {
    send(res, svc.cluster(req.body));
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw Error(ErrorCode::kIo, "cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::serve() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace soundclust
