#include "soundclust/json_io.hpp"

#include "soundclust/error.hpp"

namespace soundclust {
namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedJson, what);
}

double number_at(const json& v, const std::string& ctx) {
  if (!v.is_number()) malformed(ctx + ": expected a number");
  return v.get<double>();
}

}  // namespace

json parse_json_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    malformed(std::string("invalid JSON: ") + e.what());
  }
}

json document_to_json(const SoundDocument& doc) {
  json out = json::object();
  out["id"] = doc.id;
  out["name"] = doc.name;
  out["tags"] = doc.tags;
  out["duration"] = doc.duration;
  if (doc.preview_url) out["preview_url"] = *doc.preview_url;
  if (doc.frame_features) {
    json rows = json::array();
    const Matrix& f = *doc.frame_features;
    for (Eigen::Index r = 0; r < f.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < f.cols(); ++c) row.push_back(f(r, c));
      rows.push_back(std::move(row));
    }
    out["frame_features"] = std::move(rows);
  }
  if (doc.clip_vector) {
    json vec = json::array();
    for (Eigen::Index i = 0; i < doc.clip_vector->size(); ++i) vec.push_back((*doc.clip_vector)(i));
    out["clip_vector"] = std::move(vec);
  }
  return out;
}

SoundDocument document_from_json(const json& value) {
  if (!value.is_object()) malformed("document must be an object");
  SoundDocument doc;
  if (!value.contains("id") || !value["id"].is_string()) malformed("document needs a string \"id\"");
  doc.id = value["id"].get<std::string>();
  const std::string ctx = "document " + doc.id;

  if (value.contains("name")) {
    if (!value["name"].is_string()) malformed(ctx + ": \"name\" must be a string");
    doc.name = value["name"].get<std::string>();
  }
  if (value.contains("tags")) {
    const json& tags = value["tags"];
    if (!tags.is_array()) malformed(ctx + ": \"tags\" must be an array");
    for (const auto& t : tags) {
      if (!t.is_string()) malformed(ctx + ": tags must be strings");
      doc.tags.push_back(t.get<std::string>());
    }
  }
  if (value.contains("duration")) doc.duration = number_at(value["duration"], ctx + " duration");
  if (value.contains("preview_url") && !value["preview_url"].is_null()) {
    if (!value["preview_url"].is_string()) malformed(ctx + ": \"preview_url\" must be a string");
    doc.preview_url = value["preview_url"].get<std::string>();
  }
  if (value.contains("frame_features") && !value["frame_features"].is_null()) {
    const json& rows = value["frame_features"];
    if (!rows.is_array()) malformed(ctx + ": \"frame_features\" must be an array of arrays");
    const std::size_t n_rows = rows.size();
    std::size_t n_cols = 0;
    if (n_rows > 0) {
      if (!rows[0].is_array()) malformed(ctx + ": frame rows must be arrays");
      n_cols = rows[0].size();
    }
    Matrix frames(static_cast<Eigen::Index>(n_rows), static_cast<Eigen::Index>(n_cols));
    for (std::size_t r = 0; r < n_rows; ++r) {
      const json& row = rows[r];
      if (!row.is_array()) malformed(ctx + ": frame rows must be arrays");
      if (row.size() != n_cols) {
        throw Error(ErrorCode::kDimensionMismatch,
                    ctx + ": frame row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                        " values, expected " + std::to_string(n_cols));
      }
      for (std::size_t c = 0; c < n_cols; ++c) {
        frames(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            number_at(row[c], ctx + " frame_features");
      }
    }
    doc.frame_features = std::move(frames);
  }
  if (value.contains("clip_vector") && !value["clip_vector"].is_null()) {
    const json& vec = value["clip_vector"];
    if (!vec.is_array()) malformed(ctx + ": \"clip_vector\" must be an array");
    Vector v(static_cast<Eigen::Index>(vec.size()));
    for (std::size_t i = 0; i < vec.size(); ++i) {
      v(static_cast<Eigen::Index>(i)) = number_at(vec[i], ctx + " clip_vector");
    }
    doc.clip_vector = std::move(v);
  }
  return doc;
}

json corpus_to_json(const Corpus& corpus) {
  json docs = json::array();
  for (const auto& doc : corpus.documents()) docs.push_back(document_to_json(doc));
  return json{{"documents", std::move(docs)}};
}

Corpus corpus_from_json(const json& value) {
  if (!value.is_object() || !value.contains("documents") || !value["documents"].is_array()) {
    malformed("document file needs a \"documents\" array");
  }
  std::vector<SoundDocument> docs;
  docs.reserve(value["documents"].size());
  for (const auto& d : value["documents"]) docs.push_back(document_from_json(d));
  return Corpus(std::move(docs));
}

}  // namespace soundclust
