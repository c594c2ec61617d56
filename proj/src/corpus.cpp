#include "soundclust/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "soundclust/error.hpp"
#include "soundclust/json_io.hpp"

namespace soundclust {

std::vector<std::string> normalize_tags(const std::vector<std::string>& tags) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  out.reserve(tags.size());
  for (const auto& tag : tags) {
    std::string lowered(tag);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lowered.empty()) continue;
    if (seen.insert(lowered).second) out.push_back(std::move(lowered));
  }
  return out;
}

Corpus::Corpus(std::vector<SoundDocument> documents) : documents_(std::move(documents)) {
  index_.reserve(documents_.size());
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    auto& doc = documents_[i];
    if (doc.id.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "document at position " + std::to_string(i) +
                                                   " has an empty id");
    }
    if (!index_.emplace(doc.id, i).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate document id: " + doc.id);
    }
    if (!(doc.duration >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "negative duration for document " + doc.id);
    }
    doc.tags = normalize_tags(doc.tags);
    if (doc.clip_vector) {
      const auto dim = static_cast<std::size_t>(doc.clip_vector->size());
      if (dim == 0) {
        throw Error(ErrorCode::kDimensionMismatch, "empty clip_vector for document " + doc.id);
      }
      if (!feature_dim_) {
        feature_dim_ = dim;
      } else if (*feature_dim_ != dim) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "clip_vector of document " + doc.id + " has " + std::to_string(dim) +
                        " dims, expected " + std::to_string(*feature_dim_));
      }
    }
  }
}

std::optional<std::size_t> Corpus::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const SoundDocument* Corpus::find(std::string_view id) const {
  auto idx = index_of(id);
  return idx ? &documents_[*idx] : nullptr;
}

std::unordered_map<std::string, std::size_t> Corpus::tag_document_frequency() const {
  std::unordered_map<std::string, std::size_t> freq;
  for (const auto& doc : documents_) {
    for (const auto& tag : doc.tags) ++freq[tag];
  }
  return freq;
}

std::vector<std::string> LabeledDataset::classes_in_order() const {
  std::vector<std::string> out;
  out.reserve(corpus.size());
  for (const auto& doc : corpus.documents()) out.push_back(labels.at(doc.id));
  return out;
}

LabeledDataset make_labeled_dataset(Corpus corpus, std::map<std::string, std::string> labels,
                                    std::string name) {
  for (const auto& [id, cls] : labels) {
    if (!corpus.index_of(id)) throw Error(ErrorCode::kUnknownId, "label refers to unknown id: " + id);
  }
  std::set<std::string> classes;
  for (const auto& doc : corpus.documents()) {
    auto it = labels.find(doc.id);
    if (it == labels.end()) {
      throw Error(ErrorCode::kUnlabeledDocument, "document has no label: " + doc.id);
    }
    classes.insert(it->second);
  }
  if (classes.size() < 2) {
    throw Error(ErrorCode::kSingleClass, "labeled dataset needs at least two distinct classes");
  }
  return LabeledDataset{std::move(name), std::move(corpus), std::move(labels)};
}

Corpus parse_corpus(std::string_view json_text) {
  return corpus_from_json(parse_json_text(json_text));
}

LabeledDataset parse_labeled_dataset(std::string_view json_text) {
  const json root = parse_json_text(json_text);
  Corpus corpus = corpus_from_json(root);
  if (!root.contains("labels") || !root["labels"].is_object()) {
    throw Error(ErrorCode::kMalformedJson, "labeled dataset needs a \"labels\" object");
  }
  std::map<std::string, std::string> labels;
  for (const auto& [id, cls] : root["labels"].items()) {
    if (!cls.is_string()) throw Error(ErrorCode::kMalformedJson, "label of " + id + " is not a string");
    labels.emplace(id, cls.get<std::string>());
  }
  std::string name;
  if (root.contains("name") && root["name"].is_string()) name = root["name"].get<std::string>();
  return make_labeled_dataset(std::move(corpus), std::move(labels), std::move(name));
}

std::string serialize_corpus(const Corpus& corpus) { return corpus_to_json(corpus).dump(); }

std::string serialize_labeled_dataset(const LabeledDataset& dataset) {
  json root = corpus_to_json(dataset.corpus);
  json labels = json::object();
  for (const auto& [id, cls] : dataset.labels) labels[id] = cls;
  root["labels"] = std::move(labels);
  if (!dataset.name.empty()) root["name"] = dataset.name;
  return root.dump();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write file: " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

Corpus load_corpus_file(const std::string& path) { return parse_corpus(read_file(path)); }

LabeledDataset load_labeled_dataset_file(const std::string& path) {
  return parse_labeled_dataset(read_file(path));
}

}  // namespace soundclust
