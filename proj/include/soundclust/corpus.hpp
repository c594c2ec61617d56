#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "soundclust/types.hpp"

namespace soundclust {

// One retrievable sound. Tags are lowercase and unique once the document has
// passed through a Corpus.
struct SoundDocument {
  std::string id;
  std::string name;
  std::vector<std::string> tags;
  double duration = 0.0;
  std::optional<std::string> preview_url;
  std::optional<Matrix> frame_features;  // frames x dims, time order
  std::optional<Vector> clip_vector;

  bool has_features() const { return frame_features.has_value() || clip_vector.has_value(); }
};

// Lowercases and deduplicates tags, keeping first-occurrence order.
std::vector<std::string> normalize_tags(const std::vector<std::string>& tags);

// Immutable, validated collection of documents in ranking order.
class Corpus {
 public:
  Corpus() = default;

  // Validates ids and feature dimensionality and normalizes tags.
  // Throws Error(kDuplicateId | kDimensionMismatch | kInvalidArgument).
  explicit Corpus(std::vector<SoundDocument> documents);

  const std::vector<SoundDocument>& documents() const { return documents_; }
  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }
  const SoundDocument& operator[](std::size_t i) const { return documents_[i]; }

  // Shared clip_vector dimensionality, if any document carries one.
  std::optional<std::size_t> feature_dim() const { return feature_dim_; }

  std::optional<std::size_t> index_of(std::string_view id) const;
  const SoundDocument* find(std::string_view id) const;

  // Number of documents carrying each tag.
  std::unordered_map<std::string, std::size_t> tag_document_frequency() const;

 private:
  std::vector<SoundDocument> documents_;
  std::unordered_map<std::string, std::size_t> index_;
  std::optional<std::size_t> feature_dim_;
};

struct LabeledDataset {
  std::string name;
  Corpus corpus;
  std::map<std::string, std::string> labels;  // document id -> class

  // Ground-truth classes in corpus order.
  std::vector<std::string> classes_in_order() const;
};

// Validates cross references: every label refers to a corpus document, every
// document is labeled, and at least two distinct classes exist.
LabeledDataset make_labeled_dataset(Corpus corpus, std::map<std::string, std::string> labels,
                                    std::string name = {});

Corpus parse_corpus(std::string_view json_text);
LabeledDataset parse_labeled_dataset(std::string_view json_text);

// Document-file JSON; parse_corpus(serialize_corpus(c)) reproduces c.
std::string serialize_corpus(const Corpus& corpus);
std::string serialize_labeled_dataset(const LabeledDataset& dataset);

Corpus load_corpus_file(const std::string& path);
LabeledDataset load_labeled_dataset_file(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace soundclust
