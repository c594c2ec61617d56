#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "soundclust/corpus.hpp"
#include "soundclust/types.hpp"

namespace soundclust {

// ---------------------------------------------------------------------------
// Frame aggregation
// ---------------------------------------------------------------------------

enum class FeatureScheme {
  // min, max, mean and variance of every frame dimension and of its first and
  // second forward differences: 12 * dims values laid out as
  // [order 0..2][min, max, mean, var][dim].
  kHandcraftedStats,
  // Mean over frames only: dims values.
  kEmbeddingMean,
};

std::string_view scheme_name(FeatureScheme scheme);
std::optional<FeatureScheme> scheme_from_name(std::string_view name);

std::size_t aggregated_dim(std::size_t frame_dim, FeatureScheme scheme);

// Throws Error(kEmptyFrames) when frames has no rows. A derivative order with
// no rows (fewer frames than order + 1) contributes all-zero statistics.
Vector aggregate_frames(const Matrix& frames, FeatureScheme scheme);

// How a document's vector is derived. Without a scheme the clip vector is
// used when present and frames are mean-aggregated otherwise; with a scheme,
// frames are aggregated when present and the clip vector is the fallback.
struct FeatureOptions {
  std::optional<FeatureScheme> scheme;
};

// Throws Error(kMissingFeatures) for documents with neither representation.
Vector document_vector(const SoundDocument& doc, const FeatureOptions& options);

// Stacks document vectors row by row; Error(kDimensionMismatch) when their
// lengths differ.
Matrix document_matrix(std::span<const SoundDocument* const> docs, const FeatureOptions& options);
Matrix document_matrix(const Corpus& corpus, const FeatureOptions& options);

// ---------------------------------------------------------------------------
// Linear projections (PCA / LSA)
// ---------------------------------------------------------------------------

enum class ProjectionKind { kPca, kLsa };

std::string_view projection_kind_name(ProjectionKind kind);

struct ProjectionModel {
  ProjectionKind kind = ProjectionKind::kPca;
  std::size_t input_dim = 0;
  std::size_t output_dim = 0;
  Vector mean;        // input_dim; zero for LSA
  Matrix components;  // output_dim x input_dim, orthonormal rows
  // Per-column divisor applied after centering; empty unless the model was
  // fitted with standardization.
  Vector scale;
  // Tag vocabulary an LSA model was fitted over (column order), if any.
  std::vector<std::string> vocabulary;
};

struct ProjectionOptions {
  bool standardize = false;
};

// PCA: centered samples, components are covariance eigenvectors by decreasing
// explained variance. LSA: uncentered, components are the leading right
// singular vectors. output_dim is clamped to the numerical rank (at least 1).
// Each component's largest-magnitude entry is positive.
// Throws Error(kTooFewSamples) for fewer than two rows.
ProjectionModel fit_projection(const Matrix& samples, ProjectionKind kind, std::size_t output_dim,
                               const ProjectionOptions& options = {});

// components * (v - mean) [/ scale]. Throws Error(kDimensionMismatch).
Vector apply_projection(const Vector& v, const ProjectionModel& model);
Matrix apply_projection(const Matrix& samples, const ProjectionModel& model);

// Maps projected coordinates back into input space.
Vector reconstruct(const Vector& projected, const ProjectionModel& model);

// Copy keeping only the first `dims` components.
ProjectionModel truncate_projection(const ProjectionModel& model, std::size_t dims);

std::string serialize_projection(const ProjectionModel& model);
ProjectionModel parse_projection(std::string_view json_text);

// ---------------------------------------------------------------------------
// Tag vector-space model
// ---------------------------------------------------------------------------

inline constexpr std::size_t kDefaultVocabularySize = 5000;
inline constexpr std::size_t kDefaultLsaDims = 100;

class TagVocabulary {
 public:
  TagVocabulary() = default;
  explicit TagVocabulary(std::vector<std::pair<std::string, std::size_t>> entries);

  const std::vector<std::pair<std::string, std::size_t>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::optional<std::size_t> index_of(const std::string& tag) const;
  std::vector<std::string> tags() const;

 private:
  std::vector<std::pair<std::string, std::size_t>> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Top tags by document frequency; ties broken lexicographically ascending.
TagVocabulary build_tag_vocabulary(std::span<const SoundDocument* const> docs,
                                   std::size_t vocab_size);
TagVocabulary build_tag_vocabulary(const Corpus& corpus, std::size_t vocab_size);

// Binary presence vector; `indices` is sorted ascending.
struct SparseBinaryVector {
  std::size_t dim = 0;
  std::vector<std::size_t> indices;
  Vector to_dense() const;
};

SparseBinaryVector vectorize_tags(const SoundDocument& doc, const TagVocabulary& vocab);

// Fits LSA on binary tag vectors without materializing the dense matrix.
ProjectionModel fit_lsa(std::span<const SparseBinaryVector> rows, std::size_t output_dim);

Vector apply_projection(const SparseBinaryVector& v, const ProjectionModel& model);

// Vocabulary + LSA fitted over `background`, then applied to `docs`.
struct TagSpace {
  TagVocabulary vocabulary;
  ProjectionModel lsa;

  Matrix embed(std::span<const SoundDocument* const> docs) const;
};

TagSpace fit_tag_space(std::span<const SoundDocument* const> background, std::size_t vocab_size,
                       std::size_t dims);

}  // namespace soundclust
