#include "soundclust/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SparseCore>

#include "soundclust/error.hpp"
#include "soundclust/json_io.hpp"

namespace soundclust {
namespace {

// Stats of the rows of `block`, written as [min, max, mean, var][dim].
void write_stats(const Matrix& block, Eigen::Index dims, Vector& out, Eigen::Index offset) {
  if (block.rows() == 0) {
    out.segment(offset, 4 * dims).setZero();
    return;
  }
  const double n = static_cast<double>(block.rows());
  for (Eigen::Index c = 0; c < dims; ++c) {
    const auto col = block.col(c);
    const double mean = col.sum() / n;
    out(offset + c) = col.minCoeff();
    out(offset + dims + c) = col.maxCoeff();
    out(offset + 2 * dims + c) = mean;
    out(offset + 3 * dims + c) = (col.array() - mean).square().sum() / n;
  }
}

Matrix forward_difference(const Matrix& m) {
  if (m.rows() < 2) return Matrix(0, m.cols());
  return m.bottomRows(m.rows() - 1) - m.topRows(m.rows() - 1);
}

// Eigenvalues below this fraction of the largest are treated as zero.
constexpr double kRankTolerance = 1e-10;
// Above this size the decomposition switches to seeded subspace iteration.
constexpr Eigen::Index kExactLimit = 2000;
constexpr std::uint64_t kRandomizedSvdSeed = 0x5eed5eedULL;
constexpr int kPowerIterations = 6;
constexpr Eigen::Index kOversampling = 12;

struct RightSingular {
  std::vector<double> squared_values;  // descending
  Matrix directions;                   // rows are right singular vectors
};

// Gram-Schmidt, run twice for stability.
void orthonormalize_rows(Matrix& rows) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
      for (Eigen::Index j = 0; j < i; ++j) {
        rows.row(i) -= rows.row(i).dot(rows.row(j)) * rows.row(j);
      }
      const double norm = rows.row(i).norm();
      if (norm > 0.0) rows.row(i) /= norm;
    }
  }
}

RightSingular from_eigen(const Eigen::MatrixXd& gram, std::size_t max_dims) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  const auto& values = solver.eigenvalues();  // ascending
  const Eigen::Index size = values.size();
  const double top = size > 0 ? std::max(values(size - 1), 0.0) : 0.0;
  RightSingular out;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = size - 1; i >= 0 && keep.size() < max_dims; --i) {
    if (top <= 0.0 || values(i) <= top * kRankTolerance) break;
    keep.push_back(i);
  }
  out.directions.resize(static_cast<Eigen::Index>(keep.size()), size);
  for (std::size_t r = 0; r < keep.size(); ++r) {
    out.squared_values.push_back(values(keep[r]));
    out.directions.row(static_cast<Eigen::Index>(r)) = solver.eigenvectors().col(keep[r]).transpose();
  }
  return out;
}

// Left vectors u_i (columns) -> right vectors a^T u_i / sigma_i (rows).
template <class M>
Matrix lift_to_right(const M& a, const RightSingular& left) {
  Matrix rows(left.directions.rows(), a.cols());
  for (Eigen::Index r = 0; r < left.directions.rows(); ++r) {
    const Eigen::VectorXd u = left.directions.row(r).transpose();
    const Eigen::VectorXd v = a.transpose() * u;
    rows.row(r) = (v / std::sqrt(left.squared_values[static_cast<std::size_t>(r)])).transpose();
  }
  return rows;
}

template <class M>
RightSingular exact_right_singular(const M& a, std::size_t max_dims) {
  if (a.cols() <= a.rows()) {
    Eigen::MatrixXd gram = Eigen::MatrixXd(a.transpose() * a);
    return from_eigen(gram, max_dims);
  }
  Eigen::MatrixXd gram = Eigen::MatrixXd(a * a.transpose());
  RightSingular left = from_eigen(gram, max_dims);
  RightSingular out;
  out.squared_values = left.squared_values;
  out.directions = lift_to_right(a, left);
  orthonormalize_rows(out.directions);
  return out;
}

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& m) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
}

// Randomized range finder with power iterations over a fixed seed.
template <class M>
RightSingular randomized_right_singular(const M& a, std::size_t max_dims) {
  const Eigen::Index sketch =
      std::min<Eigen::Index>(static_cast<Eigen::Index>(max_dims) + kOversampling,
                             std::min(a.rows(), a.cols()));
  std::mt19937_64 rng(kRandomizedSvdSeed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd omega(a.cols(), sketch);
  for (Eigen::Index j = 0; j < sketch; ++j) {
    for (Eigen::Index i = 0; i < a.cols(); ++i) omega(i, j) = normal(rng);
  }
  Eigen::MatrixXd q = orthonormal_basis(a * omega);
  for (int it = 0; it < kPowerIterations; ++it) {
    Eigen::MatrixXd z = orthonormal_basis(a.transpose() * q);
    q = orthonormal_basis(a * z);
  }
  // b = q^T a is small (sketch x cols); decompose through its row Gram.
  Eigen::MatrixXd bt = a.transpose() * q;  // cols x sketch
  Eigen::MatrixXd gram = bt.transpose() * bt;
  RightSingular left = from_eigen(gram, max_dims);
  RightSingular out;
  out.squared_values = left.squared_values;
  out.directions.resize(left.directions.rows(), a.cols());
  for (Eigen::Index r = 0; r < left.directions.rows(); ++r) {
    const Eigen::VectorXd u = left.directions.row(r).transpose();
    out.directions.row(r) =
        (bt * u / std::sqrt(left.squared_values[static_cast<std::size_t>(r)])).transpose();
  }
  orthonormalize_rows(out.directions);
  return out;
}

template <class M>
RightSingular right_singular(const M& a, std::size_t max_dims) {
  if (std::min(a.rows(), a.cols()) <= kExactLimit) return exact_right_singular(a, max_dims);
  return randomized_right_singular(a, max_dims);
}

void canonicalize_signs(Matrix& rows) {
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index c = 0; c < rows.cols(); ++c) {
      if (std::abs(rows(r, c)) > best + 1e-12) {
        best = std::abs(rows(r, c));
        arg = c;
      }
    }
    if (rows(r, arg) < 0.0) rows.row(r) *= -1.0;
  }
}

ProjectionModel finish_model(ProjectionKind kind, Eigen::Index input_dim, Vector mean,
                             RightSingular svd) {
  ProjectionModel model;
  model.kind = kind;
  model.input_dim = static_cast<std::size_t>(input_dim);
  model.mean = std::move(mean);
  if (svd.directions.rows() == 0) {
    // Rank zero: every sample equals the mean. Keep one axis so the model is usable.
    model.components = Matrix::Zero(1, input_dim);
    model.components(0, 0) = 1.0;
  } else {
    model.components = std::move(svd.directions);
    canonicalize_signs(model.components);
  }
  model.output_dim = static_cast<std::size_t>(model.components.rows());
  return model;
}

}  // namespace

std::string_view scheme_name(FeatureScheme scheme) {
  switch (scheme) {
    case FeatureScheme::kHandcraftedStats: return "handcrafted";
    case FeatureScheme::kEmbeddingMean: return "embedding_mean";
  }
  return "unknown";
}

std::optional<FeatureScheme> scheme_from_name(std::string_view name) {
  if (name == "handcrafted") return FeatureScheme::kHandcraftedStats;
  if (name == "embedding_mean") return FeatureScheme::kEmbeddingMean;
  return std::nullopt;
}

std::size_t aggregated_dim(std::size_t frame_dim, FeatureScheme scheme) {
  return scheme == FeatureScheme::kHandcraftedStats ? 12 * frame_dim : frame_dim;
}

Vector aggregate_frames(const Matrix& frames, FeatureScheme scheme) {
  if (frames.rows() == 0) throw Error(ErrorCode::kEmptyFrames, "cannot aggregate zero frames");
  const Eigen::Index dims = frames.cols();
  if (scheme == FeatureScheme::kEmbeddingMean) {
    return frames.colwise().mean().transpose();
  }
  Vector out(12 * dims);
  const Matrix first = forward_difference(frames);
  const Matrix second = forward_difference(first);
  write_stats(frames, dims, out, 0);
  write_stats(first, dims, out, 4 * dims);
  write_stats(second, dims, out, 8 * dims);
  return out;
}

Vector document_vector(const SoundDocument& doc, const FeatureOptions& options) {
  const bool has_frames = doc.frame_features.has_value() && doc.frame_features->rows() > 0;
  if (options.scheme) {
    if (has_frames) return aggregate_frames(*doc.frame_features, *options.scheme);
    if (doc.clip_vector) return *doc.clip_vector;
  } else {
    if (doc.clip_vector) return *doc.clip_vector;
    if (has_frames) return aggregate_frames(*doc.frame_features, FeatureScheme::kEmbeddingMean);
  }
  if (doc.frame_features) {
    throw Error(ErrorCode::kEmptyFrames, "document " + doc.id + " has zero frames");
  }
  throw Error(ErrorCode::kMissingFeatures, "document " + doc.id + " has no features");
}

Matrix document_matrix(std::span<const SoundDocument* const> docs, const FeatureOptions& options) {
  Matrix out;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    Vector v = document_vector(*docs[i], options);
    if (i == 0) {
      out.resize(static_cast<Eigen::Index>(docs.size()), v.size());
    } else if (v.size() != out.cols()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "document " + docs[i]->id + " yields " + std::to_string(v.size()) +
                      " feature values, expected " + std::to_string(out.cols()));
    }
    out.row(static_cast<Eigen::Index>(i)) = v.transpose();
  }
  return out;
}

Matrix document_matrix(const Corpus& corpus, const FeatureOptions& options) {
  std::vector<const SoundDocument*> ptrs;
  ptrs.reserve(corpus.size());
  for (const auto& d : corpus.documents()) ptrs.push_back(&d);
  return document_matrix(ptrs, options);
}

std::string_view projection_kind_name(ProjectionKind kind) {
  return kind == ProjectionKind::kPca ? "PCA" : "LSA";
}

ProjectionModel fit_projection(const Matrix& samples, ProjectionKind kind, std::size_t output_dim,
                               const ProjectionOptions& options) {
  if (samples.rows() < 2) {
    throw Error(ErrorCode::kTooFewSamples, "projection needs at least two samples, got " +
                                               std::to_string(samples.rows()));
  }
  if (output_dim == 0) throw Error(ErrorCode::kInvalidArgument, "output_dim must be positive");
  if (samples.cols() == 0) throw Error(ErrorCode::kDimensionMismatch, "samples have zero columns");

  const Eigen::Index d = samples.cols();
  Vector mean = Vector::Zero(d);
  if (kind == ProjectionKind::kPca) mean = samples.colwise().mean().transpose();
  Eigen::MatrixXd work = samples.rowwise() - mean.transpose();

  Vector scale;
  if (options.standardize) {
    scale = (work.array().square().colwise().sum() / static_cast<double>(samples.rows()))
                .sqrt()
                .transpose();
    for (Eigen::Index c = 0; c < d; ++c) {
      if (scale(c) <= 0.0) scale(c) = 1.0;
    }
    work = work.array().rowwise() / scale.transpose().array();
  }

  const std::size_t cap = std::min<std::size_t>(
      output_dim, static_cast<std::size_t>(std::min(samples.rows(), d)));
  ProjectionModel model = finish_model(kind, d, std::move(mean), right_singular(work, cap));
  model.scale = std::move(scale);
  return model;
}

Vector apply_projection(const Vector& v, const ProjectionModel& model) {
  if (static_cast<std::size_t>(v.size()) != model.input_dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "vector has " + std::to_string(v.size()) + " entries, model expects " +
                    std::to_string(model.input_dim));
  }
  if (model.scale.size() > 0) {
    return model.components * ((v - model.mean).array() / model.scale.array()).matrix();
  }
  return model.components * (v - model.mean);
}

Matrix apply_projection(const Matrix& samples, const ProjectionModel& model) {
  if (static_cast<std::size_t>(samples.cols()) != model.input_dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "samples have " + std::to_string(samples.cols()) + " columns, model expects " +
                    std::to_string(model.input_dim));
  }
  Eigen::MatrixXd centered = samples.rowwise() - model.mean.transpose();
  if (model.scale.size() > 0) centered = centered.array().rowwise() / model.scale.transpose().array();
  return centered * model.components.transpose();
}

Vector reconstruct(const Vector& projected, const ProjectionModel& model) {
  if (static_cast<std::size_t>(projected.size()) != model.output_dim) {
    throw Error(ErrorCode::kDimensionMismatch, "projected vector length does not match model");
  }
  Vector back = model.components.transpose() * projected;
  if (model.scale.size() > 0) back = (back.array() * model.scale.array()).matrix();
  return back + model.mean;
}

ProjectionModel truncate_projection(const ProjectionModel& model, std::size_t dims) {
  ProjectionModel out = model;
  const auto keep = static_cast<Eigen::Index>(std::min(dims, model.output_dim));
  out.components = model.components.topRows(keep);
  out.output_dim = static_cast<std::size_t>(keep);
  return out;
}

std::string serialize_projection(const ProjectionModel& model) {
  json out = json::object();
  out["kind"] = projection_kind_name(model.kind);
  out["input_dim"] = model.input_dim;
  out["output_dim"] = model.output_dim;
  out["mean"] = std::vector<double>(model.mean.data(), model.mean.data() + model.mean.size());
  json comps = json::array();
  for (Eigen::Index r = 0; r < model.components.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(model.components.cols()));
    for (Eigen::Index c = 0; c < model.components.cols(); ++c) {
      row[static_cast<std::size_t>(c)] = model.components(r, c);
    }
    comps.push_back(std::move(row));
  }
  out["components"] = std::move(comps);
  if (model.scale.size() > 0) {
    out["scale"] = std::vector<double>(model.scale.data(), model.scale.data() + model.scale.size());
  }
  if (!model.vocabulary.empty()) out["vocabulary"] = model.vocabulary;
  return out.dump();
}

ProjectionModel parse_projection(std::string_view json_text) {
  const json root = parse_json_text(json_text);
  try {
    ProjectionModel model;
    const std::string kind = root.at("kind").get<std::string>();
    if (kind == "PCA") {
      model.kind = ProjectionKind::kPca;
    } else if (kind == "LSA") {
      model.kind = ProjectionKind::kLsa;
    } else {
      throw Error(ErrorCode::kMalformedJson, "unknown projection kind: " + kind);
    }
    model.input_dim = root.at("input_dim").get<std::size_t>();
    model.output_dim = root.at("output_dim").get<std::size_t>();
    const auto mean = root.at("mean").get<std::vector<double>>();
    const auto comps = root.at("components").get<std::vector<std::vector<double>>>();
    if (mean.size() != model.input_dim || comps.size() != model.output_dim) {
      throw Error(ErrorCode::kDimensionMismatch, "projection model shape is inconsistent");
    }
    model.mean = Eigen::Map<const Vector>(mean.data(), static_cast<Eigen::Index>(mean.size()));
    model.components.resize(static_cast<Eigen::Index>(model.output_dim),
                            static_cast<Eigen::Index>(model.input_dim));
    for (std::size_t r = 0; r < comps.size(); ++r) {
      if (comps[r].size() != model.input_dim) {
        throw Error(ErrorCode::kDimensionMismatch, "projection component has wrong length");
      }
      for (std::size_t c = 0; c < comps[r].size(); ++c) {
        model.components(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = comps[r][c];
      }
    }
    if (root.contains("scale")) {
      const auto scale = root.at("scale").get<std::vector<double>>();
      if (scale.size() != model.input_dim) {
        throw Error(ErrorCode::kDimensionMismatch, "projection scale has wrong length");
      }
      model.scale = Eigen::Map<const Vector>(scale.data(), static_cast<Eigen::Index>(scale.size()));
    }
    if (root.contains("vocabulary")) {
      model.vocabulary = root.at("vocabulary").get<std::vector<std::string>>();
    }
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedJson, std::string("invalid projection model: ") + e.what());
  }
}

TagVocabulary::TagVocabulary(std::vector<std::pair<std::string, std::size_t>> entries)
    : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) index_.emplace(entries_[i].first, i);
}

std::optional<std::size_t> TagVocabulary::index_of(const std::string& tag) const {
  auto it = index_.find(tag);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> TagVocabulary::tags() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [tag, count] : entries_) out.push_back(tag);
  return out;
}

TagVocabulary build_tag_vocabulary(std::span<const SoundDocument* const> docs,
                                   std::size_t vocab_size) {
  if (vocab_size == 0) throw Error(ErrorCode::kInvalidArgument, "vocab_size must be positive");
  std::unordered_map<std::string, std::size_t> freq;
  for (const SoundDocument* doc : docs) {
    // Tags are unique per document after normalization, so this is document frequency.
    for (const auto& tag : normalize_tags(doc->tags)) ++freq[tag];
  }
  std::vector<std::pair<std::string, std::size_t>> entries(freq.begin(), freq.end());
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (entries.size() > vocab_size) entries.resize(vocab_size);
  return TagVocabulary(std::move(entries));
}

TagVocabulary build_tag_vocabulary(const Corpus& corpus, std::size_t vocab_size) {
  std::vector<const SoundDocument*> ptrs;
  ptrs.reserve(corpus.size());
  for (const auto& d : corpus.documents()) ptrs.push_back(&d);
  return build_tag_vocabulary(ptrs, vocab_size);
}

Vector SparseBinaryVector::to_dense() const {
  Vector out = Vector::Zero(static_cast<Eigen::Index>(dim));
  for (auto i : indices) out(static_cast<Eigen::Index>(i)) = 1.0;
  return out;
}

SparseBinaryVector vectorize_tags(const SoundDocument& doc, const TagVocabulary& vocab) {
  SparseBinaryVector out;
  out.dim = vocab.size();
  for (const auto& tag : doc.tags) {
    if (auto idx = vocab.index_of(tag)) out.indices.push_back(*idx);
  }
  std::sort(out.indices.begin(), out.indices.end());
  out.indices.erase(std::unique(out.indices.begin(), out.indices.end()), out.indices.end());
  return out;
}

ProjectionModel fit_lsa(std::span<const SparseBinaryVector> rows, std::size_t output_dim) {
  if (rows.size() < 2) {
    throw Error(ErrorCode::kTooFewSamples,
                "LSA needs at least two documents, got " + std::to_string(rows.size()));
  }
  if (output_dim == 0) throw Error(ErrorCode::kInvalidArgument, "output_dim must be positive");
  const std::size_t dim = rows.front().dim;
  if (dim == 0) throw Error(ErrorCode::kEmptyVocabulary, "LSA needs a non-empty tag vocabulary");
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].dim != dim) throw Error(ErrorCode::kDimensionMismatch, "LSA rows differ in length");
    for (auto c : rows[r].indices) {
      triplets.emplace_back(static_cast<int>(r), static_cast<int>(c), 1.0);
    }
  }
  Eigen::SparseMatrix<double> a(static_cast<Eigen::Index>(rows.size()),
                                static_cast<Eigen::Index>(dim));
  a.setFromTriplets(triplets.begin(), triplets.end());
  const std::size_t cap = std::min({output_dim, rows.size(), dim});
  return finish_model(ProjectionKind::kLsa, static_cast<Eigen::Index>(dim),
                      Vector::Zero(static_cast<Eigen::Index>(dim)), right_singular(a, cap));
}

Vector apply_projection(const SparseBinaryVector& v, const ProjectionModel& model) {
  if (v.dim != model.input_dim) {
    throw Error(ErrorCode::kDimensionMismatch, "sparse vector length does not match model");
  }
  if (model.kind == ProjectionKind::kPca || model.scale.size() > 0) {
    return apply_projection(v.to_dense(), model);
  }
  Vector out = Vector::Zero(static_cast<Eigen::Index>(model.output_dim));
  for (auto i : v.indices) out += model.components.col(static_cast<Eigen::Index>(i));
  return out;
}

Matrix TagSpace::embed(std::span<const SoundDocument* const> docs) const {
  Matrix out(static_cast<Eigen::Index>(docs.size()), static_cast<Eigen::Index>(lsa.output_dim));
  for (std::size_t i = 0; i < docs.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) =
        apply_projection(vectorize_tags(*docs[i], vocabulary), lsa).transpose();
  }
  return out;
}

TagSpace fit_tag_space(std::span<const SoundDocument* const> background, std::size_t vocab_size,
                       std::size_t dims) {
  TagSpace space;
  space.vocabulary = build_tag_vocabulary(background, vocab_size);
  if (space.vocabulary.empty()) {
    throw Error(ErrorCode::kEmptyVocabulary, "documents carry no tags");
  }
  std::vector<SparseBinaryVector> rows;
  rows.reserve(background.size());
  for (const SoundDocument* doc : background) rows.push_back(vectorize_tags(*doc, space.vocabulary));
  space.lsa = fit_lsa(rows, dims);
  space.lsa.vocabulary = space.vocabulary.tags();
  return space;
}

}  // namespace soundclust
