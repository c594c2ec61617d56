#include "support/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace soundclust::testing {

LabeledPoints gaussian_blobs(const BlobSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, spec.stddev);
  LabeledPoints out;
  out.points.resize(spec.num_blobs * spec.per_blob, spec.dims);
  for (int b = 0; b < spec.num_blobs; ++b) {
    Vector center = Vector::Zero(spec.dims);
    center(b % spec.dims) = spec.center_spacing * spec.stddev * (1 + b / spec.dims);
    for (int i = 0; i < spec.per_blob; ++i) {
      const int row = b * spec.per_blob + i;
      for (int d = 0; d < spec.dims; ++d) out.points(row, d) = center(d) + normal(rng);
      out.labels.push_back(b);
    }
  }
  return out;
}

LabeledPoints blobs_with_noise(int per_blob, int noise, int dims, std::uint64_t seed) {
  BlobSpec spec;
  spec.num_blobs = 3;
  spec.per_blob = per_blob;
  spec.dims = dims;
  spec.seed = seed;
  LabeledPoints out = gaussian_blobs(spec);

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> uniform(-2.0, 2.0);
  // Noise centre: the blob centroid moved 4 units away from all blob axes.
  Vector centroid = out.points.colwise().mean().transpose();
  const int axes = std::min(dims, 3);
  for (int d = 0; d < axes; ++d) centroid(d) -= 4.0 / std::sqrt(static_cast<double>(axes));
  const Eigen::Index base = out.points.rows();
  out.points.conservativeResize(base + noise, dims);
  for (int i = 0; i < noise; ++i) {
    for (int d = 0; d < dims; ++d) out.points(base + i, d) = centroid(d) + uniform(rng);
    out.labels.push_back(3);
  }
  return out;
}

Corpus make_corpus(const Matrix& vectors, const std::vector<std::vector<std::string>>& tags,
                   const std::string& prefix) {
  std::vector<SoundDocument> docs;
  for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
    SoundDocument d;
    d.id = prefix + std::to_string(i);
    d.name = "sound " + std::to_string(i);
    d.duration = 1.0 + static_cast<double>(i % 7);
    if (static_cast<std::size_t>(i) < tags.size()) d.tags = tags[static_cast<std::size_t>(i)];
    d.clip_vector = vectors.row(i).transpose();
    docs.push_back(std::move(d));
  }
  return Corpus(std::move(docs));
}

std::vector<std::vector<std::string>> tags_for_labels(const std::vector<int>& labels,
                                                      int noise_label, std::uint64_t seed) {
  static const std::vector<std::vector<std::string>> kTopics = {
      {"rain", "water", "drops"}, {"dog", "bark", "animal"}, {"guitar", "strum", "chord"},
      {"engine", "car", "motor"}, {"bird", "chirp", "forest"}, {"door", "slam", "wood"}};
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::string>> out;
  for (int label : labels) {
    if (label == noise_label) {
      std::vector<std::string> tags;
      for (int t = 0; t < 3; ++t) {
        const auto& topic = kTopics[rng() % 3];
        tags.push_back(topic[rng() % topic.size()]);
      }
      tags.push_back("field-recording");
      out.push_back(std::move(tags));
    } else {
      static const std::vector<std::string> kRecording = {"field-recording", "studio", "outdoor"};
      const auto& topic = kTopics[static_cast<std::size_t>(label) % kTopics.size()];
      std::vector<std::string> tags = topic;
      tags.push_back(kRecording[rng() % kRecording.size()]);
      out.push_back(std::move(tags));
    }
  }
  return out;
}

LabeledDataset make_dataset(const LabeledPoints& data, const std::string& name) {
  Corpus corpus = make_corpus(data.points, tags_for_labels(data.labels, -1, 7), name + "-");
  std::map<std::string, std::string> labels;
  for (std::size_t i = 0; i < data.labels.size(); ++i) {
    labels[corpus[i].id] = "class" + std::to_string(data.labels[i]);
  }
  return make_labeled_dataset(std::move(corpus), std::move(labels), name);
}

EdgeList random_graph(int n, double p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  EdgeList edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (uniform(rng) < p) edges.emplace_back(i, j);
    }
  }
  return edges;
}

KnnGraph to_graph(int n, const EdgeList& edges) {
  std::vector<Edge> out;
  for (const auto& [a, b] : edges) out.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
  return KnnGraph(static_cast<std::size_t>(n), std::move(out), 0);
}

std::vector<NamedGraph> modularity_fixture_graphs() {
  return {
      {"two disconnected triangles", 6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}},
      {"K4", 4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}},
      {"path P5", 5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}},
      {"single edge", 2, {{0, 1}}},
      {"two K4 joined by an edge",
       8,
       {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3},
        {4, 5}, {4, 6}, {4, 7}, {5, 6}, {5, 7}, {6, 7},
        {3, 4}}},
  };
}

}  // namespace soundclust::testing
