#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "soundclust/corpus.hpp"
#include "soundclust/graph.hpp"
#include "support/oracles.hpp"

namespace soundclust::testing {

struct BlobSpec {
  int num_blobs = 4;
  int per_blob = 50;
  int dims = 10;
  double center_spacing = 10.0;  // in units of stddev, along orthogonal axes
  double stddev = 1.0;
  std::uint64_t seed = 42;
};

struct LabeledPoints {
  Matrix points;
  std::vector<int> labels;
};

// Blob b is centered at spacing * stddev * e_b (e_b the b-th axis; wraps
// into a second axis set when num_blobs > dims).
LabeledPoints gaussian_blobs(const BlobSpec& spec);

// Three tight blobs plus `noise` points uniform in a cube of half-width 2,
// centred 4 units from the blob centroid on the side away from every blob.
// The noise forms its own loosely attached community. Labels: blob index,
// noise 3.
LabeledPoints blobs_with_noise(int per_blob, int noise, int dims, std::uint64_t seed);

// Documents "<prefix><i>" with the given vectors as clip vectors and tags.
Corpus make_corpus(const Matrix& vectors, const std::vector<std::vector<std::string>>& tags,
                   const std::string& prefix = "s");

// Documents tagged according to their blob label (noise gets random tags).
std::vector<std::vector<std::string>> tags_for_labels(const std::vector<int>& labels,
                                                      int noise_label, std::uint64_t seed);

LabeledDataset make_dataset(const LabeledPoints& data, const std::string& name);

EdgeList random_graph(int n, double p, std::mt19937_64& rng);
KnnGraph to_graph(int n, const EdgeList& edges);

// Small graphs used by the modularity oracle checks.
struct NamedGraph {
  std::string name;
  int n;
  EdgeList edges;
};
std::vector<NamedGraph> modularity_fixture_graphs();

}  // namespace soundclust::testing
