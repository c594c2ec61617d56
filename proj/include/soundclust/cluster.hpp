#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "soundclust/corpus.hpp"
#include "soundclust/graph.hpp"

namespace soundclust {

using ClusterId = std::uint32_t;

// Node -> cluster assignment with dense ids 0..num_clusters-1.
class Partition {
 public:
  Partition() = default;

  // Throws Error(kInvalidArgument) unless ids are dense and all used.
  Partition(std::vector<ClusterId> assignment, std::size_t num_clusters);

  // Renumbers arbitrary labels densely by order of first appearance.
  template <class Label>
  static Partition from_labels(const std::vector<Label>& labels);

  static Partition single_cluster(std::size_t num_nodes);
  static Partition singletons(std::size_t num_nodes);

  std::size_t num_nodes() const { return assignment_.size(); }
  std::size_t num_clusters() const { return num_clusters_; }
  ClusterId operator[](std::size_t node) const { return assignment_[node]; }
  const std::vector<ClusterId>& assignment() const { return assignment_; }
  std::vector<std::size_t> cluster_sizes() const;
  std::vector<std::vector<std::size_t>> members() const;

  bool operator==(const Partition&) const = default;

 private:
  std::vector<ClusterId> assignment_;
  std::size_t num_clusters_ = 0;
};

template <class Label>
Partition Partition::from_labels(const std::vector<Label>& labels) {
  std::vector<ClusterId> assignment;
  assignment.reserve(labels.size());
  std::unordered_map<Label, ClusterId> ids;
  for (const auto& label : labels) {
    auto [it, inserted] = ids.emplace(label, static_cast<ClusterId>(ids.size()));
    assignment.push_back(it->second);
  }
  const std::size_t k = ids.size();
  return Partition(std::move(assignment), k);
}

// Q = sum_c (e_c / m - (d_c / 2m)^2). Throws Error(kEmptyGraph) when m == 0
// and Error(kLengthMismatch) when the partition does not cover the graph.
double modularity(const KnnGraph& graph, const Partition& partition);

struct CommunityResult {
  Partition partition;
  // Modularity of the original graph after each local-move phase.
  std::vector<double> level_modularity;
};

// Multilevel greedy modularity optimization (local moves + aggregation).
// Node visiting order is shuffled per level from `seed`; equal-gain moves keep
// the incumbent community, otherwise the lowest community id wins.
// Throws Error(kEmptyGraph).
CommunityResult detect_communities_traced(const KnnGraph& graph, std::uint64_t seed);
Partition detect_communities(const KnnGraph& graph, std::uint64_t seed);

struct EdgeCounts {
  std::size_t intra = 0;
  std::size_t inter = 0;
};

std::vector<EdgeCounts> cluster_edge_counts(const KnnGraph& graph, const Partition& partition);

// intra / (intra + inter); 1.0 for a cluster without edges.
// Throws Error(kUnknownCluster).
double cluster_confidence(const KnnGraph& graph, const Partition& partition, ClusterId cluster);
std::vector<double> cluster_confidences(const KnnGraph& graph, const Partition& partition);

struct PruneResult {
  KnnGraph graph;                   // induced on surviving nodes
  Partition partition;              // over `graph`, ids re-densified
  std::vector<std::size_t> kept_nodes;     // surviving node -> input node
  std::vector<std::size_t> removed_nodes;  // input nodes now unclustered
  std::vector<ClusterId> pruned_clusters;  // ids in the input partition
  std::vector<std::optional<ClusterId>> cluster_id_map;  // input id -> new id
};

// Discards the single cluster with the lowest confidence (ties: smaller size,
// then lower id). Throws Error(kTooFewClusters) for fewer than two clusters.
PruneResult prune_lowest(const KnnGraph& graph, const Partition& partition);

// Discards every cluster with confidence strictly below `threshold`, but
// always keeps at least one cluster (the best one by the same ordering).
PruneResult prune_below(const KnnGraph& graph, const Partition& partition, double threshold);

inline constexpr std::size_t kDefaultLabelCount = 3;

// Per cluster, the n_labels tags with highest within-cluster document
// frequency; ties prefer lower corpus-wide frequency, then lexicographic order.
std::vector<std::vector<std::string>> label_clusters(
    const Partition& partition, const std::vector<const std::vector<std::string>*>& node_tags,
    const std::unordered_map<std::string, std::size_t>& corpus_frequency,
    std::size_t n_labels = kDefaultLabelCount);

// Node i is corpus document i.
std::vector<std::vector<std::string>> label_clusters(const Partition& partition,
                                                     const Corpus& corpus,
                                                     std::size_t n_labels = kDefaultLabelCount);

struct ClusterSummary {
  ClusterId cluster_id = 0;
  std::vector<std::string> members;
  std::size_t size = 0;
  double confidence = 0.0;
  std::vector<std::string> labels;
  bool pruned = false;
};

}  // namespace soundclust
