#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "soundclust/cluster.hpp"
#include "soundclust/features.hpp"
#include "soundclust/graph.hpp"
#include "soundclust/json_io.hpp"

namespace soundclust {

struct ClusteringOptions {
  GraphConfig graph;
  std::uint64_t seed = 0;
  bool prune = false;
  // When set, pruning discards every cluster below this confidence instead of
  // only the weakest one.
  std::optional<double> prune_threshold;
};

// Graph + communities + optional pruning over one result set.
struct ClusteringOutcome {
  KnnGraph graph;
  Partition partition;  // before pruning, over all nodes
  double modularity = 0.0;
  std::vector<double> confidence;  // per partition cluster, full graph
  // Present when pruning was requested and at least two clusters existed.
  std::optional<PruneResult> pruned;

  // Cluster of each node after pruning; nullopt for unclustered nodes.
  std::vector<std::optional<ClusterId>> final_assignment() const;
  std::size_t num_final_clusters() const;
  // Confidence of each surviving cluster, recomputed without pruned nodes.
  std::vector<double> final_confidence() const;
};

ClusteringOutcome run_clustering(const Matrix& vectors, const ClusteringOptions& options,
                                 std::vector<std::string> ids = {});

// Full request: documents in ranking order plus everything needed to cluster
// and label them.
struct PipelineInput {
  std::vector<const SoundDocument*> documents;
  FeatureOptions features;
  const ProjectionModel* projection = nullptr;
  ClusteringOptions clustering;
  // Corpus-wide tag document frequency for label tie-breaking.
  const std::unordered_map<std::string, std::size_t>* tag_frequency = nullptr;
  std::size_t n_labels = kDefaultLabelCount;
};

struct PipelineResult {
  ClusteringOutcome outcome;
  std::vector<ClusterSummary> clusters;  // surviving first, then pruned
  std::vector<std::string> unclustered;
};

// Throws Error(kTooFewNodes) for fewer than two documents.
PipelineResult run_pipeline(const PipelineInput& input);

// Cluster result + graph export document consumed by the explorer UI.
json pipeline_result_to_json(const PipelineResult& result, const PipelineInput& input);

json graph_to_json(const KnnGraph& graph);

}  // namespace soundclust
