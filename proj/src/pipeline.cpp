#include "soundclust/pipeline.hpp"

#include "soundclust/error.hpp"

namespace soundclust {

std::vector<std::optional<ClusterId>> ClusteringOutcome::final_assignment() const {
  std::vector<std::optional<ClusterId>> out(partition.num_nodes());
  if (!pruned) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = partition[i];
    return out;
  }
  for (std::size_t r = 0; r < pruned->kept_nodes.size(); ++r) {
    out[pruned->kept_nodes[r]] = pruned->partition[r];
  }
  return out;
}

std::size_t ClusteringOutcome::num_final_clusters() const {
  return pruned ? pruned->partition.num_clusters() : partition.num_clusters();
}

std::vector<double> ClusteringOutcome::final_confidence() const {
  return pruned ? cluster_confidences(pruned->graph, pruned->partition) : confidence;
}

ClusteringOutcome run_clustering(const Matrix& vectors, const ClusteringOptions& options,
                                 std::vector<std::string> ids) {
  ClusteringOutcome out;
  out.graph = build_knn_graph(vectors, options.graph, std::move(ids));
  out.partition = detect_communities(out.graph, options.seed);
  out.modularity = modularity(out.graph, out.partition);
  out.confidence = cluster_confidences(out.graph, out.partition);
  if (options.prune && out.partition.num_clusters() >= 2) {
    out.pruned = options.prune_threshold
                     ? prune_below(out.graph, out.partition, *options.prune_threshold)
                     : prune_lowest(out.graph, out.partition);
  }
  return out;
}

PipelineResult run_pipeline(const PipelineInput& input) {
  if (input.documents.size() < 2) {
    throw Error(ErrorCode::kTooFewNodes, "clustering needs at least two documents, got " +
                                             std::to_string(input.documents.size()));
  }
  Matrix vectors = document_matrix(input.documents, input.features);
  if (input.projection != nullptr) vectors = apply_projection(vectors, *input.projection);

  std::vector<std::string> ids;
  std::vector<const std::vector<std::string>*> tags;
  ids.reserve(input.documents.size());
  for (const SoundDocument* doc : input.documents) {
    ids.push_back(doc->id);
    tags.push_back(&doc->tags);
  }

  PipelineResult result;
  result.outcome = run_clustering(vectors, input.clustering, ids);
  const ClusteringOutcome& oc = result.outcome;

  std::unordered_map<std::string, std::size_t> local_frequency;
  const std::unordered_map<std::string, std::size_t>* frequency = input.tag_frequency;
  if (frequency == nullptr) {
    for (const SoundDocument* doc : input.documents) {
      for (const auto& tag : doc->tags) ++local_frequency[tag];
    }
    frequency = &local_frequency;
  }
  const auto labels = label_clusters(oc.partition, tags, *frequency, input.n_labels);
  const auto members = oc.partition.members();

  auto summary = [&](ClusterId original, ClusterId id, double confidence, bool pruned) {
    ClusterSummary s;
    s.cluster_id = id;
    for (auto node : members[original]) s.members.push_back(ids[node]);
    s.size = s.members.size();
    s.confidence = confidence;
    s.labels = labels[original];
    s.pruned = pruned;
    return s;
  };

  if (!oc.pruned) {
    for (ClusterId c = 0; c < oc.partition.num_clusters(); ++c) {
      result.clusters.push_back(summary(c, c, oc.confidence[c], false));
    }
    return result;
  }

  const PruneResult& pr = *oc.pruned;
  const auto surviving_conf = cluster_confidences(pr.graph, pr.partition);
  for (ClusterId c = 0; c < oc.partition.num_clusters(); ++c) {
    if (const auto mapped = pr.cluster_id_map[c]) {
      result.clusters.push_back(summary(c, *mapped, surviving_conf[*mapped], false));
    }
  }
  auto next = static_cast<ClusterId>(pr.partition.num_clusters());
  for (ClusterId c : pr.pruned_clusters) {
    result.clusters.push_back(summary(c, next++, oc.confidence[c], true));
  }
  for (auto node : pr.removed_nodes) result.unclustered.push_back(ids[node]);
  return result;
}

json graph_to_json(const KnnGraph& graph) {
  json nodes = json::array();
  for (std::size_t i = 0; i < graph.num_nodes(); ++i) {
    nodes.push_back(json{{"id", graph.ids()[i]}, {"index", i}});
  }
  json edges = json::array();
  for (const auto& [a, b] : graph.edges()) edges.push_back(json::array({a, b}));
  return json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}, {"k", graph.k_used()}};
}

json pipeline_result_to_json(const PipelineResult& result, const PipelineInput& input) {
  const ClusteringOutcome& oc = result.outcome;
  json clusters = json::array();
  for (const auto& c : result.clusters) {
    clusters.push_back(json{{"id", c.cluster_id},
                            {"members", c.members},
                            {"size", c.size},
                            {"confidence", c.confidence},
                            {"labels", c.labels},
                            {"pruned", c.pruned}});
  }

  json graph = graph_to_json(oc.graph);
  const auto assignment = oc.final_assignment();
  for (std::size_t i = 0; i < input.documents.size(); ++i) {
    const SoundDocument& doc = *input.documents[i];
    json& node = graph["nodes"][i];
    node["name"] = doc.name;
    node["tags"] = doc.tags;
    node["preview_url"] = doc.preview_url ? json(*doc.preview_url) : json(nullptr);
    node["cluster"] = assignment[i] ? json(*assignment[i]) : json(nullptr);
  }

  return json{{"clusters", std::move(clusters)},
              {"unclustered", result.unclustered},
              {"modularity", oc.modularity},
              {"seed", input.clustering.seed},
              {"graph", std::move(graph)}};
}

}  // namespace soundclust
