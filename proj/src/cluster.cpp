#include "soundclust/cluster.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include "soundclust/error.hpp"

namespace soundclust {

Partition::Partition(std::vector<ClusterId> assignment, std::size_t num_clusters)
    : assignment_(std::move(assignment)), num_clusters_(num_clusters) {
  std::vector<bool> used(num_clusters_, false);
  for (ClusterId c : assignment_) {
    if (c >= num_clusters_) {
      throw Error(ErrorCode::kInvalidArgument, "cluster id " + std::to_string(c) + " out of range");
    }
    used[c] = true;
  }
  if (std::find(used.begin(), used.end(), false) != used.end()) {
    throw Error(ErrorCode::kInvalidArgument, "cluster ids are not dense");
  }
}

Partition Partition::single_cluster(std::size_t num_nodes) {
  return Partition(std::vector<ClusterId>(num_nodes, 0), num_nodes > 0 ? 1 : 0);
}

Partition Partition::singletons(std::size_t num_nodes) {
  std::vector<ClusterId> a(num_nodes);
  std::iota(a.begin(), a.end(), ClusterId{0});
  return Partition(std::move(a), num_nodes);
}

std::vector<std::size_t> Partition::cluster_sizes() const {
  std::vector<std::size_t> sizes(num_clusters_, 0);
  for (ClusterId c : assignment_) ++sizes[c];
  return sizes;
}

std::vector<std::vector<std::size_t>> Partition::members() const {
  std::vector<std::vector<std::size_t>> out(num_clusters_);
  for (std::size_t i = 0; i < assignment_.size(); ++i) out[assignment_[i]].push_back(i);
  return out;
}

namespace {

void check_cover(const KnnGraph& graph, const Partition& partition) {
  if (partition.num_nodes() != graph.num_nodes()) {
    throw Error(ErrorCode::kLengthMismatch,
                "partition covers " + std::to_string(partition.num_nodes()) + " nodes, graph has " +
                    std::to_string(graph.num_nodes()));
  }
}

// Unbiased draw in [0, bound) from the raw 64-bit engine output, so shuffles
// do not depend on the standard library's distribution implementations.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

void shuffle(std::vector<std::size_t>& order, std::mt19937_64& rng) {
  for (std::size_t i = order.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(order[i - 1], order[j]);
  }
}

// Weighted graph at one aggregation level. Self loops hold internal weight.
struct LevelGraph {
  std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> adjacency;  // no self entries
  std::vector<std::int64_t> self_weight;
  std::vector<std::int64_t> degree;  // 2 * self + sum of incident weights
  std::int64_t total_degree = 0;     // 2m

  std::size_t size() const { return adjacency.size(); }
};

LevelGraph level_from_graph(const KnnGraph& graph) {
  LevelGraph g;
  const std::size_t n = graph.num_nodes();
  g.adjacency.resize(n);
  g.self_weight.assign(n, 0);
  g.degree.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (NodeId j : graph.neighbors(i)) g.adjacency[i].emplace_back(j, 1);
    g.degree[i] = static_cast<std::int64_t>(graph.degree(i));
    g.total_degree += g.degree[i];
  }
  return g;
}

// Local-move phase. Returns true if any node changed community.
bool local_moves(const LevelGraph& g, std::vector<std::size_t>& community,
                 std::mt19937_64& rng) {
  const std::size_t n = g.size();
  std::vector<std::int64_t> tot(n, 0);
  for (std::size_t i = 0; i < n; ++i) tot[community[i]] += g.degree[i];

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  shuffle(order, rng);

  std::vector<std::int64_t> link(n, -1);  // weight from current node to community, -1 = unseen
  std::vector<std::size_t> touched;
  const std::int64_t m2 = g.total_degree;
  bool any_move = false;
  bool improved = true;

  while (improved) {
    improved = false;
    for (std::size_t node : order) {
      const std::size_t own = community[node];
      const std::int64_t k = g.degree[node];

      touched.clear();
      link[own] = 0;
      touched.push_back(own);
      for (const auto& [nb, w] : g.adjacency[node]) {
        const std::size_t c = community[nb];
        if (link[c] < 0) {
          link[c] = 0;
          touched.push_back(c);
        }
        link[c] += w;
      }

      tot[own] -= k;
      // Gain of inserting `node` into c, scaled by 2m: link * 2m - tot * k.
      auto gain = [&](std::size_t c) { return link[c] * m2 - tot[c] * k; };
      std::size_t best = own;
      std::int64_t best_gain = gain(own);
      std::sort(touched.begin(), touched.end());
      for (std::size_t c : touched) {
        if (c == own) continue;
        const std::int64_t g_c = gain(c);
        if (g_c > best_gain) {
          best_gain = g_c;
          best = c;
        }
      }
      tot[best] += k;
      if (best != own) {
        community[node] = best;
        improved = true;
        any_move = true;
      }
      for (std::size_t c : touched) link[c] = -1;
    }
  }
  return any_move;
}

// Renumbers communities densely by first appearance; returns the count.
std::size_t densify(std::vector<std::size_t>& community) {
  std::vector<std::size_t> remap(community.size(), std::numeric_limits<std::size_t>::max());
  std::size_t next = 0;
  for (auto& c : community) {
    if (remap[c] == std::numeric_limits<std::size_t>::max()) remap[c] = next++;
    c = remap[c];
  }
  return next;
}

LevelGraph aggregate(const LevelGraph& g, const std::vector<std::size_t>& community,
                     std::size_t num_communities) {
  LevelGraph out;
  out.adjacency.resize(num_communities);
  out.self_weight.assign(num_communities, 0);
  out.degree.assign(num_communities, 0);
  out.total_degree = g.total_degree;

  std::vector<std::pair<std::size_t, std::size_t>> keys;
  std::vector<std::int64_t> weights;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::size_t ci = community[i];
    out.degree[ci] += g.degree[i];
    out.self_weight[ci] += g.self_weight[i];
    for (const auto& [j, w] : g.adjacency[i]) {
      const std::size_t cj = community[j];
      if (ci == cj) {
        if (i < j) out.self_weight[ci] += w;
      } else {
        keys.emplace_back(ci, cj);
        weights.push_back(w);
      }
    }
  }
  std::vector<std::size_t> idx(keys.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  for (std::size_t p = 0; p < idx.size();) {
    const auto key = keys[idx[p]];
    std::int64_t w = 0;
    while (p < idx.size() && keys[idx[p]] == key) w += weights[idx[p++]];
    out.adjacency[key.first].emplace_back(key.second, w);
  }
  return out;
}

}  // namespace

double modularity(const KnnGraph& graph, const Partition& partition) {
  check_cover(graph, partition);
  const std::size_t m = graph.num_edges();
  if (m == 0) throw Error(ErrorCode::kEmptyGraph, "modularity is undefined for a graph without edges");
  std::vector<double> intra(partition.num_clusters(), 0.0);
  std::vector<double> degree(partition.num_clusters(), 0.0);
  for (const auto& [a, b] : graph.edges()) {
    if (partition[a] == partition[b]) intra[partition[a]] += 1.0;
  }
  for (std::size_t i = 0; i < graph.num_nodes(); ++i) {
    degree[partition[i]] += static_cast<double>(graph.degree(i));
  }
  const double md = static_cast<double>(m);
  double q = 0.0;
  for (std::size_t c = 0; c < partition.num_clusters(); ++c) {
    const double share = degree[c] / (2.0 * md);
    q += intra[c] / md - share * share;
  }
  return q;
}

CommunityResult detect_communities_traced(const KnnGraph& graph, std::uint64_t seed) {
  if (graph.num_edges() == 0) {
    throw Error(ErrorCode::kEmptyGraph, "community detection needs at least one edge");
  }
  std::mt19937_64 rng(seed);
  const std::size_t n = graph.num_nodes();
  std::vector<std::size_t> node_to_community(n);
  std::iota(node_to_community.begin(), node_to_community.end(), std::size_t{0});

  CommunityResult result;
  LevelGraph level = level_from_graph(graph);
  for (;;) {
    std::vector<std::size_t> community(level.size());
    std::iota(community.begin(), community.end(), std::size_t{0});
    const bool moved = local_moves(level, community, rng);
    const std::size_t count = densify(community);
    for (auto& c : node_to_community) c = community[c];

    std::vector<ClusterId> labels(node_to_community.begin(), node_to_community.end());
    result.level_modularity.push_back(modularity(graph, Partition::from_labels(labels)));
    if (!moved || count == level.size()) break;
    level = aggregate(level, community, count);
  }
  result.partition = Partition::from_labels(node_to_community);
  return result;
}

Partition detect_communities(const KnnGraph& graph, std::uint64_t seed) {
  return detect_communities_traced(graph, seed).partition;
}

std::vector<EdgeCounts> cluster_edge_counts(const KnnGraph& graph, const Partition& partition) {
  check_cover(graph, partition);
  std::vector<EdgeCounts> counts(partition.num_clusters());
  for (const auto& [a, b] : graph.edges()) {
    const ClusterId ca = partition[a];
    const ClusterId cb = partition[b];
    if (ca == cb) {
      ++counts[ca].intra;
    } else {
      ++counts[ca].inter;
      ++counts[cb].inter;
    }
  }
  return counts;
}

namespace {

double ratio(const EdgeCounts& c) {
  const std::size_t total = c.intra + c.inter;
  return total == 0 ? 1.0 : static_cast<double>(c.intra) / static_cast<double>(total);
}

// Order in which clusters are discarded: lowest confidence, smaller size, lower id.
bool weaker(std::size_t a, std::size_t b, const std::vector<double>& conf,
            const std::vector<std::size_t>& sizes) {
  if (conf[a] != conf[b]) return conf[a] < conf[b];
  if (sizes[a] != sizes[b]) return sizes[a] < sizes[b];
  return a < b;
}

PruneResult remove_clusters(const KnnGraph& graph, const Partition& partition,
                            std::vector<ClusterId> pruned) {
  std::sort(pruned.begin(), pruned.end());
  std::vector<bool> dropped(partition.num_clusters(), false);
  for (ClusterId c : pruned) dropped[c] = true;

  PruneResult out;
  out.pruned_clusters = std::move(pruned);
  out.cluster_id_map.assign(partition.num_clusters(), std::nullopt);
  ClusterId next = 0;
  for (std::size_t c = 0; c < partition.num_clusters(); ++c) {
    if (!dropped[c]) out.cluster_id_map[c] = next++;
  }

  std::vector<bool> keep(graph.num_nodes());
  std::vector<ClusterId> assignment;
  for (std::size_t i = 0; i < graph.num_nodes(); ++i) {
    keep[i] = !dropped[partition[i]];
    if (keep[i]) {
      out.kept_nodes.push_back(i);
      assignment.push_back(*out.cluster_id_map[partition[i]]);
    } else {
      out.removed_nodes.push_back(i);
    }
  }
  out.graph = graph.induced_subgraph(keep);
  out.partition = Partition(std::move(assignment), next);
  return out;
}

}  // namespace

double cluster_confidence(const KnnGraph& graph, const Partition& partition, ClusterId cluster) {
  if (cluster >= partition.num_clusters()) {
    throw Error(ErrorCode::kUnknownCluster, "unknown cluster id " + std::to_string(cluster));
  }
  return ratio(cluster_edge_counts(graph, partition)[cluster]);
}

std::vector<double> cluster_confidences(const KnnGraph& graph, const Partition& partition) {
  const auto counts = cluster_edge_counts(graph, partition);
  std::vector<double> out;
  out.reserve(counts.size());
  for (const auto& c : counts) out.push_back(ratio(c));
  return out;
}

PruneResult prune_lowest(const KnnGraph& graph, const Partition& partition) {
  if (partition.num_clusters() < 2) {
    throw Error(ErrorCode::kTooFewClusters, "pruning needs at least two clusters");
  }
  const auto conf = cluster_confidences(graph, partition);
  const auto sizes = partition.cluster_sizes();
  std::size_t worst = 0;
  for (std::size_t c = 1; c < conf.size(); ++c) {
    if (weaker(c, worst, conf, sizes)) worst = c;
  }
  return remove_clusters(graph, partition, {static_cast<ClusterId>(worst)});
}

PruneResult prune_below(const KnnGraph& graph, const Partition& partition, double threshold) {
  const auto conf = cluster_confidences(graph, partition);
  const auto sizes = partition.cluster_sizes();
  std::vector<ClusterId> pruned;
  std::size_t best = 0;
  for (std::size_t c = 0; c < conf.size(); ++c) {
    if (conf[c] < threshold) pruned.push_back(static_cast<ClusterId>(c));
    if (c > 0 && weaker(best, c, conf, sizes)) best = c;
  }
  if (!conf.empty() && pruned.size() == conf.size()) {
    pruned.erase(std::find(pruned.begin(), pruned.end(), static_cast<ClusterId>(best)));
  }
  return remove_clusters(graph, partition, std::move(pruned));
}

std::vector<std::vector<std::string>> label_clusters(
    const Partition& partition, const std::vector<const std::vector<std::string>*>& node_tags,
    const std::unordered_map<std::string, std::size_t>& corpus_frequency, std::size_t n_labels) {
  if (node_tags.size() != partition.num_nodes()) {
    throw Error(ErrorCode::kLengthMismatch, "tag lists do not match partition size");
  }
  if (n_labels == 0) throw Error(ErrorCode::kInvalidArgument, "n_labels must be positive");
  std::vector<std::unordered_map<std::string, std::size_t>> counts(partition.num_clusters());
  for (std::size_t i = 0; i < node_tags.size(); ++i) {
    if (node_tags[i] == nullptr) continue;
    for (const auto& tag : normalize_tags(*node_tags[i])) ++counts[partition[i]][tag];
  }
  auto global = [&](const std::string& tag) {
    auto it = corpus_frequency.find(tag);
    return it == corpus_frequency.end() ? std::size_t{0} : it->second;
  };
  std::vector<std::vector<std::string>> out(partition.num_clusters());
  for (std::size_t c = 0; c < counts.size(); ++c) {
    std::vector<std::pair<std::string, std::size_t>> ranked(counts[c].begin(), counts[c].end());
    std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      const std::size_t ga = global(a.first);
      const std::size_t gb = global(b.first);
      if (ga != gb) return ga < gb;
      return a.first < b.first;
    });
    for (std::size_t i = 0; i < ranked.size() && i < n_labels; ++i) out[c].push_back(ranked[i].first);
  }
  return out;
}

std::vector<std::vector<std::string>> label_clusters(const Partition& partition,
                                                     const Corpus& corpus, std::size_t n_labels) {
  std::vector<const std::vector<std::string>*> tags;
  tags.reserve(corpus.size());
  for (const auto& d : corpus.documents()) tags.push_back(&d.tags);
  return label_clusters(partition, tags, corpus.tag_document_frequency(), n_labels);
}

}  // namespace soundclust
