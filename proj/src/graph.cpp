#include "soundclust/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "soundclust/error.hpp"

namespace soundclust {

std::size_t default_k(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::kTooFewNodes, "need at least two nodes, got " + std::to_string(n));
  // bit_width(n) - 1 == floor(log2(n)) exactly, without floating point.
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::bit_width(n)) - 1);
}

std::vector<Neighbor> knn_search(const Vector& query, const Matrix& store, std::size_t k,
                                 std::optional<std::size_t> exclude) {
  if (query.size() != store.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "query has " + std::to_string(query.size()) + " dims, store has " +
                    std::to_string(store.cols()));
  }
  const auto n = static_cast<std::size_t>(store.rows());
  const bool excluding = exclude.has_value() && *exclude < n;
  const std::size_t available = excluding ? n - 1 : n;
  if (k > available) {
    throw Error(ErrorCode::kKTooLarge,
                "k=" + std::to_string(k) + " exceeds " + std::to_string(available) + " candidates");
  }

  struct Candidate {
    double squared;
    std::size_t index;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(available);
  for (std::size_t i = 0; i < n; ++i) {
    if (excluding && i == *exclude) continue;
    candidates.push_back({(store.row(static_cast<Eigen::Index>(i)).transpose() - query).squaredNorm(), i});
  }
  auto closer = [](const Candidate& a, const Candidate& b) {
    if (a.squared != b.squared) return a.squared < b.squared;
    return a.index < b.index;
  };
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k),
                    candidates.end(), closer);

  std::vector<Neighbor> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    out.push_back({candidates[i].index, std::sqrt(candidates[i].squared)});
  }
  return out;
}

std::vector<Neighbor> ExactNeighborIndex::neighbors_of(std::size_t row, std::size_t k) const {
  return knn_search(vectors_.row(static_cast<Eigen::Index>(row)).transpose(), vectors_, k, row);
}

KnnGraph::KnnGraph(std::size_t num_nodes, std::vector<Edge> edges, std::size_t k_used,
                   std::vector<std::string> ids)
    : edges_(std::move(edges)), adjacency_(num_nodes), k_used_(k_used), ids_(std::move(ids)) {
  if (ids_.empty()) {
    ids_.reserve(num_nodes);
    for (std::size_t i = 0; i < num_nodes; ++i) ids_.push_back(std::to_string(i));
  } else if (ids_.size() != num_nodes) {
    throw Error(ErrorCode::kLengthMismatch, "graph ids do not match node count");
  }
  for (auto& [a, b] : edges_) {
    if (a == b) throw Error(ErrorCode::kInvalidArgument, "self loop on node " + std::to_string(a));
    if (a >= num_nodes || b >= num_nodes) {
      throw Error(ErrorCode::kInvalidArgument, "edge endpoint out of range");
    }
    if (a > b) std::swap(a, b);
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (const auto& [a, b] : edges_) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());
}

KnnGraph KnnGraph::induced_subgraph(const std::vector<bool>& keep) const {
  if (keep.size() != num_nodes()) throw Error(ErrorCode::kLengthMismatch, "keep mask size mismatch");
  std::vector<NodeId> remap(num_nodes(), 0);
  std::vector<std::string> ids;
  NodeId next = 0;
  for (std::size_t i = 0; i < num_nodes(); ++i) {
    if (keep[i]) {
      remap[i] = next++;
      ids.push_back(ids_[i]);
    }
  }
  std::vector<Edge> edges;
  for (const auto& [a, b] : edges_) {
    if (keep[a] && keep[b]) edges.emplace_back(remap[a], remap[b]);
  }
  return KnnGraph(next, std::move(edges), k_used_, std::move(ids));
}

KnnGraph build_knn_graph(const NeighborIndex& index, const GraphConfig& config,
                         std::vector<std::string> ids) {
  const std::size_t n = index.size();
  if (n < 2) throw Error(ErrorCode::kTooFewNodes, "need at least two nodes, got " + std::to_string(n));
  std::size_t k = config.k_override ? *config.k_override : default_k(n);
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be positive");
  k = std::min(k, n - 1);

  std::vector<Edge> edges;
  edges.reserve(n * k);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& nb : index.neighbors_of(i, k)) {
      edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(nb.index));
    }
  }
  return KnnGraph(n, std::move(edges), k, std::move(ids));
}

KnnGraph build_knn_graph(const Matrix& vectors, const GraphConfig& config,
                         std::vector<std::string> ids) {
  if (vectors.rows() < 2) {
    throw Error(ErrorCode::kTooFewNodes,
                "need at least two nodes, got " + std::to_string(vectors.rows()));
  }
  ExactNeighborIndex index(vectors);
  return build_knn_graph(index, config, std::move(ids));
}

}  // namespace soundclust
