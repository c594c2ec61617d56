#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "soundclust/types.hpp"

namespace soundclust {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;  // first < second

// floor(log2(n)), at least 1. Throws Error(kTooFewNodes) for n < 2.
std::size_t default_k(std::size_t n);

struct Neighbor {
  std::size_t index;
  double distance;

  bool operator==(const Neighbor&) const = default;
};

// Exact Euclidean k-NN over the rows of `store`, sorted by ascending distance
// with ties broken by ascending index. Row `exclude`, when given, is skipped.
// Throws Error(kKTooLarge) or Error(kDimensionMismatch).
std::vector<Neighbor> knn_search(const Vector& query, const Matrix& store, std::size_t k,
                                 std::optional<std::size_t> exclude = std::nullopt);

// Extension point for alternative (e.g. approximate) neighbor backends.
class NeighborIndex {
 public:
  virtual ~NeighborIndex() = default;
  virtual std::size_t size() const = 0;
  // k nearest rows to row `row`, excluding the row itself.
  virtual std::vector<Neighbor> neighbors_of(std::size_t row, std::size_t k) const = 0;
};

class ExactNeighborIndex final : public NeighborIndex {
 public:
  explicit ExactNeighborIndex(const Matrix& vectors) : vectors_(vectors) {}
  std::size_t size() const override { return static_cast<std::size_t>(vectors_.rows()); }
  std::vector<Neighbor> neighbors_of(std::size_t row, std::size_t k) const override;

 private:
  const Matrix& vectors_;
};

// Undirected, unweighted graph with sorted, duplicate-free edges and no self
// loops. Node i corresponds to ids()[i].
class KnnGraph {
 public:
  KnnGraph() = default;

  // Normalizes the edge list (orientation, sorting, duplicates). Throws
  // Error(kInvalidArgument) on self loops or out-of-range endpoints.
  KnnGraph(std::size_t num_nodes, std::vector<Edge> edges, std::size_t k_used,
           std::vector<std::string> ids = {});

  std::size_t num_nodes() const { return adjacency_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t k_used() const { return k_used_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<NodeId>& neighbors(std::size_t node) const { return adjacency_[node]; }
  std::size_t degree(std::size_t node) const { return adjacency_[node].size(); }
  const std::vector<std::string>& ids() const { return ids_; }

  // Subgraph induced by the nodes with keep[i] == true, renumbered densely in
  // ascending original order.
  KnnGraph induced_subgraph(const std::vector<bool>& keep) const;

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::size_t k_used_ = 0;
  std::vector<std::string> ids_;
};

struct GraphConfig {
  std::optional<std::size_t> k_override;
};

// Directed k-NN lists (self excluded) symmetrized by union. The effective k
// is min(k, n - 1). Throws Error(kTooFewNodes) for fewer than two rows.
KnnGraph build_knn_graph(const Matrix& vectors, const GraphConfig& config = {},
                         std::vector<std::string> ids = {});
KnnGraph build_knn_graph(const NeighborIndex& index, const GraphConfig& config,
                         std::vector<std::string> ids = {});

}  // namespace soundclust
