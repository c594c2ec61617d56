#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "soundclust/graph.hpp"
#include "support/expect_error.hpp"

namespace soundclust {
namespace {

Matrix random_cloud(int n, int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  Matrix m(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = u(rng);
  return m;
}

// Degree under union symmetrization, from a brute-force sort of every row.
std::size_t union_degree(const Matrix& v, std::size_t k, std::size_t node) {
  const auto n = static_cast<std::size_t>(v.rows());
  auto out_list = [&](std::size_t i) {
    std::vector<std::size_t> order;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) order.push_back(j);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return (v.row(a) - v.row(i)).squaredNorm() < (v.row(b) - v.row(i)).squaredNorm();
    });
    order.resize(std::min(k, order.size()));
    return std::set<std::size_t>(order.begin(), order.end());
  };
  std::set<std::size_t> adjacent = out_list(node);
  for (std::size_t j = 0; j < n; ++j)
    if (j != node && out_list(j).count(node)) adjacent.insert(j);
  return adjacent.size();
}

TEST(DefaultK, Values) {
  EXPECT_EQ(default_k(2), 1u);
  EXPECT_EQ(default_k(3), 1u);
  EXPECT_EQ(default_k(64), 6u);
  EXPECT_EQ(default_k(65), 6u);
  EXPECT_EQ(default_k(1000), 9u);
  EXPECT_EQ(default_k(1024), 10u);
  EXPECT_SC_ERROR(default_k(1), ErrorCode::kTooFewNodes);
  EXPECT_SC_ERROR(default_k(0), ErrorCode::kTooFewNodes);
}

TEST(KnnSearch, HandDistancesWithSelfExcluded) {
  Matrix store(3, 2);
  store << 0, 0, 3, 4, 1, 0;
  Vector q = Vector::Zero(2);
  auto hits = knn_search(q, store, 2, 0);
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_EQ(hits[0], (Neighbor{2, 1.0}));
  EXPECT_EQ(hits[1], (Neighbor{1, 5.0}));
}

TEST(KnnSearch, AllRowsSortedWhenKEqualsN) {
  Matrix store(4, 1);
  store << 5, -1, 2, 0;
  auto hits = knn_search(Vector::Zero(1), store, 4);
  ASSERT_EQ(hits.size(), 4u);
  EXPECT_EQ(hits[0].index, 3u);
  EXPECT_EQ(hits[1].index, 1u);
  EXPECT_EQ(hits[2].index, 2u);
  EXPECT_EQ(hits[3].index, 0u);
}

TEST(KnnSearch, DuplicatePointsLowerIndexFirst) {
  Matrix store(4, 2);
  store << 1, 1, 1, 1, 1, 1, 0, 0;
  auto hits = knn_search(Vector::Zero(2), store, 3, 3);
  ASSERT_EQ(hits.size(), 3u);
  EXPECT_EQ(hits[0].index, 0u);
  EXPECT_EQ(hits[1].index, 1u);
  EXPECT_EQ(hits[2].index, 2u);
}

TEST(KnnSearch, Errors) {
  Matrix store = Matrix::Zero(3, 2);
  EXPECT_SC_ERROR(knn_search(Vector::Zero(2), store, 4), ErrorCode::kKTooLarge);
  EXPECT_SC_ERROR(knn_search(Vector::Zero(2), store, 3, 0), ErrorCode::kKTooLarge);
  EXPECT_SC_ERROR(knn_search(Vector::Zero(3), store, 1), ErrorCode::kDimensionMismatch);
}

TEST(BuildKnnGraph, TwoNodes) {
  Matrix v(2, 3);
  v << 0, 0, 0, 1, 1, 1;
  KnnGraph g = build_knn_graph(v);
  EXPECT_EQ(g.k_used(), 1u);
  ASSERT_EQ(g.num_edges(), 1u);
  EXPECT_EQ(g.edges()[0], (Edge{0, 1}));
}

TEST(BuildKnnGraph, TwoSeparatedPairs) {
  Matrix v(4, 2);
  v << 0, 0, 0, 1, 100, 0, 100, 1;
  KnnGraph g = build_knn_graph(v, {1});
  ASSERT_EQ(g.num_edges(), 2u);
  EXPECT_EQ(g.edges()[0], (Edge{0, 1}));
  EXPECT_EQ(g.edges()[1], (Edge{2, 3}));
}

TEST(BuildKnnGraph, MutualNeighborsGiveOneEdge) {
  Matrix v(3, 1);
  v << 0, 1, 10;
  KnnGraph g = build_knn_graph(v, {1});
  // 0<->1 mutual, 2->1.
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_EQ(g.degree(1), 2u);
}

TEST(BuildKnnGraph, KClampedAndErrors) {
  Matrix v(3, 1);
  v << 0, 1, 2;
  KnnGraph g = build_knn_graph(v, {10});
  EXPECT_EQ(g.k_used(), 2u);
  EXPECT_EQ(g.num_edges(), 3u);
  EXPECT_SC_ERROR(build_knn_graph(Matrix::Zero(1, 2)), ErrorCode::kTooFewNodes);
  EXPECT_SC_ERROR(build_knn_graph(v, {0}), ErrorCode::kInvalidArgument);
}

TEST(BuildKnnGraph, IdsCarried) {
  Matrix v(2, 1);
  v << 0, 1;
  KnnGraph g = build_knn_graph(v, {}, {"x", "y"});
  EXPECT_EQ(g.ids(), (std::vector<std::string>{"x", "y"}));
}

TEST(KnnGraph, NormalizesEdgesAndRejectsBadInput) {
  KnnGraph g(3, {{1, 0}, {0, 1}, {2, 1}}, 1);
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_EQ(g.edges()[0], (Edge{0, 1}));
  EXPECT_EQ(g.edges()[1], (Edge{1, 2}));
  EXPECT_EQ(g.neighbors(1), (std::vector<NodeId>{0, 2}));
  EXPECT_SC_ERROR(KnnGraph(2, {{1, 1}}, 1), ErrorCode::kInvalidArgument);
  EXPECT_SC_ERROR(KnnGraph(2, {{0, 2}}, 1), ErrorCode::kInvalidArgument);
}

TEST(KnnGraph, InducedSubgraph) {
  KnnGraph g(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}, 1, {"a", "b", "c", "d"});
  KnnGraph sub = g.induced_subgraph({true, false, true, true});
  EXPECT_EQ(sub.num_nodes(), 3u);
  EXPECT_EQ(sub.ids(), (std::vector<std::string>{"a", "c", "d"}));
  EXPECT_EQ(sub.edges(), (std::vector<Edge>{{0, 2}, {1, 2}}));
}

class CountingIndex final : public NeighborIndex {
 public:
  explicit CountingIndex(const Matrix& m) : inner_(m) {}
  std::size_t size() const override { return inner_.size(); }
  std::vector<Neighbor> neighbors_of(std::size_t row, std::size_t k) const override {
    ++calls;
    return inner_.neighbors_of(row, k);
  }
  mutable int calls = 0;

 private:
  ExactNeighborIndex inner_;
};

TEST(BuildKnnGraph, CustomNeighborIndexBackend) {
  std::mt19937_64 rng(1);
  Matrix v = random_cloud(20, 3, rng);
  CountingIndex index(v);
  KnnGraph a = build_knn_graph(index, {});
  KnnGraph b = build_knn_graph(v);
  EXPECT_EQ(index.calls, 20);
  EXPECT_EQ(a.edges(), b.edges());
}

// A centre point that is every spoke's nearest neighbour collects one edge
// per spoke, so union degree is not bounded by 2k. Five unit spokes sit
// 1.18 apart, farther from each other than from the centre.
TEST(BuildKnnGraph, HubDegreeExceedsTwiceK) {
  const int spokes = 5;
  Matrix v(spokes + 1, 2);
  v.row(0) << 0, 0;
  for (int s = 0; s < spokes; ++s) {
    const double a = 2.0 * 3.14159265358979 * s / spokes;
    v.row(s + 1) << std::cos(a), std::sin(a);
  }
  GraphConfig config;
  config.k_override = 1;
  KnnGraph g = build_knn_graph(v, config);
  EXPECT_EQ(g.degree(0), static_cast<std::size_t>(spokes));
  EXPECT_GT(g.degree(0), 2 * g.k_used());
}

TEST(BuildKnnGraphProperty, DegreeBounds) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 80);
    const int d = 1 + static_cast<int>(rng() % 6);
    Matrix v = random_cloud(n, d, rng);
    GraphConfig config;
    if (trial % 3 == 0) config.k_override = 1 + rng() % 10;
    KnnGraph g = build_knn_graph(v, config);
    const std::size_t k = g.k_used();
    EXPECT_LE(k, static_cast<std::size_t>(n - 1));
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
      EXPECT_GE(g.degree(i), std::min(k, static_cast<std::size_t>(n - 1)));
      EXPECT_EQ(g.degree(i), union_degree(v, k, i));
    }
    std::set<Edge> unique(g.edges().begin(), g.edges().end());
    EXPECT_EQ(unique.size(), g.num_edges());
    for (const auto& [a, b] : g.edges()) EXPECT_LT(a, b);
  }
}

TEST(BuildKnnGraphProperty, Deterministic) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix v = random_cloud(40, 4, rng);
    EXPECT_EQ(build_knn_graph(v).edges(), build_knn_graph(v).edges());
  }
}

TEST(BuildKnnGraphProperty, RowPermutationRelabelsEdges) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 50);
    Matrix v = random_cloud(n, 3, rng);  // continuous draws: distances distinct
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix permuted(n, 3);
    for (int i = 0; i < n; ++i) permuted.row(i) = v.row(perm[i]);

    KnnGraph original = build_knn_graph(v);
    KnnGraph shuffled = build_knn_graph(permuted);
    std::set<Edge> mapped;
    for (const auto& [a, b] : shuffled.edges()) {
      NodeId x = static_cast<NodeId>(perm[a]);
      NodeId y = static_cast<NodeId>(perm[b]);
      mapped.insert({std::min(x, y), std::max(x, y)});
    }
    EXPECT_EQ(std::vector<Edge>(mapped.begin(), mapped.end()), original.edges());
  }
}

}  // namespace
}  // namespace soundclust
