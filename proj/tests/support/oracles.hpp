#pragma once

// Brute-force reference evaluators. They deliberately take different routes
// from the library code they check (pairwise sums, enumeration) and share no
// code with it.

#include <cstdint>
#include <utility>
#include <vector>

#include "soundclust/types.hpp"

namespace soundclust::testing {

using EdgeList = std::vector<std::pair<int, int>>;

// All set partitions of n items as restricted-growth strings.
std::vector<std::vector<int>> enumerate_set_partitions(int n, int max_blocks = -1);

// Q = 1/(2m) * sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j) over ordered pairs.
double pairwise_modularity(int n, const EdgeList& edges, const std::vector<int>& labels);

struct BruteForceOptimum {
  double q = 0.0;
  std::vector<int> labels;
};
BruteForceOptimum max_modularity(int n, const EdgeList& edges);

// MI in nats from joint/marginal probabilities.
double direct_mutual_information(const std::vector<int>& u, const std::vector<int>& v);

// Mean MI of u against every distinct rearrangement of v. Each distinct
// arrangement occurs equally often among the n! permutations, so this equals
// the mean over all permutations.
double permutation_average_mi(const std::vector<int>& u, const std::vector<int>& v);

// CHI from pairwise squared distances: W = sum_c 1/(2 n_c) sum_{x,y in c} |x-y|^2,
// total T likewise over all points, B = T - W.
double pairwise_calinski_harabasz(const Matrix& features, const std::vector<int>& labels);

}  // namespace soundclust::testing
