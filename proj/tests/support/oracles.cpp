#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace soundclust::testing {
namespace {

void grow(int n, int max_blocks, std::vector<int>& current, int blocks,
          std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == n) {
    out.push_back(current);
    return;
  }
  const int limit = max_blocks < 0 ? blocks + 1 : std::min(blocks + 1, max_blocks);
  for (int b = 0; b < limit; ++b) {
    current.push_back(b);
    grow(n, max_blocks, current, std::max(blocks, b + 1), out);
    current.pop_back();
  }
}

}  // namespace

std::vector<std::vector<int>> enumerate_set_partitions(int n, int max_blocks) {
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  grow(n, max_blocks, current, 0, out);
  return out;
}

double pairwise_modularity(int n, const EdgeList& edges, const std::vector<int>& labels) {
  std::vector<std::vector<int>> adj(n, std::vector<int>(n, 0));
  for (const auto& [a, b] : edges) {
    adj[a][b] = 1;
    adj[b][a] = 1;
  }
  std::vector<double> k(n, 0.0);
  double two_m = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) k[i] += adj[i][j];
    two_m += k[i];
  }
  double q = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (labels[i] != labels[j]) continue;
      q += adj[i][j] - k[i] * k[j] / two_m;
    }
  }
  return q / two_m;
}

BruteForceOptimum max_modularity(int n, const EdgeList& edges) {
  BruteForceOptimum best{-1.0, {}};
  for (const auto& labels : enumerate_set_partitions(n)) {
    const double q = pairwise_modularity(n, edges, labels);
    if (q > best.q) best = {q, labels};
  }
  return best;
}

double direct_mutual_information(const std::vector<int>& u, const std::vector<int>& v) {
  const double n = static_cast<double>(u.size());
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> pu;
  std::map<int, double> pv;
  for (std::size_t i = 0; i < u.size(); ++i) {
    joint[{u[i], v[i]}] += 1.0 / n;
    pu[u[i]] += 1.0 / n;
    pv[v[i]] += 1.0 / n;
  }
  double mi = 0.0;
  for (const auto& [key, p] : joint) mi += p * std::log(p / (pu[key.first] * pv[key.second]));
  return mi;
}

double permutation_average_mi(const std::vector<int>& u, const std::vector<int>& v) {
  std::vector<int> arrangement = v;
  std::sort(arrangement.begin(), arrangement.end());
  double sum = 0.0;
  long count = 0;
  do {
    sum += direct_mutual_information(u, arrangement);
    ++count;
  } while (std::next_permutation(arrangement.begin(), arrangement.end()));
  return sum / static_cast<double>(count);
}

double pairwise_calinski_harabasz(const Matrix& features, const std::vector<int>& labels) {
  const int n = static_cast<int>(features.rows());
  std::map<int, int> sizes;
  for (int l : labels) ++sizes[l];
  const int k = static_cast<int>(sizes.size());
  double total = 0.0;
  double within = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double d2 = (features.row(i) - features.row(j)).squaredNorm();
      total += d2;
      if (labels[i] == labels[j]) within += d2 / (2.0 * sizes[labels[i]]);
    }
  }
  total /= 2.0 * n;
  const double between = total - within;
  return (between / within) * (static_cast<double>(n - k) / static_cast<double>(k - 1));
}

}  // namespace soundclust::testing
