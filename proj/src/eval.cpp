#include "soundclust/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "soundclust/error.hpp"

namespace soundclust {
namespace {

// Dense ranks of label values in ascending order.
std::vector<std::size_t> dense_ranks(Labels labels, std::size_t& num_classes) {
  std::vector<std::int64_t> values(labels.begin(), labels.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  num_classes = values.size();
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (auto l : labels) {
    out.push_back(static_cast<std::size_t>(
        std::lower_bound(values.begin(), values.end(), l) - values.begin()));
  }
  return out;
}

// Summation over sorted terms makes results independent of term order, which
// keeps MI/AMI bit-identical under transposition and relabeling.
double ordered_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

double entropy_of_counts(const std::vector<std::int64_t>& counts, std::int64_t total) {
  std::vector<double> terms;
  terms.reserve(counts.size());
  const double n = static_cast<double>(total);
  for (auto c : counts) {
    if (c == 0) continue;
    terms.push_back(static_cast<double>(c) / n * std::log(n / static_cast<double>(c)));
  }
  return ordered_sum(terms);
}

// log(k!) for k = 0..n.
std::vector<double> log_factorials(std::int64_t n) {
  std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
  for (std::int64_t k = 2; k <= n; ++k) {
    out[static_cast<std::size_t>(k)] = out[static_cast<std::size_t>(k - 1)] +
                                       std::log(static_cast<double>(k));
  }
  return out;
}

bool same_partition(const ContingencyTable& t) {
  if (t.rows() != t.cols()) return false;
  for (const auto& row : t.counts) {
    std::size_t nonzero = 0;
    for (auto c : row) nonzero += c > 0 ? 1 : 0;
    if (nonzero != 1) return false;
  }
  return true;
}

}  // namespace

double calinski_harabasz(const Matrix& features, Labels labels) {
  const auto n = static_cast<std::size_t>(features.rows());
  if (labels.size() != n) {
    throw Error(ErrorCode::kLengthMismatch, "labels do not match feature rows");
  }
  std::size_t k = 0;
  const auto cluster = dense_ranks(labels, k);
  if (n < 2 || k < 2 || k > n - 1) {
    throw Error(ErrorCode::kDegenerateClustering,
                "CHI needs 2 <= k <= n-1 (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
  }
  const Eigen::Index d = features.cols();
  const Vector global = features.colwise().mean().transpose();
  Matrix centroids = Matrix::Zero(static_cast<Eigen::Index>(k), d);
  std::vector<double> sizes(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    centroids.row(static_cast<Eigen::Index>(cluster[i])) += features.row(static_cast<Eigen::Index>(i));
    sizes[cluster[i]] += 1.0;
  }
  for (std::size_t c = 0; c < k; ++c) centroids.row(static_cast<Eigen::Index>(c)) /= sizes[c];

  double within = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    within += (features.row(static_cast<Eigen::Index>(i)) -
               centroids.row(static_cast<Eigen::Index>(cluster[i])))
                  .squaredNorm();
  }
  double between = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    between += sizes[c] * (centroids.row(static_cast<Eigen::Index>(c)).transpose() - global).squaredNorm();
  }
  // Rounding can leave a residue where the dispersion is exactly zero.
  if (within <= 1e-12 * (within + between)) {
    throw Error(ErrorCode::kZeroWithinVariance, "within-cluster dispersion is zero");
  }
  return (between / within) * (static_cast<double>(n - k) / static_cast<double>(k - 1));
}

ContingencyTable contingency(Labels u, Labels v) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::kLengthMismatch, "labelings differ in length: " + std::to_string(u.size()) +
                                                " vs " + std::to_string(v.size()));
  }
  if (u.empty()) throw Error(ErrorCode::kInvalidArgument, "labelings are empty");
  std::size_t ru = 0;
  std::size_t rv = 0;
  const auto du = dense_ranks(u, ru);
  const auto dv = dense_ranks(v, rv);
  ContingencyTable t;
  t.counts.assign(ru, std::vector<std::int64_t>(rv, 0));
  t.row_sums.assign(ru, 0);
  t.col_sums.assign(rv, 0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    ++t.counts[du[i]][dv[i]];
    ++t.row_sums[du[i]];
    ++t.col_sums[dv[i]];
  }
  t.total = static_cast<std::int64_t>(u.size());
  return t;
}

double mutual_information(const ContingencyTable& t) {
  const double n = static_cast<double>(t.total);
  std::vector<double> terms;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.cols(); ++j) {
      const std::int64_t nij = t.counts[i][j];
      if (nij == 0) continue;
      // Integer products are exact, so the ratio is correctly rounded.
      const double ratio = static_cast<double>(t.total * nij) /
                           static_cast<double>(t.row_sums[i] * t.col_sums[j]);
      terms.push_back(static_cast<double>(nij) / n * std::log(ratio));
    }
  }
  return std::max(0.0, ordered_sum(terms));
}

double entropy(Labels labels) {
  if (labels.empty()) return 0.0;
  std::size_t k = 0;
  const auto ranks = dense_ranks(labels, k);
  std::vector<std::int64_t> counts(k, 0);
  for (auto r : ranks) ++counts[r];
  return entropy_of_counts(counts, static_cast<std::int64_t>(labels.size()));
}

double expected_mutual_information(const ContingencyTable& t) {
  const std::int64_t n = t.total;
  if (n <= 0) return 0.0;
  const auto lf = log_factorials(n);
  auto log_fact = [&](std::int64_t k) { return lf[static_cast<std::size_t>(k)]; };
  const double nd = static_cast<double>(n);

  std::vector<double> terms;
  for (auto a_raw : t.row_sums) {
    for (auto b_raw : t.col_sums) {
      // Symmetric evaluation order so the result does not depend on which
      // labeling supplies rows.
      const std::int64_t a = std::min(a_raw, b_raw);
      const std::int64_t b = std::max(a_raw, b_raw);
      const double fixed = log_fact(a) + log_fact(b) + log_fact(n - a) + log_fact(n - b) - log_fact(n);
      double cell = 0.0;
      for (std::int64_t nij = std::max<std::int64_t>(1, a + b - n); nij <= a; ++nij) {
        const double log_p = fixed - log_fact(nij) - log_fact(a - nij) - log_fact(b - nij) -
                             log_fact(n - a - b + nij);
        const double ratio = static_cast<double>(n * nij) / static_cast<double>(a * b);
        cell += static_cast<double>(nij) / nd * std::log(ratio) * std::exp(log_p);
      }
      terms.push_back(cell);
    }
  }
  return ordered_sum(terms);
}

double adjusted_mutual_information(Labels u, Labels v) {
  const ContingencyTable t = contingency(u, v);
  if (t.rows() == 1 && t.cols() == 1) return 1.0;
  const double mi = mutual_information(t);
  const double emi = expected_mutual_information(t);
  const double h = std::max(entropy_of_counts(t.row_sums, t.total),
                            entropy_of_counts(t.col_sums, t.total));
  const double denominator = h - emi;
  if (std::abs(denominator) <= 1e-15 * std::max(1.0, h)) {
    return same_partition(t) ? 1.0 : 0.0;
  }
  return (mi - emi) / denominator;
}

}  // namespace soundclust
