#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "soundclust/types.hpp"

namespace soundclust {

using Labels = std::span<const std::int64_t>;

// CH = [B / W] * [(n - k) / (k - 1)] with Euclidean within/between sums of
// squares. Throws Error(kDegenerateClustering) unless 2 <= k <= n - 1 and
// Error(kZeroWithinVariance) when W is zero up to rounding (W <= 1e-12 (W + B)).
double calinski_harabasz(const Matrix& features, Labels labels);

struct ContingencyTable {
  // |U| x |V|; rows follow ascending u label values, columns ascending v.
  std::vector<std::vector<std::int64_t>> counts;
  std::vector<std::int64_t> row_sums;
  std::vector<std::int64_t> col_sums;
  std::int64_t total = 0;

  std::size_t rows() const { return row_sums.size(); }
  std::size_t cols() const { return col_sums.size(); }
};

// Throws Error(kLengthMismatch) for unequal lengths, Error(kInvalidArgument)
// for empty input.
ContingencyTable contingency(Labels u, Labels v);

// All quantities are in nats.
double mutual_information(const ContingencyTable& table);
double entropy(Labels labels);
// Expected MI under the fixed-marginal (hypergeometric) permutation model.
double expected_mutual_information(const ContingencyTable& table);

// (MI - E[MI]) / (max(H(U), H(V)) - E[MI]). When the denominator vanishes the
// score is 1.0 for identical partitions (up to relabeling) and 0.0 otherwise.
// Exactly symmetric in its arguments.
double adjusted_mutual_information(Labels u, Labels v);

}  // namespace soundclust
