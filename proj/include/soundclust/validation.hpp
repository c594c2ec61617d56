#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "soundclust/corpus.hpp"
#include "soundclust/features.hpp"
#include "soundclust/pipeline.hpp"

namespace soundclust {

struct RunScore {
  std::string id;
  std::optional<double> score;  // absent when skipped
  std::string skip_reason;

  bool skipped() const { return !score.has_value(); }
};

struct EvalReport {
  std::string metric;  // "CHI" or "AMI"
  bool pruning = false;
  std::vector<RunScore> runs;
  // Over non-skipped runs; population standard deviation. Absent with no
  // scored runs.
  std::optional<double> mean;
  std::optional<double> std;

  std::size_t scored_runs() const;
};

EvalReport make_report(std::string metric, bool pruning, std::vector<RunScore> runs);

std::string report_to_json(const EvalReport& report);
std::string report_to_csv(const EvalReport& report);

struct ValidationConfig {
  FeatureOptions features;
  // When positive, a PCA model with this many dimensions is fitted over every
  // document in the batch and applied before graph construction.
  std::size_t pca_dims = 0;
  ClusteringOptions clustering;
  std::size_t vocab_size = kDefaultVocabularySize;
  std::size_t lsa_dims = kDefaultLsaDims;
  // Documents longer than this are dropped before evaluation.
  std::optional<double> max_duration = 10.0;
};

// One query's result set.
struct QueryResultSet {
  std::string id;
  Corpus corpus;
};

inline constexpr std::size_t kMinDocumentsPerQuery = 4;

// Clusters each query on audio features and scores the clustering with CHI
// over tag-LSA features fitted on the union of all queries' documents.
EvalReport internal_validation_run(std::span<const QueryResultSet> queries,
                                   const ValidationConfig& config);

// Clusters each dataset and scores AMI against its ground-truth classes. With
// pruning, pruned documents are dropped from both labelings.
EvalReport external_validation_run(std::span<const LabeledDataset> datasets,
                                   const ValidationConfig& config);

}  // namespace soundclust
