#include "soundclust/validation.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <unordered_set>

#include "soundclust/error.hpp"
#include "soundclust/eval.hpp"
#include "soundclust/json_io.hpp"

namespace soundclust {

std::size_t EvalReport::scored_runs() const {
  std::size_t n = 0;
  for (const auto& r : runs) n += r.skipped() ? 0 : 1;
  return n;
}

EvalReport make_report(std::string metric, bool pruning, std::vector<RunScore> runs) {
  EvalReport report{std::move(metric), pruning, std::move(runs), std::nullopt, std::nullopt};
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : report.runs) {
    if (r.score) {
      sum += *r.score;
      ++n;
    }
  }
  if (n == 0) return report;
  const double mean = sum / static_cast<double>(n);
  double sq = 0.0;
  for (const auto& r : report.runs) {
    if (r.score) sq += (*r.score - mean) * (*r.score - mean);
  }
  report.mean = mean;
  report.std = std::sqrt(sq / static_cast<double>(n));
  return report;
}

std::string report_to_json(const EvalReport& report) {
  json runs = json::array();
  for (const auto& r : report.runs) {
    json run{{"id", r.id}, {"score", r.score ? json(*r.score) : json(nullptr)}, {"skipped", r.skipped()}};
    if (r.skipped()) run["reason"] = r.skip_reason;
    runs.push_back(std::move(run));
  }
  json out{{"metric", report.metric},
           {"pruning", report.pruning},
           {"runs", std::move(runs)},
           {"mean", report.mean ? json(*report.mean) : json(nullptr)},
           {"std", report.std ? json(*report.std) : json(nullptr)}};
  return out.dump(2);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Round-trippable decimal text.
std::string number_text(double v) { return json(v).dump(); }

}  // namespace

std::string report_to_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "metric,pruning,id,score,skipped\n";
  for (const auto& r : report.runs) {
    out << report.metric << ',' << (report.pruning ? "true" : "false") << ',' << csv_field(r.id) << ','
        << (r.score ? number_text(*r.score) : std::string()) << ','
        << (r.skipped() ? "true" : "false") << '\n';
  }
  return out.str();
}

namespace {

// A batch item after duration filtering and feature extraction.
struct PreparedItem {
  std::string id;
  std::vector<const SoundDocument*> docs;
  Matrix vectors;
  std::string failure;  // non-empty when the item cannot be evaluated
};

std::vector<const SoundDocument*> filter_documents(const Corpus& corpus,
                                                   const ValidationConfig& config) {
  std::vector<const SoundDocument*> out;
  for (const auto& doc : corpus.documents()) {
    if (config.max_duration && doc.duration > *config.max_duration) continue;
    out.push_back(&doc);
  }
  return out;
}

std::string describe(const Error& e) {
  return std::string(error_code_name(e.code())) + ": " + e.what();
}

// Extracts feature vectors and, when requested, projects every item with a
// PCA model fitted over all usable items together.
void extract_vectors(std::vector<PreparedItem>& items, const ValidationConfig& config) {
  for (auto& item : items) {
    if (!item.failure.empty()) continue;
    try {
      item.vectors = document_matrix(item.docs, config.features);
    } catch (const Error& e) {
      item.failure = describe(e);
    }
  }
  if (config.pca_dims == 0) return;

  Eigen::Index rows = 0;
  Eigen::Index cols = -1;
  for (const auto& item : items) {
    if (!item.failure.empty()) continue;
    if (cols < 0) cols = item.vectors.cols();
    if (item.vectors.cols() != cols) {
      throw Error(ErrorCode::kDimensionMismatch, "feature dimensionality differs between batch items");
    }
    rows += item.vectors.rows();
  }
  if (cols < 0) return;
  Matrix all(rows, cols);
  Eigen::Index at = 0;
  for (const auto& item : items) {
    if (!item.failure.empty()) continue;
    all.middleRows(at, item.vectors.rows()) = item.vectors;
    at += item.vectors.rows();
  }
  const ProjectionModel pca = fit_projection(all, ProjectionKind::kPca, config.pca_dims);
  for (auto& item : items) {
    if (item.failure.empty()) item.vectors = apply_projection(item.vectors, pca);
  }
}

RunScore skipped(const std::string& id, std::string reason) { return RunScore{id, std::nullopt, std::move(reason)}; }

std::vector<std::int64_t> to_labels(const std::vector<std::optional<ClusterId>>& assignment,
                                    const std::vector<std::size_t>& nodes) {
  std::vector<std::int64_t> out;
  out.reserve(nodes.size());
  for (auto n : nodes) out.push_back(static_cast<std::int64_t>(*assignment[n]));
  return out;
}

// Nodes that remain clustered after optional pruning.
std::vector<std::size_t> clustered_nodes(const std::vector<std::optional<ClusterId>>& assignment) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i]) out.push_back(i);
  }
  return out;
}

}  // namespace

EvalReport internal_validation_run(std::span<const QueryResultSet> queries,
                                   const ValidationConfig& config) {
  std::vector<PreparedItem> items;
  items.reserve(queries.size());
  for (const auto& q : queries) {
    PreparedItem item{q.id, filter_documents(q.corpus, config), {}, {}};
    if (item.docs.size() < kMinDocumentsPerQuery) {
      item.failure = "fewer than " + std::to_string(kMinDocumentsPerQuery) + " documents";
    }
    items.push_back(std::move(item));
  }
  extract_vectors(items, config);

  // Tag space over the union of all evaluated documents.
  std::vector<const SoundDocument*> background;
  std::unordered_set<std::string> seen;
  for (const auto& item : items) {
    if (!item.failure.empty()) continue;
    for (const SoundDocument* doc : item.docs) {
      if (seen.insert(doc->id).second) background.push_back(doc);
    }
  }
  std::optional<TagSpace> tag_space;
  std::string tag_space_failure;
  if (!background.empty()) {
    try {
      tag_space = fit_tag_space(background, config.vocab_size, config.lsa_dims);
    } catch (const Error& e) {
      tag_space_failure = describe(e);
    }
  }

  std::vector<RunScore> runs;
  for (const auto& item : items) {
    if (!item.failure.empty()) {
      runs.push_back(skipped(item.id, item.failure));
      continue;
    }
    if (!tag_space) {
      runs.push_back(skipped(item.id, tag_space_failure));
      continue;
    }
    try {
      std::vector<std::string> ids;
      for (const SoundDocument* d : item.docs) ids.push_back(d->id);
      const ClusteringOutcome oc = run_clustering(item.vectors, config.clustering, ids);
      const auto assignment = oc.final_assignment();
      const auto nodes = clustered_nodes(assignment);
      std::vector<const SoundDocument*> kept;
      for (auto n : nodes) kept.push_back(item.docs[n]);
      const Matrix tag_features = tag_space->embed(kept);
      const auto labels = to_labels(assignment, nodes);
      runs.push_back(RunScore{item.id, calinski_harabasz(tag_features, labels), {}});
    } catch (const Error& e) {
      runs.push_back(skipped(item.id, describe(e)));
    }
  }
  return make_report("CHI", config.clustering.prune, std::move(runs));
}

EvalReport external_validation_run(std::span<const LabeledDataset> datasets,
                                   const ValidationConfig& config) {
  std::vector<PreparedItem> items;
  std::vector<std::vector<std::int64_t>> truths;
  items.reserve(datasets.size());
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    const auto& ds = datasets[i];
    std::string id = ds.name.empty() ? "dataset-" + std::to_string(i) : ds.name;
    PreparedItem item{std::move(id), filter_documents(ds.corpus, config), {}, {}};
    std::map<std::string, std::int64_t> class_ids;
    std::vector<std::int64_t> truth;
    for (const SoundDocument* doc : item.docs) {
      const auto& cls = ds.labels.at(doc->id);
      auto [it, inserted] = class_ids.emplace(cls, static_cast<std::int64_t>(class_ids.size()));
      truth.push_back(it->second);
    }
    if (item.docs.size() < 2) item.failure = "fewer than 2 documents";
    items.push_back(std::move(item));
    truths.push_back(std::move(truth));
  }
  extract_vectors(items, config);

  std::vector<RunScore> runs;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& item = items[i];
    if (!item.failure.empty()) {
      runs.push_back(skipped(item.id, item.failure));
      continue;
    }
    try {
      std::vector<std::string> ids;
      for (const SoundDocument* d : item.docs) ids.push_back(d->id);
      const ClusteringOutcome oc = run_clustering(item.vectors, config.clustering, ids);
      const auto assignment = oc.final_assignment();
      const auto nodes = clustered_nodes(assignment);
      std::vector<std::int64_t> truth;
      truth.reserve(nodes.size());
      for (auto n : nodes) truth.push_back(truths[i][n]);
      const auto predicted = to_labels(assignment, nodes);
      runs.push_back(RunScore{item.id, adjusted_mutual_information(truth, predicted), {}});
    } catch (const Error& e) {
      runs.push_back(skipped(item.id, describe(e)));
    }
  }
  return make_report("AMI", config.clustering.prune, std::move(runs));
}

}  // namespace soundclust
