#include "soundclust/cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "soundclust/error.hpp"
#include "soundclust/features.hpp"
#include "soundclust/json_io.hpp"
#include "soundclust/pipeline.hpp"
#include "soundclust/service.hpp"
#include "soundclust/validation.hpp"

namespace soundclust {
namespace {

struct ClusterArgs {
  std::string corpus_path;
  std::uint64_t seed = 0;
  std::optional<std::size_t> k;
  bool prune = false;
  std::optional<double> prune_threshold;
  std::string scheme = "clip";
  std::string projection_path;
  std::size_t max_results = 500;
  std::size_t n_labels = kDefaultLabelCount;
  std::string output;
};

struct EvalArgs {
  std::string mode;
  std::vector<std::string> inputs;
  bool prune = false;
  std::uint64_t seed = 0;
  std::size_t dims = kDefaultLsaDims;
  std::size_t vocab = kDefaultVocabularySize;
  std::size_t pca_dims = 0;
  std::optional<std::size_t> k;
  std::string scheme = "clip";
  double max_duration = 10.0;
  std::string output;
  std::string csv;
};

struct FitArgs {
  std::string corpus_path;
  std::string kind;
  std::size_t dims = 100;
  std::string scheme = "clip";
  bool standardize = false;
  std::size_t vocab = kDefaultVocabularySize;
  std::uint64_t seed = 0;
  std::string output;
};

struct ServeArgs {
  std::string listen = "127.0.0.1:8080";
  std::string corpus_path;
  std::string projection_path;
  std::size_t max_results = 500;
  std::size_t max_documents = 10000;
  std::uint64_t seed = 0;
};

FeatureOptions feature_options(const std::string& scheme) {
  FeatureOptions options;
  if (scheme != "clip") options.scheme = scheme_from_name(scheme);
  return options;
}

const std::vector<std::string> kSchemes = {"clip", "handcrafted", "embedding_mean"};

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text << '\n';
  } else {
    write_file(path, text + "\n");
  }
}

int cmd_cluster(const ClusterArgs& args, std::ostream& out) {
  const Corpus corpus = load_corpus_file(args.corpus_path);
  std::optional<ProjectionModel> projection;
  if (!args.projection_path.empty()) projection = parse_projection(read_file(args.projection_path));

  PipelineInput input;
  for (const auto& doc : corpus.documents()) {
    if (input.documents.size() == args.max_results) break;
    input.documents.push_back(&doc);
  }
  const auto frequency = corpus.tag_document_frequency();
  input.tag_frequency = &frequency;
  input.features = feature_options(args.scheme);
  input.projection = projection ? &*projection : nullptr;
  input.clustering.seed = args.seed;
  input.clustering.prune = args.prune || args.prune_threshold.has_value();
  input.clustering.prune_threshold = args.prune_threshold;
  input.clustering.graph.k_override = args.k;
  input.n_labels = args.n_labels;

  const PipelineResult result = run_pipeline(input);
  emit(args.output, pipeline_result_to_json(result, input).dump(2), out);
  return kExitOk;
}

std::string stem_of(const std::string& path) { return std::filesystem::path(path).stem().string(); }

int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err) {
  ValidationConfig config;
  config.features = feature_options(args.scheme);
  config.pca_dims = args.pca_dims;
  config.clustering.seed = args.seed;
  config.clustering.prune = args.prune;
  config.clustering.graph.k_override = args.k;
  config.vocab_size = args.vocab;
  config.lsa_dims = args.dims;
  config.max_duration = args.max_duration > 0.0 ? std::optional<double>(args.max_duration) : std::nullopt;

  EvalReport report;
  if (args.mode == "internal") {
    std::vector<QueryResultSet> queries;
    for (const auto& path : args.inputs) {
      const json root = parse_json_text(read_file(path));
      if (root.is_object() && root.contains("queries")) {
        for (const auto& q : root["queries"]) {
          queries.push_back({q.at("id").get<std::string>(), corpus_from_json(q)});
        }
      } else {
        queries.push_back({stem_of(path), corpus_from_json(root)});
      }
    }
    report = internal_validation_run(queries, config);
  } else {
    std::vector<LabeledDataset> datasets;
    for (const auto& path : args.inputs) {
      LabeledDataset ds = load_labeled_dataset_file(path);
      if (ds.name.empty()) ds.name = stem_of(path);
      datasets.push_back(std::move(ds));
    }
    report = external_validation_run(datasets, config);
  }

  emit(args.output, report_to_json(report), out);
  std::string csv_path = args.csv;
  if (csv_path.empty() && !args.output.empty() && args.output != "-") {
    csv_path = std::filesystem::path(args.output).replace_extension(".csv").string();
  }
  if (!csv_path.empty()) write_file(csv_path, report_to_csv(report));

  if (report.scored_runs() == 0) {
    err << "error: no runnable inputs (" << report.runs.size() << " skipped)\n";
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_fit(const FitArgs& args, std::ostream& out) {
  const Corpus corpus = load_corpus_file(args.corpus_path);
  ProjectionModel model;
  if (args.kind == "pca") {
    ProjectionOptions options;
    options.standardize = args.standardize;
    model = fit_projection(document_matrix(corpus, feature_options(args.scheme)),
                           ProjectionKind::kPca, args.dims, options);
  } else {
    std::vector<const SoundDocument*> docs;
    for (const auto& d : corpus.documents()) docs.push_back(&d);
    model = fit_tag_space(docs, args.vocab, args.dims).lsa;
  }
  emit(args.output, serialize_projection(model), out);
  return kExitOk;
}

int cmd_serve(const ServeArgs& args, std::ostream& out) {
  ServiceConfig config;
  config.max_results = args.max_results;
  config.max_documents = args.max_documents;
  config.default_seed = args.seed;
  if (!args.projection_path.empty()) config.projection = parse_projection(read_file(args.projection_path));
  ClusterService service(config);
  if (!args.corpus_path.empty()) service.replace_corpus(load_corpus_file(args.corpus_path));

  const auto colon = args.listen.rfind(':');
  if (colon == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "--listen expects host:port, got " + args.listen);
  }
  const std::string host = args.listen.substr(0, colon);
  const int port = std::stoi(args.listen.substr(colon + 1));
  HttpServer server(service);
  const int bound = server.bind(host, port);
  out << "listening on " << host << ':' << bound << " ("
      << service.corpus_snapshot()->size() << " documents)" << std::endl;
  server.serve();
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Search result clustering for sound collections"};
  app.require_subcommand(1);

  ClusterArgs cluster;
  auto* cluster_cmd = app.add_subcommand("cluster", "Cluster a document file");
  cluster_cmd->add_option("corpus", cluster.corpus_path, "Document file (JSON)")->required();
  cluster_cmd->add_option("--seed", cluster.seed, "Community detection seed")->capture_default_str();
  cluster_cmd->add_option("--k", cluster.k, "Neighbors per node (default floor(log2 N))")
      ->check(CLI::PositiveNumber);
  cluster_cmd->add_flag("--prune", cluster.prune, "Discard the lowest-confidence cluster");
  cluster_cmd->add_option("--prune-threshold", cluster.prune_threshold,
                          "Discard every cluster below this confidence");
  cluster_cmd->add_option("--scheme", cluster.scheme, "Feature source")
      ->check(CLI::IsMember(kSchemes))
      ->capture_default_str();
  cluster_cmd->add_option("--projection", cluster.projection_path, "Projection model to apply");
  cluster_cmd->add_option("--max-results", cluster.max_results, "Top-ranked documents to cluster")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cluster_cmd->add_option("--labels", cluster.n_labels, "Labels per cluster")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cluster_cmd->add_option("-o,--output", cluster.output, "Output path (default stdout)");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Run internal (CHI) or external (AMI) validation");
  eval_cmd->add_option("mode", eval.mode, "internal | external")
      ->required()
      ->check(CLI::IsMember({"internal", "external"}));
  eval_cmd->add_option("inputs", eval.inputs, "Query document files or labeled datasets")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_flag("--prune", eval.prune, "Score after discarding the lowest-confidence cluster");
  eval_cmd->add_option("--seed", eval.seed)->capture_default_str();
  eval_cmd->add_option("--dims", eval.dims, "LSA dimensions")->check(CLI::PositiveNumber)->capture_default_str();
  eval_cmd->add_option("--vocab", eval.vocab, "Tag vocabulary size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  eval_cmd->add_option("--pca-dims", eval.pca_dims, "PCA dimensions over the batch (0 = off)")
      ->capture_default_str();
  eval_cmd->add_option("--k", eval.k)->check(CLI::PositiveNumber);
  eval_cmd->add_option("--scheme", eval.scheme)->check(CLI::IsMember(kSchemes))->capture_default_str();
  eval_cmd->add_option("--max-duration", eval.max_duration, "Drop longer sounds (<= 0 disables)")
      ->capture_default_str();
  eval_cmd->add_option("-o,--output", eval.output, "Report JSON path (default stdout)");
  eval_cmd->add_option("--csv", eval.csv, "Report CSV path");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit and save a PCA or LSA projection");
  fit_cmd->add_option("corpus", fit.corpus_path)->required();
  fit_cmd->add_option("--kind", fit.kind)->required()->check(CLI::IsMember({"pca", "lsa"}));
  fit_cmd->add_option("--dims", fit.dims)->check(CLI::PositiveNumber)->capture_default_str();
  fit_cmd->add_option("--scheme", fit.scheme)->check(CLI::IsMember(kSchemes))->capture_default_str();
  fit_cmd->add_flag("--standardize", fit.standardize, "Scale PCA inputs to unit variance");
  fit_cmd->add_option("--vocab", fit.vocab)->check(CLI::PositiveNumber)->capture_default_str();
  fit_cmd->add_option("--seed", fit.seed, "Accepted for interface symmetry; fitting is deterministic")
      ->capture_default_str();
  fit_cmd->add_option("-o,--output", fit.output, "Model path (default stdout)");

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP clustering service");
  serve_cmd->add_option("--listen", serve.listen)->envname("SOUNDCLUST_LISTEN")->capture_default_str();
  serve_cmd->add_option("--corpus", serve.corpus_path)->envname("SOUNDCLUST_CORPUS");
  serve_cmd->add_option("--projection", serve.projection_path)->envname("SOUNDCLUST_PROJECTION");
  serve_cmd->add_option("--max-results", serve.max_results)
      ->envname("SOUNDCLUST_MAX_RESULTS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  serve_cmd->add_option("--max-documents", serve.max_documents)
      ->envname("SOUNDCLUST_MAX_DOCUMENTS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  serve_cmd->add_option("--seed", serve.seed)->envname("SOUNDCLUST_SEED")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (cluster_cmd->parsed()) return cmd_cluster(cluster, out);
    if (eval_cmd->parsed()) return cmd_eval(eval, out, err);
    if (fit_cmd->parsed()) return cmd_fit(fit, out);
    if (serve_cmd->parsed()) return cmd_serve(serve, out);
  } catch (const Error& e) {
    err << "error: " << error_code_name(e.code()) << ": " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace soundclust
