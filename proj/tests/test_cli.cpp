#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "soundclust/cli.hpp"
#include "soundclust/corpus.hpp"
#include "soundclust/features.hpp"
#include "soundclust/json_io.hpp"
#include "support/fixtures.hpp"

namespace soundclust {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "soundclust");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const char* base = std::getenv("SOUNDCLUST_TEST_TMP");
    dir_ = fs::path(base ? base : fs::temp_directory_path().string()) /
           ("cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write_corpus(const std::string& name, const Corpus& corpus) const {
    write_file(path(name), serialize_corpus(corpus));
    return path(name);
  }

  fs::path dir_;
};

Corpus blob_corpus(int per_blob, int noise, std::uint64_t seed, const std::string& prefix = "s") {
  auto data = testing::blobs_with_noise(per_blob, noise, 4, seed);
  return testing::make_corpus(data.points, testing::tags_for_labels(data.labels, 3, seed), prefix);
}

TEST_F(CliTest, ClusterTwoDocs) {
  Matrix v(2, 2);
  v << 0, 0, 1, 0;
  const std::string corpus = write_corpus("two.json", testing::make_corpus(v, {{"a"}, {"b"}}));
  CliRun r = run({"cluster", corpus});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  json j = json::parse(r.out);
  EXPECT_EQ(j["clusters"].size(), 1u);
  EXPECT_EQ(j["seed"], 0);
}

TEST_F(CliTest, ClusterUnreadablePath) {
  CliRun r = run({"cluster", path("missing.json")});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_NE(r.err.find("Io"), std::string::npos) << r.err;
}

TEST_F(CliTest, ClusterSameFlagsIdenticalFiles) {
  const std::string corpus = write_corpus("c.json", blob_corpus(15, 6, 3));
  ASSERT_EQ(run({"cluster", corpus, "--seed", "9", "--prune", "-o", path("a.json")}).code, kExitOk);
  ASSERT_EQ(run({"cluster", corpus, "--seed", "9", "--prune", "-o", path("b.json")}).code, kExitOk);
  EXPECT_EQ(read_file(path("a.json")), read_file(path("b.json")));
  json j = json::parse(read_file(path("a.json")));
  EXPECT_EQ(j["seed"], 9);
  EXPECT_FALSE(j["unclustered"].empty());
}

TEST_F(CliTest, ClusterOptions) {
  const std::string corpus = write_corpus("c.json", blob_corpus(10, 0, 4));
  CliRun r = run({"cluster", corpus, "--k", "3", "--max-results", "20", "--labels", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  json j = json::parse(r.out);
  EXPECT_EQ(j["graph"]["k"], 3);
  EXPECT_EQ(j["graph"]["nodes"].size(), 20u);
  CliRun bad_scheme = run({"cluster", corpus, "--scheme", "mfcc"});
  EXPECT_EQ(bad_scheme.code, kExitUsage);
  CliRun bad_k = run({"cluster", corpus, "--k", "0"});
  EXPECT_EQ(bad_k.code, kExitUsage);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"eval", "interal", path("x.json")}).code, kExitUsage);
  EXPECT_EQ(run({"cluster"}).code, kExitUsage);
  EXPECT_EQ(run({"fit", path("x.json"), "--kind", "svd"}).code, kExitUsage);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST_F(CliTest, EvalExternalOnBlobs) {
  testing::BlobSpec spec;
  auto ds = testing::make_dataset(testing::gaussian_blobs(spec), "");
  write_file(path("blobs.json"), serialize_labeled_dataset(ds));
  CliRun r = run({"eval", "external", path("blobs.json"), "-o", path("report.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  json j = json::parse(read_file(path("report.json")));
  EXPECT_EQ(j["metric"], "AMI");
  EXPECT_EQ(j["runs"][0]["id"], "blobs");
  EXPECT_GE(j["mean"].get<double>(), 0.9);
  const std::string csv = read_file(path("report.csv"));
  EXPECT_EQ(csv.rfind("metric,pruning,id,score,skipped\n", 0), 0u);
}

TEST_F(CliTest, EvalInternalPrunedVersusDefault) {
  json batch{{"queries", json::array()}};
  for (std::uint64_t s = 0; s < 4; ++s) {
    json corpus = json::parse(serialize_corpus(blob_corpus(30, 15, 300 + s, "q" + std::to_string(s) + "-")));
    corpus["id"] = "query" + std::to_string(s);
    batch["queries"].push_back(corpus);
  }
  write_file(path("batch.json"), batch.dump());
  CliRun plain = run({"eval", "internal", path("batch.json"), "-o", path("plain.json")});
  CliRun pruned = run({"eval", "internal", path("batch.json"), "--prune", "-o", path("pruned.json")});
  ASSERT_EQ(plain.code, kExitOk) << plain.err;
  ASSERT_EQ(pruned.code, kExitOk) << pruned.err;
  json a = json::parse(read_file(path("plain.json")));
  json b = json::parse(read_file(path("pruned.json")));
  EXPECT_EQ(a["runs"].size(), 4u);
  EXPECT_EQ(a["pruning"], false);
  EXPECT_EQ(b["pruning"], true);
  EXPECT_GE(b["mean"].get<double>(), a["mean"].get<double>());
}

TEST_F(CliTest, EvalInternalPerFileQueriesAndNoRunnableInputs) {
  write_corpus("rain.json", blob_corpus(10, 2, 5));
  CliRun ok = run({"eval", "internal", path("rain.json")});
  ASSERT_EQ(ok.code, kExitOk) << ok.err;
  EXPECT_EQ(json::parse(ok.out)["runs"][0]["id"], "rain");

  Matrix v(3, 1);
  v << 0, 1, 2;
  write_corpus("tiny.json", testing::make_corpus(v, {{"a"}, {"b"}, {"c"}}));
  CliRun none = run({"eval", "internal", path("tiny.json"), "--csv", path("tiny.csv")});
  EXPECT_EQ(none.code, kExitFailure);
  EXPECT_TRUE(fs::exists(path("tiny.csv")));
}

TEST_F(CliTest, FitPcaClampsAndIsDeterministic) {
  const std::string corpus = write_corpus("ten.json", blob_corpus(3, 1, 6));
  ASSERT_EQ(run({"fit", corpus, "--kind", "pca", "--dims", "100", "-o", path("m1.json")}).code, kExitOk);
  ASSERT_EQ(run({"fit", corpus, "--kind", "pca", "--dims", "100", "-o", path("m2.json")}).code, kExitOk);
  EXPECT_EQ(read_file(path("m1.json")), read_file(path("m2.json")));
  ProjectionModel m = parse_projection(read_file(path("m1.json")));
  EXPECT_LE(m.output_dim, 10u);
  EXPECT_EQ(m.kind, ProjectionKind::kPca);

  // The fitted model plugs back into cluster.
  CliRun r = run({"cluster", corpus, "--projection", path("m1.json")});
  EXPECT_EQ(r.code, kExitOk) << r.err;
}

TEST_F(CliTest, FitLsa) {
  const std::string corpus = write_corpus("tags.json", blob_corpus(5, 2, 7));
  CliRun r = run({"fit", corpus, "--kind", "lsa", "--dims", "4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  ProjectionModel m = parse_projection(r.out);
  EXPECT_EQ(m.kind, ProjectionKind::kLsa);
  EXPECT_FALSE(m.vocabulary.empty());

  Matrix v(3, 1);
  v << 0, 1, 2;
  const std::string tagless = write_corpus("tagless.json", testing::make_corpus(v, {}));
  CliRun fail = run({"fit", tagless, "--kind", "lsa"});
  EXPECT_EQ(fail.code, kExitFailure);
  EXPECT_NE(fail.err.find("EmptyVocabulary"), std::string::npos) << fail.err;
}

TEST_F(CliTest, FitTooFewSamples) {
  Matrix v(1, 2);
  v << 0, 1;
  const std::string corpus = write_corpus("one.json", testing::make_corpus(v, {{"a"}}));
  CliRun r = run({"fit", corpus, "--kind", "pca"});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_NE(r.err.find("TooFewSamples"), std::string::npos) << r.err;
}

TEST_F(CliTest, ServeBadListenAddress) {
  CliRun r = run({"serve", "--listen", "nonsense"});
  EXPECT_EQ(r.code, kExitFailure);
}

}  // namespace
}  // namespace soundclust
