#include <filesystem>
#include <fstream>
#include <regex>
#include <set>

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "aquasift/corpus.h"
#include "aquasift/errors.h"
#include "aquasift/runner.h"

namespace aquasift {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "aquasift_runner_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), {});
}

const fs::path& corpus_file() {
  static const fs::path path = [] {
    const fs::path p = scratch("data") / "synthetic.jsonl";
    write_corpus(generate_synthetic(240, 0.3, 17).corpus, p.string(), CorpusFormat::kJsonl);
    return p;
  }();
  return path;
}

json lstm_backend(int epochs = 4) {
  return {{"backend_id", "lstm_custom"}, {"hyperparams", {{"epochs", epochs}}}};
}

json transformer_backend(const char* id, const char* checkpoint) {
  return {{"backend_id", id},
          {"checkpoint_id", checkpoint},
          {"hyperparams",
           {{"epochs", 1}, {"learning_rate", 1e-3}, {"max_sequence_length", 32}}}};
}

json base_config(const char* run_id, const fs::path& out) {
  return {{"run_id", run_id},
          {"seed", 5},
          {"out_dir", out.string()},
          {"data",
           {{"train", corpus_file().string()}, {"validation_size", 30}, {"test_size", 60}}}};
}

RunManifest run(const json& j) {
  return execute(RunConfig::from_json(j), CheckpointResolver(std::nullopt));
}

json fusion_config(const fs::path& out, json fusion) {
  json j = base_config("run1_fusion", out);
  j["backends"] = {transformer_backend("transformer_mono", "builtin:tiny-mono"),
                   transformer_backend("transformer_multi", "builtin:tiny-multi"),
                   lstm_backend()};
  j["fusion"] = std::move(fusion);
  return j;
}

TEST(RunConfig, BackendCountMustMatchRun) {
  json j = base_config("run1_fusion", scratch("cfg"));
  j["backends"] = {lstm_backend()};
  EXPECT_THROW(RunConfig::from_json(j), ConfigError);
  j = base_config("run2_mono", scratch("cfg"));
  j["backends"] = {lstm_backend()};
  EXPECT_THROW(RunConfig::from_json(j), ConfigError);
}

TEST(RunConfig, DefaultsAndRelativePaths) {
  const RunConfig c = RunConfig::from_json(
      {{"run_id", "run3_multi"}, {"data", {{"train", "x.jsonl"}, {"test_size", 4}}}},
      "/base");
  EXPECT_EQ(c.data.train, fs::path("/base/x.jsonl"));
  ASSERT_EQ(c.backends.size(), 1u);
  EXPECT_EQ(c.backends[0].spec.backend_id, BackendId::kTransformerMulti);
  EXPECT_EQ(c.backends[0].spec.checkpoint_id, CheckpointResolver::kTinyMulti);
}

TEST(RunConfig, SeedInheritedUnlessGiven) {
  json j = base_config("run4_lstm", "out");
  j["seed"] = 77;
  j["backends"] = {lstm_backend()};
  EXPECT_EQ(RunConfig::from_json(j).effective_spec(0).hyperparams.seed, 77u);
  j["backends"][0]["hyperparams"]["seed"] = 3;
  EXPECT_EQ(RunConfig::from_json(j).effective_spec(0).hyperparams.seed, 3u);
}

TEST(RunConfig, UnknownFusionModeRejected) {
  json j = fusion_config("out", {{"mode", "max"}});
  EXPECT_THROW(RunConfig::from_json(j), ConfigError);
}

TEST(Execute, LstmRunInventoryIsExact) {
  const fs::path out = scratch("run4");
  json j = base_config("run4_lstm", out);
  j["backends"] = {lstm_backend()};
  const RunManifest m = run(j);
  EXPECT_EQ(std::set<std::string>(m.files.begin(), m.files.end()),
            (std::set<std::string>{"scores_lstm.csv", "predictions.csv", "metrics.json",
                                   "manifest.json"}));
  for (const auto& f : m.files) {
    ASSERT_TRUE(fs::exists(out / f)) << f;
    EXPECT_GT(fs::file_size(out / f), 0u) << f;
  }
  for (const auto& a : m.models.at(0).artifacts) EXPECT_GT(fs::file_size(out / a), 0u) << a;
  EXPECT_EQ(m.stages, (std::vector<std::string>{"ingest", "clean", "balance", "train", "score",
                                                "decide", "evaluate", "persist"}));
  const json data = m.document.at("data");
  EXPECT_EQ(data.at("test_posts"), 60);
  EXPECT_EQ(data.at("validation_posts"), 30);
  EXPECT_GT(data.at("train_posts_balanced").get<int>(), data.at("train_posts").get<int>());
}

TEST(Execute, LstmRunIsReproducible) {
  json j = base_config("run4_lstm", scratch("rep_a"));
  j["backends"] = {lstm_backend(3)};
  const RunManifest a = run(j);
  j["out_dir"] = scratch("rep_b").string();
  const RunManifest b = run(j);
  EXPECT_EQ(slurp(a.out_dir / "predictions.csv"), slurp(b.out_dir / "predictions.csv"));
  EXPECT_EQ(slurp(a.out_dir / "scores_lstm.csv"), slurp(b.out_dir / "scores_lstm.csv"));
  EXPECT_EQ(a.models[0].fingerprint, b.models[0].fingerprint);
}

TEST(Execute, InputFileUntouched) {
  const std::string before = slurp(corpus_file());
  json j = base_config("run4_lstm", scratch("untouched"));
  j["backends"] = {lstm_backend(1)};
  run(j);
  EXPECT_EQ(slurp(corpus_file()), before);
}

TEST(Execute, MissingDataNamesIngestStage) {
  json j = base_config("run4_lstm", scratch("missing"));
  j["data"]["train"] = "/nonexistent/file.jsonl";
  try {
    run(j);
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "ingest");
  }
}

TEST(Execute, TrainingFailureKeepsEarlierArtifacts) {
  const fs::path out = scratch("diverge");
  json j = base_config("run4_lstm", out);
  j["backends"] = {{{"backend_id", "lstm_custom"},
                    {"hyperparams", {{"epochs", 2}, {"learning_rate", 1e300}}}}};
  try {
    run(j);
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "train");
  }
  EXPECT_TRUE(fs::exists(out));
  EXPECT_FALSE(fs::exists(out / "metrics.json"));
}

class FusionRun : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    manifest_ = new RunManifest(run(fusion_config(scratch("run1"), {{"mode", "merit"}})));
  }
  static void TearDownTestSuite() { delete manifest_; }
  static RunManifest* manifest_;
};

RunManifest* FusionRun::manifest_ = nullptr;

TEST_F(FusionRun, WritesPerModelAndFusedArtifacts) {
  std::set<std::string> files(manifest_->files.begin(), manifest_->files.end());
  for (const char* f : {"scores_mono.csv", "scores_multi.csv", "scores_lstm.csv",
                        "scores_fusion.csv", "predictions.csv", "metrics.json",
                        "metrics_mono.json", "metrics_multi.json", "metrics_lstm.json",
                        "manifest.json"}) {
    EXPECT_TRUE(files.count(f)) << f;
    EXPECT_GT(fs::file_size(manifest_->out_dir / f), 0u) << f;
  }
  EXPECT_EQ(manifest_->models.size(), 3u);
}

TEST_F(FusionRun, MeritWeightsMatchPerModelReports) {
  double total = 0;
  std::map<std::string, double> f1;
  for (const char* m : {"mono", "multi", "lstm"}) {
    std::ifstream in(manifest_->out_dir / ("metrics_" + std::string(m) + ".json"));
    const json j = json::parse(in);
    f1[m] = j.at("validation").at("positive_class").at("f1").get<double>();
    total += f1[m];
  }
  ASSERT_GT(total, 0.0);
  ASSERT_TRUE(manifest_->fusion_weights.has_value());
  for (const auto& [m, f] : f1) {
    EXPECT_NEAR(manifest_->fusion_weights->at(m), f / total, 1e-12) << m;
  }
}

TEST_F(FusionRun, OneHotWeightsReproduceSingleModelRun) {
  json one_hot = fusion_config(scratch("run1_onehot"),
                               {{"mode", "weights"},
                                {"weights", {{"mono", 0.0}, {"multi", 0.0}, {"lstm", 1.0}}}});
  const RunManifest fused = run(one_hot);
  json single = base_config("run4_lstm", scratch("run4_single"));
  single["backends"] = {lstm_backend()};
  const RunManifest alone = run(single);
  EXPECT_EQ(slurp(fused.out_dir / "predictions.csv"), slurp(alone.out_dir / "predictions.csv"));
}

TEST(Compare, FourRunsAndIncompleteRow) {
  std::vector<fs::path> manifests;
  for (const char* id : {"run2_mono", "run3_multi", "run4_lstm"}) {
    const fs::path out = scratch(std::string("cmp_") + id);
    json j = base_config(id, out);
    if (std::string(id) == "run2_mono") {
      j["backends"] = {transformer_backend("transformer_mono", "builtin:tiny-mono")};
    } else if (std::string(id) == "run3_multi") {
      j["backends"] = {transformer_backend("transformer_multi", "builtin:tiny-multi")};
    } else {
      j["backends"] = {lstm_backend(2)};
    }
    run(j);
    manifests.push_back(out / "manifest.json");
  }
  manifests.push_back(manifests.back());

  const auto rows = compare(manifests);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& r : rows) EXPECT_TRUE(r.metrics.has_value()) << r.run;
  const std::string table = render_comparison(rows);
  const std::string header =
      std::regex_replace(table.substr(0, table.find('\n')), std::regex(" +"), " ");
  EXPECT_EQ(header, "| Runs | Precision | Recall | F1-Score | Accuracy |");
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 6);

  EXPECT_EQ(compare({manifests[0]}).size(), 1u);

  fs::remove(manifests[2].parent_path() / "metrics.json");
  const auto partial = compare({manifests[0], manifests[2], "/nonexistent/manifest.json"});
  ASSERT_EQ(partial.size(), 3u);
  EXPECT_TRUE(partial[0].metrics.has_value());
  EXPECT_FALSE(partial[1].metrics.has_value());
  EXPECT_FALSE(partial[2].metrics.has_value());
  EXPECT_NE(render_comparison(partial).find("incomplete"), std::string::npos);
}

TEST(LoadManifest, RoundTrip) {
  const fs::path out = scratch("load");
  json j = base_config("run4_lstm", out);
  j["backends"] = {lstm_backend(1)};
  const RunManifest written = run(j);
  const RunManifest read = load_manifest(out / "manifest.json");
  EXPECT_EQ(read.run_id, RunId::kRun4Lstm);
  EXPECT_EQ(read.files, written.files);
  ASSERT_EQ(read.models.size(), 1u);
  EXPECT_EQ(read.models[0].fingerprint, written.models[0].fingerprint);
}

}  // namespace
}  // namespace aquasift
