#ifndef AQUASIFT_RUNNER_H_
#define AQUASIFT_RUNNER_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aquasift/backends.h"
#include "aquasift/checkpoint.h"
#include "aquasift/fusion.h"
#include "aquasift/metrics.h"
#include "aquasift/textprep.h"

namespace aquasift {

enum class RunId { kRun1Fusion, kRun2Mono, kRun3Multi, kRun4Lstm };

const char* to_string(RunId id);
RunId run_id_from_string(const std::string& s);

enum class FusionMode { kEqual, kMerit, kWeights };

const char* to_string(FusionMode mode);
FusionMode fusion_mode_from_string(const std::string& s);

struct DataConfig {
  std::filesystem::path train;       // required
  std::filesystem::path validation;  // optional; else carved from train
  std::filesystem::path test;        // optional; else carved from train
  std::size_t validation_size = 0;
  std::size_t test_size = 0;
  bool stratified = false;
};

struct FusionSettings {
  FusionMode mode = FusionMode::kEqual;
  std::map<std::string, double> weights;  // kWeights only, keyed by model id
};

struct BackendEntry {
  BackendSpec spec;
  bool inherit_seed = true;  // hyperparams.seed follows RunConfig::seed
};

struct RunConfig {
  RunId run_id = RunId::kRun4Lstm;
  DataConfig data;
  CleanOptions clean;
  std::vector<BackendEntry> backends;
  FusionSettings fusion;
  double threshold = 0.5;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "runs/out";

  // Relative paths are resolved against `base_dir`. Missing backends get
  // the run's default backend list.
  static RunConfig from_json(const nlohmann::json& j,
                             const std::filesystem::path& base_dir = {});
  static RunConfig from_file(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  // Backend spec with the run seed applied where it is inherited.
  BackendSpec effective_spec(std::size_t i) const;

  // Throws ConfigError when the backend list does not match run_id.
  void validate() const;
};

struct ModelRecord {
  std::string model_id;
  BackendId backend_id;
  std::string fingerprint;
  std::size_t parameter_count = 0;
  std::vector<double> training_log;
  std::vector<std::string> artifacts;  // relative to out_dir
};

struct RunManifest {
  RunId run_id;
  std::filesystem::path out_dir;
  std::vector<std::string> files;  // output inventory, relative to out_dir
  std::vector<ModelRecord> models;
  std::optional<std::map<std::string, double>> fusion_weights;  // normalized
  std::vector<std::string> stages;
  nlohmann::json document;  // the full manifest.json content
};

// Runs ingest -> clean -> balance (training split only) -> train -> score ->
// [fuse] -> decide -> evaluate -> persist, writing every artifact to
// config.out_dir. Failures are rethrown as StageError naming the stage;
// artifacts written before the failure are kept.
RunManifest execute(const RunConfig& config, const CheckpointResolver& resolver,
                    std::ostream* log = nullptr);

RunManifest load_manifest(const std::filesystem::path& manifest_path);

struct ComparisonRow {
  std::string run;
  std::optional<MetricsReport> metrics;  // nullopt renders as "incomplete"
  std::string problem;                   // why the row is incomplete
};

// One row per manifest; unreadable manifests or missing metrics produce an
// incomplete row rather than an error.
std::vector<ComparisonRow> compare(const std::vector<std::filesystem::path>& manifests);

// Runs x (Precision, Recall, F1-Score, Accuracy), positive-class flavor.
std::string render_comparison(const std::vector<ComparisonRow>& rows);

}  // namespace aquasift

#endif  // AQUASIFT_RUNNER_H_
