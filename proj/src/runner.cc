#include "aquasift/runner.h"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <future>

#include "aquasift/errors.h"
#include "csv.h"

namespace aquasift {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(RunId id) {
  switch (id) {
    case RunId::kRun1Fusion:
      return "run1_fusion";
    case RunId::kRun2Mono:
      return "run2_mono";
    case RunId::kRun3Multi:
      return "run3_multi";
    case RunId::kRun4Lstm:
      return "run4_lstm";
  }
  return "run4_lstm";
}

RunId run_id_from_string(const std::string& s) {
  if (s == "run1_fusion") return RunId::kRun1Fusion;
  if (s == "run2_mono") return RunId::kRun2Mono;
  if (s == "run3_multi") return RunId::kRun3Multi;
  if (s == "run4_lstm") return RunId::kRun4Lstm;
  throw ConfigError("unknown run_id \"" + s + "\"");
}

const char* to_string(FusionMode mode) {
  switch (mode) {
    case FusionMode::kEqual:
      return "equal";
    case FusionMode::kMerit:
      return "merit";
    case FusionMode::kWeights:
      return "weights";
  }
  return "equal";
}

FusionMode fusion_mode_from_string(const std::string& s) {
  if (s == "equal") return FusionMode::kEqual;
  if (s == "merit") return FusionMode::kMerit;
  if (s == "weights") return FusionMode::kWeights;
  throw ConfigError("unknown fusion mode \"" + s + "\"");
}

namespace {

std::vector<BackendId> required_backends(RunId id) {
  switch (id) {
    case RunId::kRun1Fusion:
      return {BackendId::kTransformerMono, BackendId::kTransformerMulti,
              BackendId::kLstmCustom};
    case RunId::kRun2Mono:
      return {BackendId::kTransformerMono};
    case RunId::kRun3Multi:
      return {BackendId::kTransformerMulti};
    case RunId::kRun4Lstm:
      return {BackendId::kLstmCustom};
  }
  return {};
}

BackendSpec default_spec(BackendId id) {
  BackendSpec spec;
  spec.backend_id = id;
  spec.hyperparams = HyperParams::defaults_for(id);
  if (id == BackendId::kTransformerMono) spec.checkpoint_id = CheckpointResolver::kTinyMono;
  if (id == BackendId::kTransformerMulti) spec.checkpoint_id = CheckpointResolver::kTinyMulti;
  return spec;
}

fs::path resolve_path(const fs::path& p, const fs::path& base) {
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

}  // namespace

RunConfig RunConfig::from_json(const json& j, const fs::path& base_dir) {
  RunConfig c;
  try {
    c.run_id = run_id_from_string(j.at("run_id").get<std::string>());
    c.seed = j.value("seed", c.seed);
    c.threshold = j.value("threshold", c.threshold);
    if (j.contains("out_dir")) {
      c.out_dir = resolve_path(j.at("out_dir").get<std::string>(), base_dir);
    }
    const json& d = j.at("data");
    c.data.train = resolve_path(d.at("train").get<std::string>(), base_dir);
    c.data.validation = resolve_path(d.value("validation", std::string()), base_dir);
    c.data.test = resolve_path(d.value("test", std::string()), base_dir);
    c.data.validation_size = d.value("validation_size", c.data.validation_size);
    c.data.test_size = d.value("test_size", c.data.test_size);
    c.data.stratified = d.value("stratified", c.data.stratified);
    if (auto it = j.find("clean"); it != j.end()) {
      c.clean.lowercase = it->value("lowercase", c.clean.lowercase);
      c.clean.keep_punct = it->value("keep_punct", c.clean.keep_punct);
    }
    if (auto it = j.find("backends"); it != j.end()) {
      for (const json& b : *it) {
        BackendEntry e{backend_spec_from_json(b), true};
        if (auto h = b.find("hyperparams"); h != b.end() && h->contains("seed")) {
          e.inherit_seed = false;
        }
        c.backends.push_back(std::move(e));
      }
    } else {
      for (BackendId id : required_backends(c.run_id)) {
        c.backends.push_back({default_spec(id), true});
      }
    }
    if (auto it = j.find("fusion"); it != j.end()) {
      c.fusion.mode = fusion_mode_from_string(it->value("mode", std::string("equal")));
      if (auto w = it->find("weights"); w != it->end()) {
        c.fusion.weights = w->get<std::map<std::string, double>>();
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad run config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig RunConfig::from_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j, path.parent_path());
}

json RunConfig::to_json() const {
  json backs = json::array();
  for (std::size_t i = 0; i < backends.size(); ++i) {
    backs.push_back(aquasift::to_json(effective_spec(i)));
  }
  json j = {{"run_id", to_string(run_id)},
            {"seed", seed},
            {"threshold", threshold},
            {"out_dir", out_dir.string()},
            {"data",
             {{"train", data.train.string()},
              {"validation", data.validation.string()},
              {"test", data.test.string()},
              {"validation_size", data.validation_size},
              {"test_size", data.test_size},
              {"stratified", data.stratified}}},
            {"clean", {{"lowercase", clean.lowercase}, {"keep_punct", clean.keep_punct}}},
            {"backends", backs}};
  if (run_id == RunId::kRun1Fusion) {
    j["fusion"] = {{"mode", to_string(fusion.mode)}, {"weights", fusion.weights}};
  }
  return j;
}

BackendSpec RunConfig::effective_spec(std::size_t i) const {
  BackendSpec spec = backends.at(i).spec;
  if (backends[i].inherit_seed) spec.hyperparams.seed = seed;
  return spec;
}

void RunConfig::validate() const {
  const std::vector<BackendId> need = required_backends(run_id);
  if (backends.size() != need.size()) {
    throw ConfigError(std::string(to_string(run_id)) + " needs " +
                      std::to_string(need.size()) + " backend(s), got " +
                      std::to_string(backends.size()));
  }
  for (BackendId id : need) {
    std::size_t n = 0;
    for (const auto& b : backends) n += b.spec.backend_id == id ? 1 : 0;
    if (n != 1) {
      throw ConfigError(std::string(to_string(run_id)) + " needs exactly one " +
                        to_string(id) + " backend");
    }
  }
  for (const auto& b : backends) {
    try {
      b.spec.validate();
    } catch (const ArgumentError& e) {
      throw ConfigError(e.what());
    }
  }
  if (data.train.empty()) throw ConfigError("data.train is required");
  if (data.test.empty() && data.test_size == 0) {
    throw ConfigError("give data.test or a positive data.test_size");
  }
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ConfigError("threshold must lie in (0, 1)");
  }
  if (run_id == RunId::kRun1Fusion) {
    if (fusion.mode == FusionMode::kMerit && data.validation.empty() &&
        data.validation_size == 0) {
      throw ConfigError("merit fusion needs a validation split");
    }
    if (fusion.mode == FusionMode::kWeights) {
      FusionConfig fc{fusion.weights, threshold};
      fc.validate();
      for (const auto& b : backends) {
        if (!fusion.weights.count(model_id(b.spec.backend_id))) {
          throw ConfigError(std::string("fusion.weights lacks \"") +
                            model_id(b.spec.backend_id) + "\"");
        }
      }
      if (fusion.weights.size() != backends.size()) {
        throw ConfigError("fusion.weights names a model that is not in the run");
      }
    }
  }
  if (out_dir.empty()) throw ConfigError("out_dir must not be empty");
}

namespace {

class Pipeline {
 public:
  Pipeline(const RunConfig& config, const CheckpointResolver& resolver, std::ostream* log)
      : config_(config), resolver_(resolver), log_(log) {}

  RunManifest run();

 private:
  using Clock = std::chrono::steady_clock;

  template <typename F>
  auto stage(const std::string& name, F&& body) {
    const auto start = Clock::now();
    if (log_) *log_ << "[" << name << "] start\n";
    manifest_.stages.push_back(name);
    try {
      if constexpr (std::is_void_v<decltype(body())>) {
        body();
        finish(name, start);
      } else {
        auto r = body();
        finish(name, start);
        return r;
      }
    } catch (const StageError&) {
      throw;
    } catch (const std::exception& e) {
      throw StageError(name, e.what());
    }
  }

  void finish(const std::string& name, Clock::time_point start) {
    const double s = std::chrono::duration<double>(Clock::now() - start).count();
    timing_[name] = s;
    if (log_) *log_ << "[" << name << "] done in " << s << "s\n";
  }

  // Records an output file in the inventory; paths are relative to out_dir.
  void record(const std::string& rel) { manifest_.files.push_back(rel); }
  fs::path path(const std::string& rel) const { return config_.out_dir / rel; }

  void write_json(const std::string& rel, const json& j, bool inventory = true) {
    std::ofstream out(path(rel));
    out << j.dump(2) << '\n';
    if (!out) throw Error("failed writing " + path(rel).string());
    if (inventory) record(rel);
  }

  const RunConfig& config_;
  const CheckpointResolver& resolver_;
  std::ostream* log_;
  RunManifest manifest_;
  std::map<std::string, double> timing_;
};

RunManifest Pipeline::run() {
  const auto started = Clock::now();
  manifest_.run_id = config_.run_id;
  manifest_.out_dir = config_.out_dir;
  config_.validate();
  fs::create_directories(config_.out_dir);

  Corpus train, validation, test;
  bool has_validation = false;
  stage("ingest", [&] {
    const Corpus all = ingest(config_.data.train.string(),
                              format_for_path(config_.data.train.string()));
    all.require_labeled();
    Corpus rest = all.with_role(CorpusRole::kTrain);
    if (!config_.data.test.empty()) {
      test = ingest(config_.data.test.string(), format_for_path(config_.data.test.string()),
                    CorpusRole::kTest);
    } else {
      SplitResult s = split(rest, config_.data.test_size, config_.seed, config_.data.stratified);
      rest = s.train;
      test = s.validation.with_role(CorpusRole::kTest);
    }
    if (!config_.data.validation.empty()) {
      validation = ingest(config_.data.validation.string(),
                          format_for_path(config_.data.validation.string()),
                          CorpusRole::kValidation);
      has_validation = true;
    } else if (config_.data.validation_size > 0) {
      SplitResult s = split(rest, config_.data.validation_size, config_.seed + 1,
                            config_.data.stratified);
      rest = s.train;
      validation = s.validation;
      has_validation = true;
    }
    train = rest;
  });

  std::vector<std::string> empty_after_cleaning;
  stage("clean", [&] {
    auto run_clean = [&](Corpus& c) {
      CleanedCorpus cleaned = clean_corpus(c, config_.clean);
      for (auto& id : cleaned.empty_post_ids) empty_after_cleaning.push_back(id);
      c = std::move(cleaned.corpus);
    };
    run_clean(train);
    if (has_validation) run_clean(validation);
    run_clean(test);
    if (log_ && !empty_after_cleaning.empty()) {
      *log_ << "[clean] " << empty_after_cleaning.size() << " post(s) empty after cleaning\n";
    }
  });

  const std::size_t train_before = train.size();
  stage("balance", [&] { train = upsample(train, config_.seed); });

  std::vector<TrainedModel> models(config_.backends.size());
  stage("train", [&] {
    std::vector<std::future<TrainedModel>> jobs;
    for (std::size_t i = 0; i < config_.backends.size(); ++i) {
      jobs.push_back(std::async(std::launch::async, [this, i, &train] {
        const BackendSpec spec = config_.effective_spec(i);
        return aquasift::train(build(spec, resolver_), train);
      }));
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) models[i] = jobs[i].get();
  });

  std::vector<PosteriorScores> test_scores, validation_scores;
  std::map<std::string, MetricsReport> validation_reports;
  stage("score", [&] {
    for (const auto& m : models) {
      test_scores.push_back(predict_proba(m, test));
      if (has_validation) validation_scores.push_back(predict_proba(m, validation));
      const std::string file = std::string("scores_") + model_id(m.backend_id) + ".csv";
      write_scores(test_scores.back(), path(file).string());
      record(file);
    }
    if (has_validation) {
      const LabelMap gold = gold_labels(validation);
      for (const auto& v : validation_scores) {
        validation_reports[v.model_id] = report(confusion(decide(v, config_.threshold), gold));
      }
    }
  });

  const bool labeled_test = test.all_labeled() && !test.empty();

  PosteriorScores final_scores = test_scores.front();
  if (config_.run_id == RunId::kRun1Fusion) {
    stage("fuse", [&] {
      FusionConfig fc;
      std::vector<std::string> ids;
      for (const auto& s : test_scores) ids.push_back(s.model_id);
      switch (config_.fusion.mode) {
        case FusionMode::kEqual:
          fc = FusionConfig::equal(ids);
          break;
        case FusionMode::kMerit:
          fc = merit_weights(validation_reports);
          break;
        case FusionMode::kWeights:
          fc.weights = config_.fusion.weights;
          break;
      }
      fc.threshold = config_.threshold;
      manifest_.fusion_weights = fc.normalized_weights();
      final_scores = fuse(test_scores, fc);
      write_scores(final_scores, path("scores_fusion.csv").string());
      record("scores_fusion.csv");
    });
  }

  stage("decide", [&] {
    const LabelMap labels = decide(final_scores, config_.threshold);
    std::ofstream out(path("predictions.csv"));
    out << "post_id,label\n";
    // Prediction rows follow the test corpus order.
    for (const auto& [id, s] : final_scores.scores) {
      out << csv::escape(id) << ',' << labels.at(id) << '\n';
    }
    if (!out) throw Error("failed writing predictions.csv");
    record("predictions.csv");
  });

  json metrics_doc;
  stage("evaluate", [&] {
    if (!labeled_test) {
      if (log_) *log_ << "[evaluate] test split is unlabeled; skipping metrics\n";
      return;
    }
    const LabelMap gold = gold_labels(test);
    const MetricsReport r = report(confusion(decide(final_scores, config_.threshold), gold));
    metrics_doc = to_json(r);
    metrics_doc["split"] = "test";
    metrics_doc["run_id"] = to_string(config_.run_id);
    metrics_doc["model_id"] = final_scores.model_id;
    write_json("metrics.json", metrics_doc);
    if (log_) *log_ << render_table(r, to_string(config_.run_id));
    if (config_.run_id == RunId::kRun1Fusion) {
      for (const auto& s : test_scores) {
        json per = {{"model_id", s.model_id},
                    {"test", to_json(report(confusion(decide(s, config_.threshold), gold)))}};
        if (validation_reports.count(s.model_id)) {
          per["validation"] = to_json(validation_reports.at(s.model_id));
        } else {
          per["validation"] = nullptr;
        }
        write_json("metrics_" + s.model_id + ".json", per);
      }
    }
  });

  stage("persist", [&] {
    for (const auto& m : models) {
      ModelRecord rec;
      rec.model_id = model_id(m.backend_id);
      rec.backend_id = m.backend_id;
      rec.fingerprint = m.fingerprint;
      rec.parameter_count = m.model->parameter_count();
      rec.training_log = m.training_log.epoch_loss;
      const fs::path dir = config_.out_dir / "models" / rec.model_id;
      for (const auto& p : m.model->save(dir)) {
        rec.artifacts.push_back(fs::relative(p, config_.out_dir).generic_string());
      }
      manifest_.models.push_back(std::move(rec));
    }
    record("manifest.json");

    json models_json = json::array();
    for (const auto& m : manifest_.models) {
      models_json.push_back({{"model_id", m.model_id},
                             {"backend_id", to_string(m.backend_id)},
                             {"fingerprint", m.fingerprint},
                             {"parameter_count", m.parameter_count},
                             {"training_log", m.training_log},
                             {"artifacts", m.artifacts}});
    }
    json doc = {{"run_id", to_string(config_.run_id)},
                {"config", config_.to_json()},
                {"stages", manifest_.stages},
                {"models", models_json},
                {"data",
                 {{"train_posts", train_before},
                  {"train_posts_balanced", train.size()},
                  {"validation_posts", has_validation ? validation.size() : 0},
                  {"test_posts", test.size()},
                  {"empty_after_cleaning", empty_after_cleaning}}},
                {"files", manifest_.files}};
    if (manifest_.fusion_weights) {
      doc["fusion"] = {{"mode", to_string(config_.fusion.mode)},
                       {"weights", *manifest_.fusion_weights},
                       {"threshold", config_.threshold}};
    }
    timing_["total"] = std::chrono::duration<double>(Clock::now() - started).count();
    doc["timing_seconds"] = timing_;
    manifest_.document = doc;
    write_json("manifest.json", doc, false);
  });
  return manifest_;
}

}  // namespace

RunManifest execute(const RunConfig& config, const CheckpointResolver& resolver,
                    std::ostream* log) {
  return Pipeline(config, resolver, log).run();
}

RunManifest load_manifest(const fs::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw ArgumentError("cannot open manifest " + manifest_path.string());
  RunManifest m;
  try {
    m.document = json::parse(in);
    const json& d = m.document;
    m.run_id = run_id_from_string(d.at("run_id").get<std::string>());
    m.out_dir = manifest_path.parent_path();
    m.files = d.at("files").get<std::vector<std::string>>();
    m.stages = d.value("stages", std::vector<std::string>{});
    for (const json& mj : d.value("models", json::array())) {
      ModelRecord r;
      r.model_id = mj.at("model_id").get<std::string>();
      r.backend_id = backend_id_from_string(mj.at("backend_id").get<std::string>());
      r.fingerprint = mj.at("fingerprint").get<std::string>();
      r.parameter_count = mj.value("parameter_count", std::size_t{0});
      r.training_log = mj.value("training_log", std::vector<double>{});
      r.artifacts = mj.value("artifacts", std::vector<std::string>{});
      m.models.push_back(std::move(r));
    }
    if (auto f = d.find("fusion"); f != d.end()) {
      m.fusion_weights = f->at("weights").get<std::map<std::string, double>>();
    }
  } catch (const json::exception& e) {
    throw ArgumentError("malformed manifest " + manifest_path.string() + ": " + e.what());
  }
  return m;
}

std::vector<ComparisonRow> compare(const std::vector<fs::path>& manifests) {
  if (manifests.empty()) throw ArgumentError("compare needs at least one manifest");
  std::vector<ComparisonRow> rows;
  for (const auto& path : manifests) {
    ComparisonRow row;
    row.run = path.parent_path().filename().string();
    try {
      const RunManifest m = load_manifest(path);
      row.run = to_string(m.run_id);
      const fs::path metrics = m.out_dir / "metrics.json";
      std::ifstream in(metrics);
      if (!in) {
        row.problem = "no metrics.json";
      } else {
        row.metrics = metrics_report_from_json(json::parse(in));
      }
    } catch (const std::exception& e) {
      row.problem = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string render_comparison(const std::vector<ComparisonRow>& rows) {
  std::size_t width = 4;
  for (const auto& r : rows) width = std::max(width, r.run.size());
  const int w = static_cast<int>(width);
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "| %-*s | %-9s | %-9s | %-9s | %-9s |\n", w, "Runs",
                "Precision", "Recall", "F1-Score", "Accuracy");
  out += buf;
  out += "|" + std::string(width + 2, '-') + "|-----------|-----------|-----------|-----------|\n";
  for (const auto& r : rows) {
    if (r.metrics) {
      std::snprintf(buf, sizeof buf, "| %-*s | %-9.3f | %-9.3f | %-9.3f | %-9.3f |\n", w,
                    r.run.c_str(), r.metrics->positive_class.precision,
                    r.metrics->positive_class.recall, r.metrics->positive_class.f1,
                    r.metrics->accuracy);
    } else {
      std::snprintf(buf, sizeof buf, "| %-*s | %-9s | %-9s | %-9s | %-9s |\n", w,
                    r.run.c_str(), "incomplete", "", "", "");
    }
    out += buf;
  }
  return out;
}

}  // namespace aquasift
