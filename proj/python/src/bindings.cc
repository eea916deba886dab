#include <optional>
#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <nlohmann/json.hpp>

#include "aquasift/corpus.h"
#include "aquasift/errors.h"
#include "aquasift/fusion.h"
#include "aquasift/metrics.h"
#include "aquasift/runner.h"
#include "aquasift/textprep.h"

namespace py = pybind11;
using namespace aquasift;

namespace {

using ScorePairs = std::vector<std::pair<std::string, double>>;

py::dict counts_dict(const RemovalCounts& c) {
  py::dict d;
  d["urls"] = c.urls;
  d["handles"] = c.handles;
  d["emojis"] = c.emojis;
  d["punctuation_runs"] = c.punctuation_runs;
  return d;
}

py::dict post_dict(const SocialPost& p) {
  py::dict d;
  d["post_id"] = p.post_id;
  d["text"] = p.text;
  if (p.created_at) d["created_at"] = *p.created_at;
  if (p.author_handle) d["author_handle"] = *p.author_handle;
  if (p.image_ref) d["image_ref"] = *p.image_ref;
  if (p.label) d["label"] = *p.label;
  return d;
}

std::optional<std::string> optional_str(const py::dict& d, const char* key) {
  if (!d.contains(key) || d[key].is_none()) return std::nullopt;
  return d[key].cast<std::string>();
}

Corpus to_corpus(const py::list& posts, CorpusRole role) {
  std::vector<SocialPost> out;
  for (const auto& item : posts) {
    const py::dict d = item.cast<py::dict>();
    SocialPost p;
    p.post_id = d["post_id"].cast<std::string>();
    p.text = d["text"].cast<std::string>();
    p.created_at = optional_str(d, "created_at");
    p.author_handle = optional_str(d, "author_handle");
    p.image_ref = optional_str(d, "image_ref");
    if (d.contains("label") && !d["label"].is_none()) p.label = d["label"].cast<Label>();
    out.push_back(std::move(p));
  }
  return Corpus(std::move(out), role);
}

py::list posts_list(const Corpus& c) {
  py::list out;
  for (const auto& p : c.posts()) out.append(post_dict(p));
  return out;
}

py::object parse_json(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::dict report_dict(const MetricsReport& r) { return parse_json(to_json(r)); }

}  // namespace

PYBIND11_MODULE(_aquasift, m) {
  m.doc() = "Water-quality relevance classification pipeline";

  static py::exception<Error> base(m, "AquasiftError");
  static py::exception<ArgumentError> argument(m, "ArgumentError", base.ptr());
  static py::exception<ConfigError> config(m, "ConfigError", base.ptr());
  static py::exception<AlignmentError> alignment(m, "AlignmentError", base.ptr());
  static py::exception<BalancingError> balancing(m, "BalancingError", base.ptr());
  static py::exception<StageError> stage(m, "StageError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ArgumentError& e) {
      py::set_error(argument, e.what());
    } catch (const ConfigError& e) {
      py::set_error(config, e.what());
    } catch (const AlignmentError& e) {
      py::set_error(alignment, e.what());
    } catch (const BalancingError& e) {
      py::set_error(balancing, e.what());
    } catch (const StageError& e) {
      py::set_error(stage, e.what());
    } catch (const Error& e) {
      py::set_error(base, e.what());
    }
  });

  m.def(
      "clean",
      [](const std::string& text, bool lowercase, const std::string& keep_punct) {
        const CleanText c = clean(text, CleanOptions{lowercase, keep_punct});
        return py::make_tuple(c.text, counts_dict(c.removed));
      },
      py::arg("text"), py::arg("lowercase") = false, py::arg("keep_punct") = ".,!?'-",
      "Cleaned text and per-category removal counts.");

  m.def(
      "generate_synthetic",
      [](std::size_t n, double positive_fraction, std::uint64_t seed) {
        const SyntheticCorpus s = generate_synthetic(n, positive_fraction, seed);
        py::dict ledger;
        ledger["urls"] = s.ledger.urls;
        ledger["handles"] = s.ledger.handles;
        ledger["emojis"] = s.ledger.emojis;
        ledger["punctuation_runs"] = s.ledger.punctuation_runs;
        return py::make_tuple(posts_list(s.corpus), ledger);
      },
      py::arg("n_posts"), py::arg("positive_fraction"), py::arg("seed"));

  m.def(
      "count_classes",
      [](const py::list& posts) {
        const ClassCounts c = count_classes(to_corpus(posts, CorpusRole::kTest));
        return py::make_tuple(c.n_positive, c.n_negative);
      },
      py::arg("posts"));

  m.def(
      "upsample",
      [](const py::list& posts, std::uint64_t seed) {
        return posts_list(upsample(to_corpus(posts, CorpusRole::kTrain), seed));
      },
      py::arg("posts"), py::arg("seed"));

  m.def(
      "split",
      [](const py::list& posts, std::size_t validation_size, std::uint64_t seed,
         bool stratified) {
        const SplitResult r =
            split(to_corpus(posts, CorpusRole::kTrain), validation_size, seed, stratified);
        return py::make_tuple(posts_list(r.train), posts_list(r.validation));
      },
      py::arg("posts"), py::arg("validation_size"), py::arg("seed"),
      py::arg("stratified") = false);

  m.def(
      "fuse",
      [](const std::map<std::string, ScorePairs>& score_sets,
         std::optional<std::map<std::string, double>> weights, double threshold) {
        std::vector<PosteriorScores> sets;
        std::vector<std::string> ids;
        for (const auto& [model, pairs] : score_sets) {
          sets.push_back({model, pairs});
          ids.push_back(model);
        }
        FusionConfig c = FusionConfig::equal(ids, threshold);
        if (weights) c.weights = *weights;
        return fuse(sets, c).scores;
      },
      py::arg("score_sets"), py::arg("weights") = py::none(), py::arg("threshold") = 0.5,
      "Fuse {model_id: [(post_id, score), ...]}; order follows the first model by name.");

  m.def(
      "merit_weights",
      [](const std::map<std::string, double>& validation_f1) {
        std::map<std::string, MetricsReport> reports;
        for (const auto& [model, f1] : validation_f1) reports[model].positive_class.f1 = f1;
        return merit_weights(reports).normalized_weights();
      },
      py::arg("validation_f1"));

  m.def(
      "decide",
      [](const ScorePairs& scores, double threshold) {
        return decide(PosteriorScores{"scores", scores}, threshold);
      },
      py::arg("scores"), py::arg("threshold") = 0.5);

  m.def("f1_score", &f1_score, py::arg("precision"), py::arg("recall"));

  m.def(
      "confusion",
      [](const LabelMap& predicted, const LabelMap& gold) {
        const ConfusionMatrix c = confusion(predicted, gold);
        return py::make_tuple(c.tp, c.fp, c.fn, c.tn);
      },
      py::arg("predicted"), py::arg("gold"), "(tp, fp, fn, tn)");

  m.def(
      "report",
      [](std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn) {
        return report_dict(report({tp, fp, fn, tn}));
      },
      py::arg("tp"), py::arg("fp"), py::arg("fn"), py::arg("tn"));

  m.def(
      "run",
      [](const std::filesystem::path& config_path, std::optional<std::uint64_t> seed,
         std::optional<std::filesystem::path> out_dir) {
        RunConfig c = RunConfig::from_file(config_path);
        if (seed) c.seed = *seed;
        if (out_dir) c.out_dir = *out_dir;
        RunManifest manifest;
        {
          py::gil_scoped_release release;
          manifest = execute(c, CheckpointResolver());
        }
        return parse_json(manifest.document);
      },
      py::arg("config"), py::arg("seed") = py::none(), py::arg("out_dir") = py::none(),
      "Execute a run config; returns the manifest.");

  m.def(
      "compare",
      [](const std::vector<std::filesystem::path>& manifests) {
        return render_comparison(compare(manifests));
      },
      py::arg("manifests"));
}
