// aquasift: command-line front end for the relevance-classification pipeline.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "aquasift/corpus.h"
#include "aquasift/errors.h"
#include "aquasift/fusion.h"
#include "aquasift/runner.h"
#include "aquasift/textprep.h"

namespace fs = std::filesystem;
using namespace aquasift;

namespace {

std::vector<double> parse_weights(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double w = 0;
    try {
      w = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw ArgumentError("weight \"" + item + "\" is not a number");
    }
    out.push_back(w);
  }
  return out;
}

std::string model_id_for(const fs::path& scores_path) {
  std::string stem = scores_path.stem().string();
  if (stem.rfind("scores_", 0) == 0) stem.erase(0, 7);
  return stem.empty() ? "model" : stem;
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            const std::string& out, bool quiet) {
  RunConfig config = [&] {
    try {
      return RunConfig::from_file(config_path);
    } catch (const Error& e) {
      throw StageError("config", e.what());
    }
  }();
  if (seed) config.seed = *seed;
  if (!out.empty()) config.out_dir = out;
  const RunManifest m = execute(config, CheckpointResolver(), quiet ? nullptr : &std::cerr);
  std::cout << (config.out_dir / "manifest.json").string() << '\n';
  (void)m;
  return 0;
}

int cmd_compare(const std::vector<std::string>& paths) {
  std::vector<fs::path> manifests(paths.begin(), paths.end());
  std::cout << render_comparison(compare(manifests));
  return 0;
}

int cmd_generate(std::size_t n, double pos_frac, std::uint64_t seed, const std::string& out,
                 const std::string& ledger_path) {
  const SyntheticCorpus s = generate_synthetic(n, pos_frac, seed);
  write_corpus(s.corpus, out, format_for_path(out));
  if (!ledger_path.empty()) {
    nlohmann::json j = {{"urls", s.ledger.urls},
                        {"handles", s.ledger.handles},
                        {"emojis", s.ledger.emojis},
                        {"punctuation_runs", s.ledger.punctuation_runs}};
    std::ofstream(ledger_path) << j.dump(2) << '\n';
  }
  const ClassCounts c = count_classes(s.corpus);
  std::cerr << "wrote " << s.corpus.size() << " posts (" << c.n_positive << " relevant, "
            << c.n_negative << " irrelevant) to " << out << '\n';
  return 0;
}

int cmd_clean(const std::string& in, const std::string& out, const CleanOptions& options) {
  const Corpus corpus = ingest(in, format_for_path(in));
  const CleanedCorpus cleaned = clean_corpus(corpus, options);
  write_corpus(cleaned.corpus, out, format_for_path(out));
  std::cerr << "removed urls=" << cleaned.totals.urls << " handles=" << cleaned.totals.handles
            << " emojis=" << cleaned.totals.emojis
            << " punctuation_runs=" << cleaned.totals.punctuation_runs << '\n';
  for (const auto& id : cleaned.empty_post_ids) {
    std::cerr << "empty after cleaning: " << id << '\n';
  }
  return 0;
}

int cmd_fuse(const std::vector<std::string>& score_files, const std::string& weights_text,
             double threshold, const std::string& out, const std::string& predictions) {
  std::vector<PosteriorScores> sets;
  std::vector<std::string> ids;
  for (const auto& f : score_files) {
    std::string id = model_id_for(f);
    while (std::find(ids.begin(), ids.end(), id) != ids.end()) id += "'";
    ids.push_back(id);
    sets.push_back(read_scores(f, id));
  }
  FusionConfig config = FusionConfig::equal(ids, threshold);
  if (!weights_text.empty()) {
    const std::vector<double> w = parse_weights(weights_text);
    if (w.size() != ids.size()) {
      throw ArgumentError("got " + std::to_string(w.size()) + " weights for " +
                          std::to_string(ids.size()) + " score files");
    }
    for (std::size_t i = 0; i < w.size(); ++i) config.weights[ids[i]] = w[i];
  }
  const PosteriorScores fused = fuse(sets, config);
  write_scores(fused, out);
  if (!predictions.empty()) {
    const LabelMap labels = decide(fused, threshold);
    std::ofstream p(predictions);
    p << "post_id,label\n";
    for (const auto& [id, s] : fused.scores) p << id << ',' << labels.at(id) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aquasift: water-quality relevance classification pipeline"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Execute a run described by a config file");
  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  run->add_option("--config", config_path, "Run config (JSON)")->required();
  run->add_option("--seed", seed, "Override the run seed");
  run->add_option("--out", out_dir, "Override the output directory");
  run->add_flag("--quiet", quiet, "Suppress stage logging");

  auto* cmp = app.add_subcommand("compare", "Tabulate metrics of finished runs");
  std::vector<std::string> manifests;
  cmp->add_option("manifests", manifests, "manifest.json files")->required();

  auto* gen = app.add_subcommand("generate", "Write a synthetic labeled corpus");
  std::size_t n = 0;
  double pos_frac = 0.3;
  std::uint64_t gen_seed = 0;
  std::string gen_out, ledger;
  gen->add_option("--n", n, "Number of posts")->required();
  gen->add_option("--pos-frac", pos_frac, "Fraction of relevant posts")->required();
  gen->add_option("--seed", gen_seed, "Generator seed")->required();
  gen->add_option("--out", gen_out, "Output file (.jsonl or .csv)")->required();
  gen->add_option("--ledger", ledger, "Also write the injected-noise counts as JSON");

  auto* cln = app.add_subcommand("clean", "Clean the texts of a corpus file");
  std::string clean_in, clean_out;
  CleanOptions clean_options;
  cln->add_option("--in", clean_in, "Input corpus")->required();
  cln->add_option("--out", clean_out, "Output corpus")->required();
  cln->add_flag("--lowercase", clean_options.lowercase, "Lowercase ASCII letters");
  cln->add_option("--keep-punct", clean_options.keep_punct, "Punctuation marks to keep");

  auto* fus = app.add_subcommand("fuse", "Late-fuse per-model score files");
  std::vector<std::string> score_files;
  std::string weights, fuse_out, predictions;
  double threshold = 0.5;
  fus->add_option("--scores", score_files, "Score CSVs (post_id,score)")->required();
  fus->add_option("--weights", weights, "Comma-separated weights, one per score file");
  fus->add_option("--threshold", threshold, "Decision threshold");
  fus->add_option("--out", fuse_out, "Fused score CSV")->required();
  fus->add_option("--predictions", predictions, "Also write thresholded labels");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, seed, out_dir, quiet);
    if (*cmp) return cmd_compare(manifests);
    if (*gen) return cmd_generate(n, pos_frac, gen_seed, gen_out, ledger);
    if (*cln) return cmd_clean(clean_in, clean_out, clean_options);
    if (*fus) return cmd_fuse(score_files, weights, threshold, fuse_out, predictions);
  } catch (const StageError& e) {
    std::cerr << "aquasift: error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "aquasift: error: [" << app.get_subcommands().front()->get_name() << "] "
              << e.what() << '\n';
    return 1;
  }
  return 0;
}
