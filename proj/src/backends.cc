#include "aquasift/backends.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "aquasift/errors.h"
#include "aquasift/nn/adam.h"
#include "aquasift/nn/serialize.h"
#include "aquasift/random.h"

namespace aquasift {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(BackendId id) {
  switch (id) {
    case BackendId::kTransformerMono:
      return "transformer_mono";
    case BackendId::kTransformerMulti:
      return "transformer_multi";
    case BackendId::kLstmCustom:
      return "lstm_custom";
  }
  return "lstm_custom";
}

BackendId backend_id_from_string(const std::string& s) {
  if (s == "transformer_mono") return BackendId::kTransformerMono;
  if (s == "transformer_multi") return BackendId::kTransformerMulti;
  if (s == "lstm_custom") return BackendId::kLstmCustom;
  throw ArgumentError("unknown backend_id \"" + s + "\"");
}

const char* model_id(BackendId id) {
  switch (id) {
    case BackendId::kTransformerMono:
      return "mono";
    case BackendId::kTransformerMulti:
      return "multi";
    case BackendId::kLstmCustom:
      return "lstm";
  }
  return "lstm";
}

BackendId backend_id_from_model_id(const std::string& s) {
  if (s == "mono") return BackendId::kTransformerMono;
  if (s == "multi") return BackendId::kTransformerMulti;
  if (s == "lstm") return BackendId::kLstmCustom;
  throw ArgumentError("unknown model id \"" + s + "\"");
}

bool is_transformer(BackendId id) { return id != BackendId::kLstmCustom; }

HyperParams HyperParams::defaults_for(BackendId id) {
  HyperParams hp;
  if (is_transformer(id)) {
    hp.learning_rate = 2e-5;
    hp.epochs = 3;
    hp.batch_size = 16;
  }
  return hp;
}

void HyperParams::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ArgumentError("learning_rate must be positive");
  }
  if (epochs == 0 || batch_size == 0 || max_sequence_length == 0 ||
      lstm_units == 0 || embedding_dim == 0 || vocab_size == 0) {
    throw ArgumentError(
        "epochs, batch_size, max_sequence_length, lstm_units, embedding_dim "
        "and vocab_size must be positive");
  }
}

void BackendSpec::validate() const {
  if (is_transformer(backend_id) && checkpoint_id.empty()) {
    throw ArgumentError(std::string(to_string(backend_id)) +
                        " requires a non-empty checkpoint_id");
  }
  if (!is_transformer(backend_id) && !checkpoint_id.empty()) {
    throw ArgumentError("lstm_custom takes no checkpoint_id");
  }
  hyperparams.validate();
}

json to_json(const BackendSpec& spec) {
  const HyperParams& hp = spec.hyperparams;
  json h = {{"learning_rate", hp.learning_rate},
            {"epochs", hp.epochs},
            {"batch_size", hp.batch_size},
            {"max_sequence_length", hp.max_sequence_length},
            {"seed", hp.seed}};
  if (is_transformer(spec.backend_id)) {
    h["freeze_encoder"] = hp.freeze_encoder;
  } else {
    h["lstm_units"] = hp.lstm_units;
    h["embedding_dim"] = hp.embedding_dim;
    h["vocab_size"] = hp.vocab_size;
  }
  return {{"backend_id", to_string(spec.backend_id)},
          {"checkpoint_id", spec.checkpoint_id},
          {"hyperparams", h}};
}

BackendSpec backend_spec_from_json(const json& j) {
  BackendSpec spec;
  try {
    spec.backend_id = backend_id_from_string(j.at("backend_id").get<std::string>());
    spec.checkpoint_id = j.value("checkpoint_id", std::string());
    HyperParams& hp = spec.hyperparams;
    hp = HyperParams::defaults_for(spec.backend_id);
    if (auto it = j.find("hyperparams"); it != j.end()) {
      const json& h = *it;
      hp.learning_rate = h.value("learning_rate", hp.learning_rate);
      hp.epochs = h.value("epochs", hp.epochs);
      hp.batch_size = h.value("batch_size", hp.batch_size);
      hp.max_sequence_length = h.value("max_sequence_length", hp.max_sequence_length);
      hp.seed = h.value("seed", hp.seed);
      hp.lstm_units = h.value("lstm_units", hp.lstm_units);
      hp.embedding_dim = h.value("embedding_dim", hp.embedding_dim);
      hp.vocab_size = h.value("vocab_size", hp.vocab_size);
      hp.freeze_encoder = h.value("freeze_encoder", hp.freeze_encoder);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad backend spec: ") + e.what());
  }
  return spec;
}

std::string Classifier::fingerprint() const {
  Fnv1a h;
  h.update(to_json(spec_).dump());
  hash_extra(h);
  nn::hash_parameters(params_, h);
  return h.hex();
}

double Classifier::score(const std::string& text) const {
  const std::vector<int> ids = encode(text);
  nn::Tape tape;
  const double z = tape.value(forward(tape, ids))(0, 0);
  return nn::sigmoid(z);
}

TrainingLog Classifier::train(const Corpus& corpus) {
  if (corpus.empty()) throw ArgumentError("cannot train on an empty corpus");
  corpus.require_labeled();
  prepare(corpus);

  std::vector<std::vector<int>> encoded;
  encoded.reserve(corpus.size());
  for (const auto& p : corpus.posts()) encoded.push_back(encode(p.text));

  const HyperParams& hp = spec_.hyperparams;
  nn::Adam adam(params_, {.learning_rate = hp.learning_rate});
  params_.zero_grad();
  Rng rng(hp.seed ^ 0x9E3779B97F4A7C15ULL);
  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  log_.epoch_loss.clear();
  for (std::size_t epoch = 1; epoch <= hp.epochs; ++epoch) {
    rng.shuffle(order);
    double total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += hp.batch_size) {
      const std::size_t end = std::min(order.size(), start + hp.batch_size);
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t i = order[k];
        nn::Tape tape;
        auto loss = tape.bce_with_logits(forward(tape, encoded[i]),
                                         static_cast<double>(*corpus[i].label));
        const double l = tape.value(loss)(0, 0);
        if (!std::isfinite(l)) {
          throw DivergenceError(epoch, "non-finite loss on post \"" +
                                           corpus[i].post_id + "\"");
        }
        total += l;
        tape.backward(loss);
      }
      adam.step(1.0 / static_cast<double>(end - start));
    }
    const double mean = total / static_cast<double>(corpus.size());
    if (!std::isfinite(mean)) throw DivergenceError(epoch, "non-finite mean loss");
    log_.epoch_loss.push_back(mean);
  }
  trained_ = true;
  return log_;
}

double Classifier::mean_loss(const Corpus& corpus) const {
  if (corpus.empty()) throw ArgumentError("cannot evaluate loss on an empty corpus");
  corpus.require_labeled();
  double total = 0.0;
  for (const auto& p : corpus.posts()) {
    nn::Tape tape;
    const std::vector<int> ids = encode(p.text);
    total += tape.value(tape.bce_with_logits(forward(tape, ids), *p.label))(0, 0);
  }
  return total / static_cast<double>(corpus.size());
}

PosteriorScores Classifier::predict_proba(const Corpus& corpus) const {
  if (!trained_) {
    throw StateError(std::string(to_string(spec_.backend_id)) +
                     " model has not been trained");
  }
  PosteriorScores out{model_id(spec_.backend_id), {}};
  out.scores.reserve(corpus.size());
  for (const auto& p : corpus.posts()) {
    const double s = score(p.text);
    if (!std::isfinite(s)) {
      throw StateError("non-finite score for post \"" + p.post_id + "\"");
    }
    out.scores.emplace_back(p.post_id, s);
  }
  return out;
}

std::vector<fs::path> Classifier::save(const fs::path& dir) const {
  fs::create_directories(dir);
  std::vector<fs::path> written;
  {
    std::ofstream out(dir / "weights.bin", std::ios::binary);
    nn::write_parameters(params_, out);
    if (!out) throw Error("failed writing " + (dir / "weights.bin").string());
    written.push_back(dir / "weights.bin");
  }
  {
    json j = to_json(spec_);
    j["fingerprint"] = fingerprint();
    j["parameter_count"] = parameter_count();
    std::ofstream out(dir / "spec.json");
    out << j.dump(2) << '\n';
    written.push_back(dir / "spec.json");
  }
  {
    std::ofstream out(dir / "training_log.csv");
    out << "epoch,loss\n";
    char buf[64];
    for (std::size_t e = 0; e < log_.epoch_loss.size(); ++e) {
      std::snprintf(buf, sizeof buf, "%zu,%.10g\n", e + 1, log_.epoch_loss[e]);
      out << buf;
    }
    written.push_back(dir / "training_log.csv");
  }
  save_extra(dir, written);
  return written;
}

std::unique_ptr<Classifier> build(const BackendSpec& spec,
                                  const CheckpointResolver& resolver) {
  spec.validate();
  if (!is_transformer(spec.backend_id)) return std::make_unique<LstmClassifier>(spec);
  return std::make_unique<TransformerClassifier>(spec, resolver.resolve(spec.checkpoint_id));
}

TrainedModel train(std::unique_ptr<Classifier> model, const Corpus& train_corpus) {
  if (!model) throw ArgumentError("train() needs a model");
  TrainingLog log = model->train(train_corpus);
  TrainedModel out{model->spec().backend_id, model->fingerprint(), std::move(log), nullptr};
  out.model = std::move(model);
  return out;
}

PosteriorScores predict_proba(const TrainedModel& model, const Corpus& corpus) {
  if (!model.model) throw StateError("trained model handle is empty");
  return model.model->predict_proba(corpus);
}

}  // namespace aquasift
