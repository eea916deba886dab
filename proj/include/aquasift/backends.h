#ifndef AQUASIFT_BACKENDS_H_
#define AQUASIFT_BACKENDS_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "aquasift/checkpoint.h"
#include "aquasift/corpus.h"
#include "aquasift/hash.h"
#include "aquasift/nn/tape.h"
#include "aquasift/scores.h"

namespace aquasift {

enum class BackendId { kTransformerMono, kTransformerMulti, kLstmCustom };

const char* to_string(BackendId id);
BackendId backend_id_from_string(const std::string& s);
// Short name used in file names and fusion weights: mono, multi, lstm.
const char* model_id(BackendId id);
BackendId backend_id_from_model_id(const std::string& s);
bool is_transformer(BackendId id);

struct HyperParams {
  double learning_rate = 1e-3;
  std::size_t epochs = 10;
  std::size_t batch_size = 32;
  std::size_t max_sequence_length = 128;
  std::uint64_t seed = 0;
  // lstm_custom only
  std::size_t lstm_units = 32;
  std::size_t embedding_dim = 32;
  std::size_t vocab_size = 5000;
  // transformer backends only: train the head alone, keep the encoder fixed
  bool freeze_encoder = false;

  static HyperParams defaults_for(BackendId id);
  void validate() const;
};

struct BackendSpec {
  BackendId backend_id = BackendId::kLstmCustom;
  std::string checkpoint_id;  // required for transformers, empty for lstm_custom
  HyperParams hyperparams = HyperParams::defaults_for(BackendId::kLstmCustom);

  // Throws ArgumentError if the checkpoint rule or a hyperparameter is violated.
  void validate() const;
};

nlohmann::json to_json(const BackendSpec& spec);
// Missing hyperparameters fall back to the backend's defaults.
BackendSpec backend_spec_from_json(const nlohmann::json& j);

struct TrainingLog {
  std::vector<double> epoch_loss;  // mean BCE per epoch, finite
};

// A binary text classifier with a single-logit sigmoid head trained on
// binary cross-entropy with Adam. Training mutates the model and must not
// overlap with any other call; predict_proba and mean_loss are read-only and
// may run concurrently once training is done.
class Classifier {
 public:
  virtual ~Classifier() = default;

  const BackendSpec& spec() const { return spec_; }
  std::size_t parameter_count() const { return params_.count(); }
  bool trained() const { return trained_; }

  // Content hash over the BackendSpec, any vocabulary and all weights.
  std::string fingerprint() const;

  // Throws ArgumentError on an empty or unlabeled corpus and DivergenceError
  // when an epoch's loss is not finite.
  TrainingLog train(const Corpus& corpus);

  // Mean BCE over a labeled corpus without updating weights.
  double mean_loss(const Corpus& corpus) const;

  // Scores aligned with the corpus order. Throws StateError before training.
  PosteriorScores predict_proba(const Corpus& corpus) const;

  // Writes weights.bin, spec.json, training_log.csv (and vocab.txt for the
  // LSTM) into `dir`; returns the written paths.
  std::vector<std::filesystem::path> save(const std::filesystem::path& dir) const;

  const TrainingLog& training_log() const { return log_; }

 protected:
  explicit Classifier(BackendSpec spec) : spec_(std::move(spec)) {}

  virtual void prepare(const Corpus& /*train*/) {}
  virtual std::vector<int> encode(const std::string& text) const = 0;
  // Returns the 1x1 logit node for one encoded post.
  virtual nn::Tape::Var forward(nn::Tape& tape, std::span<const int> ids) const = 0;
  virtual void hash_extra(Fnv1a& /*hasher*/) const {}
  virtual void save_extra(const std::filesystem::path& /*dir*/,
                          std::vector<std::filesystem::path>& /*written*/) const {}

  double score(const std::string& text) const;

  BackendSpec spec_;
  nn::ParameterSet params_;
  TrainingLog log_;
  bool trained_ = false;
};

// Embedding -> single LSTM layer -> one sigmoid output unit. The vocabulary
// is built from the training corpus inside train().
class LstmClassifier : public Classifier {
 public:
  explicit LstmClassifier(BackendSpec spec);

  // vocab_size·embedding_dim + 4·(units·(embedding_dim + units) + units) + units + 1
  static std::size_t expected_parameter_count(const HyperParams& hp);

  const WordVocabulary& vocabulary() const { return vocab_; }

 protected:
  void prepare(const Corpus& train) override;
  std::vector<int> encode(const std::string& text) const override;
  nn::Tape::Var forward(nn::Tape& tape, std::span<const int> ids) const override;
  void hash_extra(Fnv1a& hasher) const override;
  void save_extra(const std::filesystem::path& dir,
                  std::vector<std::filesystem::path>& written) const override;

 private:
  WordVocabulary vocab_;
};

// Pretrained transformer encoder (post-layer-norm, GELU feed-forward) with a
// fresh linear head on the leading classification token.
class TransformerClassifier : public Classifier {
 public:
  TransformerClassifier(BackendSpec spec, const EncoderCheckpoint& checkpoint);

  const EncoderConfig& encoder_config() const { return config_; }

 protected:
  std::vector<int> encode(const std::string& text) const override;
  nn::Tape::Var forward(nn::Tape& tape, std::span<const int> ids) const override;
  void hash_extra(Fnv1a& hasher) const override;

 private:
  EncoderConfig config_;
  HashTokenizer tokenizer_;
};

// Untrained model for `spec`. Transformer weights come from the resolver;
// custom layers are seeded from spec.hyperparams.seed. Throws ArgumentError
// for an invalid spec and CheckpointError for an unknown checkpoint.
std::unique_ptr<Classifier> build(const BackendSpec& spec,
                                  const CheckpointResolver& resolver);

// Immutable trained model shared between scoring calls.
struct TrainedModel {
  BackendId backend_id;
  std::string fingerprint;
  TrainingLog training_log;
  std::shared_ptr<const Classifier> model;
};

TrainedModel train(std::unique_ptr<Classifier> model, const Corpus& train_corpus);

PosteriorScores predict_proba(const TrainedModel& model, const Corpus& corpus);

}  // namespace aquasift

#endif  // AQUASIFT_BACKENDS_H_
