#include <cmath>
#include <numeric>

#include "aquasift/backends.h"
#include "aquasift/errors.h"
#include "aquasift/nn/serialize.h"
#include "aquasift/random.h"

// Parameter layout (d = d_model, f = ff_dim):
//   embed.token [vocab x d], embed.position [max_positions x d],
//   embed.ln.{gamma,beta} [1 x d];
//   per layer l: layer<l>.attn.{wq,wk,wv,wo} [d x d] + {bq,bk,bv,bo} [1 x d],
//   layer<l>.ln1.*, layer<l>.ffn.w1 [d x f], b1 [1 x f], w2 [f x d], b2,
//   layer<l>.ln2.*;
//   head.w [d x 1], head.b [1 x 1] (not part of the checkpoint).

namespace aquasift {

using nn::Matrix;
using nn::Tape;

TransformerClassifier::TransformerClassifier(BackendSpec spec,
                                             const EncoderCheckpoint& checkpoint)
    : Classifier(std::move(spec)),
      config_(checkpoint.config),
      tokenizer_(checkpoint.config.tokenizer, checkpoint.config.vocab_size) {
  if (!checkpoint.weights) {
    throw CheckpointError("checkpoint \"" + checkpoint.checkpoint_id + "\" has no weights");
  }
  params_ = init_encoder_parameters(config_, 0);
  if (nn::copy_matching(*checkpoint.weights, params_) != params_.size()) {
    throw CheckpointError("checkpoint \"" + checkpoint.checkpoint_id +
                          "\" is missing encoder tensors");
  }
  if (spec_.hyperparams.freeze_encoder) {
    for (auto& p : params_) p->trainable = false;
  }
  Rng rng(spec_.hyperparams.seed);
  const auto d = static_cast<Eigen::Index>(config_.d_model);
  const double limit = std::sqrt(6.0 / static_cast<double>(d + 1));
  Matrix w(d, 1);
  for (Eigen::Index r = 0; r < d; ++r) w(r, 0) = rng.uniform(-limit, limit);
  params_.add("head.w", std::move(w));
  params_.add("head.b", Matrix::Zero(1, 1));
}

std::vector<int> TransformerClassifier::encode(const std::string& text) const {
  return tokenizer_.encode(
      text, std::min(spec_.hyperparams.max_sequence_length, config_.max_positions));
}

Tape::Var TransformerClassifier::forward(Tape& tape, std::span<const int> ids) const {
  auto p = [&](const std::string& name) { return tape.param(params_.get(name)); };
  const auto d = static_cast<Eigen::Index>(config_.d_model);
  const auto heads = static_cast<Eigen::Index>(config_.heads);
  const Eigen::Index dk = d / heads;
  const double inv_sqrt_dk = 1.0 / std::sqrt(static_cast<double>(dk));

  std::vector<int> positions(ids.size());
  std::iota(positions.begin(), positions.end(), 0);
  Tape::Var x = tape.add(tape.gather_rows(params_.get("embed.token"), ids),
                         tape.gather_rows(params_.get("embed.position"), positions));
  x = tape.layer_norm_rows(x, p("embed.ln.gamma"), p("embed.ln.beta"));

  for (std::size_t l = 0; l < config_.layers; ++l) {
    const std::string pre = "layer" + std::to_string(l) + ".";
    const Tape::Var q = tape.add_row(tape.matmul(x, p(pre + "attn.wq")), p(pre + "attn.bq"));
    const Tape::Var k = tape.add_row(tape.matmul(x, p(pre + "attn.wk")), p(pre + "attn.bk"));
    const Tape::Var v = tape.add_row(tape.matmul(x, p(pre + "attn.wv")), p(pre + "attn.bv"));
    std::vector<Tape::Var> head_out;
    for (Eigen::Index h = 0; h < heads; ++h) {
      const Tape::Var attn = tape.softmax_rows(tape.scale(
          tape.matmul_nt(tape.cols(q, h * dk, dk), tape.cols(k, h * dk, dk)), inv_sqrt_dk));
      head_out.push_back(tape.matmul(attn, tape.cols(v, h * dk, dk)));
    }
    const Tape::Var mixed = tape.add_row(
        tape.matmul(tape.concat_cols(head_out), p(pre + "attn.wo")), p(pre + "attn.bo"));
    x = tape.layer_norm_rows(tape.add(x, mixed), p(pre + "ln1.gamma"), p(pre + "ln1.beta"));
    const Tape::Var hidden =
        tape.gelu(tape.add_row(tape.matmul(x, p(pre + "ffn.w1")), p(pre + "ffn.b1")));
    const Tape::Var ffn =
        tape.add_row(tape.matmul(hidden, p(pre + "ffn.w2")), p(pre + "ffn.b2"));
    x = tape.layer_norm_rows(tape.add(x, ffn), p(pre + "ln2.gamma"), p(pre + "ln2.beta"));
  }
  return tape.add(tape.matmul(tape.row(x, 0), p("head.w")), p("head.b"));
}

void TransformerClassifier::hash_extra(Fnv1a& hasher) const {
  const std::string desc = std::string(to_string(config_.tokenizer)) + "/" +
                           std::to_string(config_.vocab_size) + "/" +
                           std::to_string(config_.d_model) + "/" +
                           std::to_string(config_.heads) + "/" +
                           std::to_string(config_.layers) + "/" +
                           std::to_string(config_.ff_dim) + "/" +
                           std::to_string(config_.max_positions);
  hasher.update(desc);
}

}  // namespace aquasift
