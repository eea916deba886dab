#include <cmath>
#include <fstream>

#include "aquasift/backends.h"
#include "aquasift/random.h"

namespace aquasift {

namespace fs = std::filesystem;
using nn::Matrix;
using nn::Tape;

namespace {

Matrix uniform(Eigen::Index rows, Eigen::Index cols, double limit, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = rng.uniform(-limit, limit);
  }
  return m;
}

Matrix xavier(Eigen::Index fan_in, Eigen::Index fan_out, Rng& rng) {
  return uniform(fan_in, fan_out, std::sqrt(6.0 / static_cast<double>(fan_in + fan_out)),
                 rng);
}

}  // namespace

LstmClassifier::LstmClassifier(BackendSpec spec) : Classifier(std::move(spec)) {
  const HyperParams& hp = spec_.hyperparams;
  const auto v = static_cast<Eigen::Index>(hp.vocab_size);
  const auto e = static_cast<Eigen::Index>(hp.embedding_dim);
  const auto h = static_cast<Eigen::Index>(hp.lstm_units);
  Rng rng(hp.seed);
  params_.add("embedding", uniform(v, e, 0.1, rng));
  // Gate blocks along columns: input, forget, candidate, output.
  params_.add("lstm.w", xavier(e, 4 * h, rng));
  params_.add("lstm.u", xavier(h, 4 * h, rng));
  Matrix bias = Matrix::Zero(1, 4 * h);
  bias.middleCols(h, h).setOnes();
  params_.add("lstm.b", std::move(bias));
  params_.add("output.w", xavier(h, 1, rng));
  params_.add("output.b", Matrix::Zero(1, 1));
}

std::size_t LstmClassifier::expected_parameter_count(const HyperParams& hp) {
  const std::size_t e = hp.embedding_dim, h = hp.lstm_units;
  return hp.vocab_size * e + 4 * (h * (e + h) + h) + (h + 1);
}

void LstmClassifier::prepare(const Corpus& train) {
  vocab_ = WordVocabulary::build(train, spec_.hyperparams.vocab_size);
}

std::vector<int> LstmClassifier::encode(const std::string& text) const {
  return vocab_.encode(text, spec_.hyperparams.max_sequence_length);
}

Tape::Var LstmClassifier::forward(Tape& tape, std::span<const int> ids) const {
  const auto h = static_cast<Eigen::Index>(spec_.hyperparams.lstm_units);
  Tape::Var hidden = tape.constant(Matrix::Zero(1, h));
  if (!ids.empty()) {
    Tape::Var cell = tape.constant(Matrix::Zero(1, h));
    const Tape::Var x = tape.gather_rows(params_.get("embedding"), ids);
    const Tape::Var xw = tape.matmul(x, tape.param(params_.get("lstm.w")));
    const Tape::Var u = tape.param(params_.get("lstm.u"));
    const Tape::Var b = tape.param(params_.get("lstm.b"));
    for (std::size_t t = 0; t < ids.size(); ++t) {
      const Tape::Var z = tape.add_row(
          tape.add(tape.row(xw, static_cast<Eigen::Index>(t)), tape.matmul(hidden, u)), b);
      const Tape::Var in = tape.sigmoid(tape.cols(z, 0, h));
      const Tape::Var forget = tape.sigmoid(tape.cols(z, h, h));
      const Tape::Var cand = tape.tanh(tape.cols(z, 2 * h, h));
      const Tape::Var out = tape.sigmoid(tape.cols(z, 3 * h, h));
      cell = tape.add(tape.mul(forget, cell), tape.mul(in, cand));
      hidden = tape.mul(out, tape.tanh(cell));
    }
  }
  return tape.add(tape.matmul(hidden, tape.param(params_.get("output.w"))),
                  tape.param(params_.get("output.b")));
}

void LstmClassifier::hash_extra(Fnv1a& hasher) const {
  for (const auto& tok : vocab_.tokens()) {
    hasher.update(tok);
    hasher.update("\n", 1);
  }
}

void LstmClassifier::save_extra(const fs::path& dir,
                                std::vector<fs::path>& written) const {
  std::ofstream out(dir / "vocab.txt", std::ios::binary);
  for (const auto& tok : vocab_.tokens()) out << tok << '\n';
  written.push_back(dir / "vocab.txt");
}

}  // namespace aquasift
