#include "aquasift/checkpoint.h"

#include <cmath>
#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

#include "aquasift/errors.h"
#include "aquasift/hash.h"
#include "aquasift/nn/serialize.h"
#include "aquasift/random.h"

namespace aquasift {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kFormat = "aquasift-encoder/1";

nn::Matrix uniform_matrix(Eigen::Index rows, Eigen::Index cols, double limit,
                          Rng& rng) {
  nn::Matrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = rng.uniform(-limit, limit);
  }
  return m;
}

nn::Matrix xavier(Eigen::Index fan_in, Eigen::Index fan_out, Rng& rng) {
  return uniform_matrix(fan_in, fan_out,
                        std::sqrt(6.0 / static_cast<double>(fan_in + fan_out)), rng);
}

json config_to_json(const EncoderConfig& c) {
  return {{"format", kFormat},          {"tokenizer", to_string(c.tokenizer)},
          {"vocab_size", c.vocab_size}, {"d_model", c.d_model},
          {"heads", c.heads},           {"layers", c.layers},
          {"ff_dim", c.ff_dim},         {"max_positions", c.max_positions}};
}

EncoderConfig config_from_json(const json& j) {
  if (j.value("format", "") != kFormat) {
    throw CheckpointError("checkpoint config has unsupported format \"" +
                          j.value("format", "") + "\"");
  }
  EncoderConfig c;
  c.tokenizer = hash_tokenizer_from_string(j.at("tokenizer").get<std::string>());
  c.vocab_size = j.at("vocab_size").get<std::size_t>();
  c.d_model = j.at("d_model").get<std::size_t>();
  c.heads = j.at("heads").get<std::size_t>();
  c.layers = j.at("layers").get<std::size_t>();
  c.ff_dim = j.at("ff_dim").get<std::size_t>();
  c.max_positions = j.at("max_positions").get<std::size_t>();
  c.validate();
  return c;
}

}  // namespace

void EncoderConfig::validate() const {
  if (vocab_size < 2 || d_model == 0 || heads == 0 || layers == 0 ||
      ff_dim == 0 || max_positions < 2) {
    throw CheckpointError("encoder config has a zero or undersized dimension");
  }
  if (d_model % heads != 0) {
    throw CheckpointError("d_model must be divisible by the number of heads");
  }
}

nn::ParameterSet init_encoder_parameters(const EncoderConfig& config,
                                         std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  const auto d = static_cast<Eigen::Index>(config.d_model);
  const auto ff = static_cast<Eigen::Index>(config.ff_dim);
  nn::ParameterSet p;
  p.add("embed.token",
        uniform_matrix(static_cast<Eigen::Index>(config.vocab_size), d, 0.1, rng));
  p.add("embed.position",
        uniform_matrix(static_cast<Eigen::Index>(config.max_positions), d, 0.1, rng));
  p.add("embed.ln.gamma", nn::Matrix::Ones(1, d));
  p.add("embed.ln.beta", nn::Matrix::Zero(1, d));
  for (std::size_t l = 0; l < config.layers; ++l) {
    const std::string pre = "layer" + std::to_string(l) + ".";
    for (const char* w : {"q", "k", "v", "o"}) {
      p.add(pre + "attn.w" + w, xavier(d, d, rng));
      p.add(pre + "attn.b" + w, nn::Matrix::Zero(1, d));
    }
    p.add(pre + "ln1.gamma", nn::Matrix::Ones(1, d));
    p.add(pre + "ln1.beta", nn::Matrix::Zero(1, d));
    p.add(pre + "ffn.w1", xavier(d, ff, rng));
    p.add(pre + "ffn.b1", nn::Matrix::Zero(1, ff));
    p.add(pre + "ffn.w2", xavier(ff, d, rng));
    p.add(pre + "ffn.b2", nn::Matrix::Zero(1, d));
    p.add(pre + "ln2.gamma", nn::Matrix::Ones(1, d));
    p.add(pre + "ln2.beta", nn::Matrix::Zero(1, d));
  }
  return p;
}

void save_checkpoint(const EncoderCheckpoint& checkpoint, const fs::path& dir) {
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "config.json");
    json j = config_to_json(checkpoint.config);
    j["checkpoint_id"] = checkpoint.checkpoint_id;
    out << j.dump(2) << '\n';
  }
  std::ofstream out(dir / "weights.bin", std::ios::binary);
  nn::write_parameters(*checkpoint.weights, out);
  if (!out) throw CheckpointError("failed writing checkpoint to " + dir.string());
}

EncoderCheckpoint load_checkpoint(const fs::path& dir,
                                  const std::string& checkpoint_id) {
  std::ifstream cfg(dir / "config.json");
  if (!cfg) throw CheckpointError("no config.json in " + dir.string());
  EncoderCheckpoint ck;
  ck.checkpoint_id = checkpoint_id;
  try {
    ck.config = config_from_json(json::parse(cfg));
  } catch (const json::exception& e) {
    throw CheckpointError("bad checkpoint config in " + dir.string() + ": " + e.what());
  }
  std::ifstream weights(dir / "weights.bin", std::ios::binary);
  if (!weights) throw CheckpointError("no weights.bin in " + dir.string());
  nn::ParameterSet loaded;
  try {
    loaded = nn::read_parameters(weights);
  } catch (const std::runtime_error& e) {
    throw CheckpointError(dir.string() + ": " + e.what());
  }
  // Every encoder tensor must be present with the configured shape.
  nn::ParameterSet expected = init_encoder_parameters(ck.config, 0);
  try {
    if (nn::copy_matching(loaded, expected) != expected.size()) {
      throw CheckpointError("checkpoint " + dir.string() + " is missing encoder tensors");
    }
  } catch (const std::runtime_error& e) {
    throw CheckpointError(dir.string() + ": " + e.what());
  }
  ck.weights = std::make_shared<const nn::ParameterSet>(std::move(expected));
  return ck;
}

std::optional<EncoderCheckpoint> builtin_checkpoint(const std::string& checkpoint_id) {
  EncoderConfig config;
  if (checkpoint_id == CheckpointResolver::kTinyMono) {
    config.tokenizer = HashTokenizerKind::kWord;
    config.vocab_size = 4096;
  } else if (checkpoint_id == CheckpointResolver::kTinyMulti) {
    config.tokenizer = HashTokenizerKind::kCharTrigram;
    config.vocab_size = 8192;
  } else {
    return std::nullopt;
  }
  EncoderCheckpoint ck;
  ck.checkpoint_id = checkpoint_id;
  ck.config = config;
  ck.weights = std::make_shared<const nn::ParameterSet>(
      init_encoder_parameters(config, fnv1a(checkpoint_id)));
  return ck;
}

CheckpointResolver::CheckpointResolver() {
  if (const char* env = std::getenv("AQUASIFT_CACHE"); env && *env) {
    cache_dir_ = fs::path(env);
  }
}

CheckpointResolver::CheckpointResolver(std::optional<fs::path> cache_dir)
    : cache_dir_(std::move(cache_dir)) {}

void CheckpointResolver::register_checkpoint(EncoderCheckpoint checkpoint) {
  std::string id = checkpoint.checkpoint_id;
  registered_.insert_or_assign(std::move(id), std::move(checkpoint));
}

std::string CheckpointResolver::cache_key(const std::string& checkpoint_id) {
  std::string key = checkpoint_id;
  for (char& c : key) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '_';
    if (!ok) c = '_';
  }
  return key;
}

EncoderCheckpoint CheckpointResolver::resolve(const std::string& checkpoint_id) const {
  if (checkpoint_id.empty()) throw CheckpointError("empty checkpoint_id");
  if (auto it = registered_.find(checkpoint_id); it != registered_.end()) {
    return it->second;
  }
  std::optional<fs::path> cached;
  if (cache_dir_) {
    fs::path dir = *cache_dir_ / cache_key(checkpoint_id);
    if (fs::exists(dir / "config.json")) cached = dir;
  }
  if (cached) return load_checkpoint(*cached, checkpoint_id);
  if (auto builtin = builtin_checkpoint(checkpoint_id)) {
    if (cache_dir_) {
      std::error_code ec;
      fs::create_directories(*cache_dir_, ec);
      if (!ec) save_checkpoint(*builtin, *cache_dir_ / cache_key(checkpoint_id));
    }
    return *builtin;
  }
  throw CheckpointError(
      "cannot resolve checkpoint \"" + checkpoint_id + "\": not registered, not built in, and " +
      (cache_dir_ ? "not found under " + cache_dir_->string()
                  : std::string("AQUASIFT_CACHE is not set")));
}

}  // namespace aquasift
