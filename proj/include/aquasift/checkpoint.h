#ifndef AQUASIFT_CHECKPOINT_H_
#define AQUASIFT_CHECKPOINT_H_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "aquasift/nn/tape.h"
#include "aquasift/tokenizer.h"

namespace aquasift {

// Architecture of a pretrained transformer encoder checkpoint.
struct EncoderConfig {
  HashTokenizerKind tokenizer = HashTokenizerKind::kWord;
  std::size_t vocab_size = 4096;
  std::size_t d_model = 32;
  std::size_t heads = 2;
  std::size_t layers = 2;
  std::size_t ff_dim = 64;
  std::size_t max_positions = 128;

  void validate() const;
  friend bool operator==(const EncoderConfig&, const EncoderConfig&) = default;
};

// Encoder weights without a classification head. Parameter names follow
// the layout documented in transformer.cc.
struct EncoderCheckpoint {
  std::string checkpoint_id;
  EncoderConfig config;
  std::shared_ptr<const nn::ParameterSet> weights;
};

// Freshly initialized encoder parameters for `config`, registered in the
// canonical order. Deterministic for a given seed.
nn::ParameterSet init_encoder_parameters(const EncoderConfig& config,
                                         std::uint64_t seed);

// Checkpoint directory layout: config.json + weights.bin.
void save_checkpoint(const EncoderCheckpoint& checkpoint,
                     const std::filesystem::path& dir);
EncoderCheckpoint load_checkpoint(const std::filesystem::path& dir,
                                  const std::string& checkpoint_id);

// Maps opaque checkpoint ids to encoder weights. Lookup order: checkpoints
// registered in memory, then <cache_dir>/<key>/ on disk, then the built-in
// stand-ins ("builtin:tiny-mono", "builtin:tiny-multi"), which are written
// to the cache when one is set. The cache directory defaults to
// $AQUASIFT_CACHE. Unknown ids raise CheckpointError.
class CheckpointResolver {
 public:
  static constexpr const char* kTinyMono = "builtin:tiny-mono";
  static constexpr const char* kTinyMulti = "builtin:tiny-multi";

  CheckpointResolver();  // reads AQUASIFT_CACHE
  explicit CheckpointResolver(std::optional<std::filesystem::path> cache_dir);

  void register_checkpoint(EncoderCheckpoint checkpoint);
  EncoderCheckpoint resolve(const std::string& checkpoint_id) const;

  const std::optional<std::filesystem::path>& cache_dir() const { return cache_dir_; }

  // Directory name used for an id inside the cache.
  static std::string cache_key(const std::string& checkpoint_id);

 private:
  std::optional<std::filesystem::path> cache_dir_;
  std::map<std::string, EncoderCheckpoint> registered_;
};

// The built-in stand-in encoders: small, randomly initialized from a seed
// derived from the id, with the tokenizer matching the checkpoint family.
std::optional<EncoderCheckpoint> builtin_checkpoint(const std::string& checkpoint_id);

}  // namespace aquasift

#endif  // AQUASIFT_CHECKPOINT_H_
