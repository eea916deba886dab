#ifndef AQUASIFT_TOKENIZER_H_
#define AQUASIFT_TOKENIZER_H_

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "aquasift/corpus.h"

namespace aquasift {

// Splits on whitespace and emits each punctuation code point as its own
// token: "smells!" -> {"smells", "!"}.
std::vector<std::string> pre_tokenize(std::string_view text);

// Frequency-ranked word vocabulary. Id 0 is the unknown token; ids
// 1..size()-1 are the most frequent training tokens, ties broken by
// byte order.
class WordVocabulary {
 public:
  static constexpr int kUnknown = 0;

  WordVocabulary() = default;
  static WordVocabulary build(const Corpus& corpus, std::size_t max_size);
  static WordVocabulary from_tokens(std::vector<std::string> tokens);

  int id(const std::string& token) const;
  std::vector<int> encode(std::string_view text, std::size_t max_len) const;

  // Tokens in id order, excluding the unknown token.
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size() + 1; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

enum class HashTokenizerKind { kWord, kCharTrigram };

const char* to_string(HashTokenizerKind kind);
HashTokenizerKind hash_tokenizer_from_string(const std::string& s);

// Fixed-vocabulary tokenizer for encoder checkpoints: tokens are hashed
// into buckets 1..vocab_size-1; id 0 is the leading classification token.
// kWord hashes whole (case-preserved) tokens; kCharTrigram hashes code-point
// trigrams of each token with boundary markers, so it has no
// out-of-vocabulary words in any script.
class HashTokenizer {
 public:
  static constexpr int kClassToken = 0;

  HashTokenizer(HashTokenizerKind kind, std::size_t vocab_size);

  // Classification token followed by at most max_len - 1 content tokens.
  std::vector<int> encode(std::string_view text, std::size_t max_len) const;

  HashTokenizerKind kind() const { return kind_; }
  std::size_t vocab_size() const { return vocab_size_; }

 private:
  int bucket(std::string_view piece) const;

  HashTokenizerKind kind_;
  std::size_t vocab_size_;
};

}  // namespace aquasift

#endif  // AQUASIFT_TOKENIZER_H_
