#include "aquasift/tokenizer.h"

#include <algorithm>

#include "aquasift/errors.h"
#include "aquasift/hash.h"
#include "aquasift/textprep.h"
#include "utf8.h"

namespace aquasift {

std::vector<std::string> pre_tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
  };
  for (const auto& u : utf8::decode(text)) {
    if (is_space(u.cp)) {
      flush();
    } else if (is_punctuation(u.cp)) {
      flush();
      out.emplace_back(u.bytes);
    } else {
      current.append(u.bytes);
    }
  }
  flush();
  return out;
}

WordVocabulary WordVocabulary::build(const Corpus& corpus, std::size_t max_size) {
  if (max_size < 1) throw ArgumentError("vocabulary size must be positive");
  std::unordered_map<std::string, std::size_t> freq;
  for (const auto& p : corpus.posts()) {
    for (auto& tok : pre_tokenize(p.text)) ++freq[std::move(tok)];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (ranked.size() > max_size - 1) ranked.resize(max_size - 1);
  std::vector<std::string> tokens;
  tokens.reserve(ranked.size());
  for (auto& [tok, n] : ranked) tokens.push_back(tok);
  return from_tokens(std::move(tokens));
}

WordVocabulary WordVocabulary::from_tokens(std::vector<std::string> tokens) {
  WordVocabulary v;
  v.tokens_ = std::move(tokens);
  for (std::size_t i = 0; i < v.tokens_.size(); ++i) {
    v.index_.emplace(v.tokens_[i], static_cast<int>(i + 1));
  }
  return v;
}

int WordVocabulary::id(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? kUnknown : it->second;
}

std::vector<int> WordVocabulary::encode(std::string_view text,
                                        std::size_t max_len) const {
  std::vector<int> ids;
  for (const auto& tok : pre_tokenize(text)) {
    if (ids.size() == max_len) break;
    ids.push_back(id(tok));
  }
  return ids;
}

const char* to_string(HashTokenizerKind kind) {
  return kind == HashTokenizerKind::kWord ? "word_hash" : "char_trigram_hash";
}

HashTokenizerKind hash_tokenizer_from_string(const std::string& s) {
  if (s == "word_hash") return HashTokenizerKind::kWord;
  if (s == "char_trigram_hash") return HashTokenizerKind::kCharTrigram;
  throw ArgumentError("unknown tokenizer \"" + s + "\"");
}

HashTokenizer::HashTokenizer(HashTokenizerKind kind, std::size_t vocab_size)
    : kind_(kind), vocab_size_(vocab_size) {
  if (vocab_size < 2) throw ArgumentError("hash tokenizer needs vocab_size >= 2");
}

int HashTokenizer::bucket(std::string_view piece) const {
  return 1 + static_cast<int>(fnv1a(piece) % (vocab_size_ - 1));
}

std::vector<int> HashTokenizer::encode(std::string_view text,
                                       std::size_t max_len) const {
  std::vector<int> ids{kClassToken};
  for (const auto& tok : pre_tokenize(text)) {
    if (ids.size() >= max_len) break;
    if (kind_ == HashTokenizerKind::kWord) {
      ids.push_back(bucket(tok));
      continue;
    }
    // "<" and ">" mark token boundaries; trigrams never straddle tokens.
    std::vector<std::string_view> cps{"<"};
    const auto units = utf8::decode(tok);
    for (const auto& u : units) cps.push_back(u.bytes);
    cps.push_back(">");
    for (std::size_t i = 0; i + 2 < cps.size() && ids.size() < max_len; ++i) {
      std::string tri;
      for (std::size_t k = i; k < i + 3; ++k) tri.append(cps[k]);
      ids.push_back(bucket(tri));
    }
  }
  return ids;
}

}  // namespace aquasift
