#include "aquasift/corpus.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "aquasift/errors.h"
#include "aquasift/random.h"

namespace aquasift {

const char* to_string(CorpusRole role) {
  switch (role) {
    case CorpusRole::kTrain:
      return "train";
    case CorpusRole::kValidation:
      return "validation";
    case CorpusRole::kTest:
      return "test";
  }
  return "test";
}

CorpusRole corpus_role_from_string(const std::string& s) {
  if (s == "train") return CorpusRole::kTrain;
  if (s == "validation") return CorpusRole::kValidation;
  if (s == "test") return CorpusRole::kTest;
  throw ArgumentError("unknown corpus role \"" + s + "\"");
}

Corpus::Corpus(std::vector<SocialPost> posts, CorpusRole role)
    : posts_(std::move(posts)), role_(role) {
  std::unordered_set<std::string> seen;
  seen.reserve(posts_.size());
  for (std::size_t i = 0; i < posts_.size(); ++i) {
    const SocialPost& p = posts_[i];
    if (p.post_id.empty()) {
      throw ArgumentError("post at position " + std::to_string(i) +
                          " has an empty post_id");
    }
    if (!seen.insert(p.post_id).second) {
      throw DuplicateIdError(p.post_id, i + 1);
    }
    if (p.label && *p.label != 0 && *p.label != 1) {
      throw ArgumentError("post \"" + p.post_id + "\" has label " +
                          std::to_string(*p.label) + "; expected 0 or 1");
    }
    if (!p.label) all_labeled_ = false;
  }
  if (role_ != CorpusRole::kTest) require_labeled();
}

Corpus Corpus::with_role(CorpusRole role) const {
  Corpus out = *this;
  out.role_ = role;
  if (role != CorpusRole::kTest) out.require_labeled();
  return out;
}

void Corpus::require_labeled() const {
  if (all_labeled_) return;
  for (const auto& p : posts_) {
    if (!p.label) throw UnlabeledPostError(p.post_id);
  }
}

ClassCounts count_classes(const Corpus& corpus) {
  corpus.require_labeled();
  ClassCounts counts;
  for (const auto& p : corpus.posts()) {
    if (*p.label == 1) {
      ++counts.n_positive;
    } else {
      ++counts.n_negative;
    }
  }
  return counts;
}

namespace {

std::vector<std::size_t> sample_without_replacement(std::vector<std::size_t> pool,
                                                    std::size_t k, Rng& rng) {
  // Partial Fisher-Yates: the first k slots end up uniformly sampled.
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(pool[i], pool[i + rng.index(pool.size() - i)]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace

SplitResult split(const Corpus& corpus, std::size_t validation_size,
                  std::uint64_t seed, bool stratified) {
  if (validation_size >= corpus.size()) {
    throw ArgumentError("validation_size " + std::to_string(validation_size) +
                        " must be smaller than the corpus size " +
                        std::to_string(corpus.size()));
  }
  corpus.require_labeled();
  Rng rng(seed);

  std::vector<std::size_t> chosen;
  if (!stratified) {
    std::vector<std::size_t> all(corpus.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    chosen = sample_without_replacement(std::move(all), validation_size, rng);
  } else {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      (*corpus[i].label == 1 ? pos : neg).push_back(i);
    }
    const double share = static_cast<double>(pos.size()) / corpus.size();
    auto k_pos = static_cast<std::size_t>(std::llround(share * validation_size));
    k_pos = std::min(k_pos, pos.size());
    std::size_t k_neg = validation_size - k_pos;
    if (k_neg > neg.size()) {
      k_pos += k_neg - neg.size();
      k_neg = neg.size();
    }
    chosen = sample_without_replacement(std::move(pos), k_pos, rng);
    auto from_neg = sample_without_replacement(std::move(neg), k_neg, rng);
    chosen.insert(chosen.end(), from_neg.begin(), from_neg.end());
  }

  std::vector<bool> in_validation(corpus.size(), false);
  for (std::size_t i : chosen) in_validation[i] = true;
  std::vector<SocialPost> train_posts, validation_posts;
  train_posts.reserve(corpus.size() - validation_size);
  validation_posts.reserve(validation_size);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    (in_validation[i] ? validation_posts : train_posts).push_back(corpus[i]);
  }
  return {Corpus(std::move(train_posts), CorpusRole::kTrain),
          Corpus(std::move(validation_posts), CorpusRole::kValidation)};
}

Corpus upsample(const Corpus& corpus, std::uint64_t seed) {
  const ClassCounts counts = count_classes(corpus);
  if (counts.n_positive == 0 || counts.n_negative == 0) {
    throw BalancingError(
        "cannot up-sample: class " +
        std::string(counts.n_positive == 0 ? "1" : "0") + " has no members");
  }
  if (counts.n_positive == counts.n_negative) return corpus;

  const Label minority = counts.n_positive < counts.n_negative ? 1 : 0;
  const std::size_t deficit = counts.n_positive > counts.n_negative
                                  ? counts.n_positive - counts.n_negative
                                  : counts.n_negative - counts.n_positive;
  std::vector<std::size_t> minority_idx;
  std::unordered_set<std::string> ids;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    ids.insert(corpus[i].post_id);
    if (*corpus[i].label == minority) minority_idx.push_back(i);
  }

  Rng rng(seed);
  std::vector<SocialPost> posts = corpus.posts();
  posts.reserve(corpus.size() + deficit);
  std::unordered_map<std::size_t, std::size_t> dup_count;
  for (std::size_t n = 0; n < deficit; ++n) {
    const std::size_t src = minority_idx[rng.index(minority_idx.size())];
    SocialPost dup = corpus[src];
    std::size_t& k = dup_count[src];
    do {
      dup.post_id = corpus[src].post_id + "#dup" + std::to_string(++k);
    } while (!ids.insert(dup.post_id).second);
    posts.push_back(std::move(dup));
  }
  return Corpus(std::move(posts), corpus.role());
}

}  // namespace aquasift
