#ifndef AQUASIFT_CORPUS_H_
#define AQUASIFT_CORPUS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace aquasift {

// Binary relevance label: 1 = water-quality relevant, 0 = irrelevant.
using Label = int;

struct SocialPost {
  std::string post_id;
  std::string text;
  std::optional<std::string> created_at;
  std::optional<std::string> author_handle;
  std::optional<std::string> image_ref;  // carried through, never used
  std::optional<Label> label;

  friend bool operator==(const SocialPost&, const SocialPost&) = default;
};

enum class CorpusRole { kTrain, kValidation, kTest };

const char* to_string(CorpusRole role);
CorpusRole corpus_role_from_string(const std::string& s);

// Ordered collection of posts with unique ids. Train and validation corpora
// must be fully labeled; the constructor enforces both invariants.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<SocialPost> posts,
                  CorpusRole role = CorpusRole::kTest);

  const std::vector<SocialPost>& posts() const { return posts_; }
  CorpusRole role() const { return role_; }
  bool all_labeled() const { return all_labeled_; }
  std::size_t size() const { return posts_.size(); }
  bool empty() const { return posts_.empty(); }
  const SocialPost& operator[](std::size_t i) const { return posts_[i]; }

  // Same posts under another role; re-validates the labeling invariant.
  Corpus with_role(CorpusRole role) const;

  // Throws UnlabeledPostError naming the first unlabeled post.
  void require_labeled() const;

  friend bool operator==(const Corpus&, const Corpus&) = default;

 private:
  std::vector<SocialPost> posts_;
  CorpusRole role_ = CorpusRole::kTest;
  bool all_labeled_ = true;
};

struct ClassCounts {
  std::size_t n_positive = 0;
  std::size_t n_negative = 0;

  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

enum class CorpusFormat { kJsonl, kCsv };

// Picks the format from the file extension (".csv" → CSV, otherwise JSONL).
CorpusFormat format_for_path(const std::string& path);

// Reads a corpus preserving file order. Throws IngestError (with the 1-based
// line number) on malformed records and DuplicateIdError on repeated ids.
Corpus ingest(const std::string& path, CorpusFormat format,
              CorpusRole role = CorpusRole::kTest);

void write_corpus(const Corpus& corpus, const std::string& path,
                  CorpusFormat format);

// One JSONL line (no trailing newline). Absent fields are omitted.
std::string to_jsonl_record(const SocialPost& post);

ClassCounts count_classes(const Corpus& corpus);

struct SplitResult {
  Corpus train;
  Corpus validation;
};

// Seeded random partition. With `stratified`, each class contributes to the
// validation set in proportion to its share of the corpus.
SplitResult split(const Corpus& corpus, std::size_t validation_size,
                  std::uint64_t seed, bool stratified = false);

// Random over-sampling of the minority class, with replacement, until both
// classes match the majority count. Originals come first, in order; each
// duplicate is appended with id "<id>#dup<k>".
Corpus upsample(const Corpus& corpus, std::uint64_t seed);

// Noise injected by the synthetic generator, per cleaning category.
struct NoiseLedger {
  std::size_t urls = 0;
  std::size_t handles = 0;
  std::size_t emojis = 0;
  std::size_t punctuation_runs = 0;

  friend bool operator==(const NoiseLedger&, const NoiseLedger&) = default;
};

struct SyntheticCorpus {
  Corpus corpus;
  NoiseLedger ledger;
};

// Seeded labeled corpus. Relevant posts mention water colour, smell, taste
// and illness; irrelevant posts come from unrelated topics (some still say
// "water"). Both classes carry URLs, handles, emojis and punctuation noise.
SyntheticCorpus generate_synthetic(std::size_t n_posts,
                                   double positive_fraction,
                                   std::uint64_t seed);

}  // namespace aquasift

#endif  // AQUASIFT_CORPUS_H_
