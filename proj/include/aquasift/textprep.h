#ifndef AQUASIFT_TEXTPREP_H_
#define AQUASIFT_TEXTPREP_H_

#include <string>
#include <string_view>
#include <vector>

#include "aquasift/corpus.h"

namespace aquasift {

struct CleanOptions {
  bool lowercase = false;         // ASCII letters only
  std::string keep_punct = ".,!?'-";
};

struct RemovalCounts {
  std::size_t urls = 0;
  std::size_t handles = 0;
  std::size_t emojis = 0;            // pictographs; joiners/selectors not counted
  std::size_t punctuation_runs = 0;  // punctuation runs that were altered

  RemovalCounts& operator+=(const RemovalCounts& o) {
    urls += o.urls;
    handles += o.handles;
    emojis += o.emojis;
    punctuation_runs += o.punctuation_runs;
    return *this;
  }
  friend bool operator==(const RemovalCounts&, const RemovalCounts&) = default;
};

struct CleanText {
  std::string text;
  RemovalCounts removed;
};

// Removes, in order: URL tokens (http://, https://, www.), @handles, emoji
// code points, non-kept punctuation (with runs of a repeated kept mark
// collapsed to one), then collapses whitespace and trims. The steps repeat
// until the text is stable, so clean(clean(x).text).text == clean(x).text.
CleanText clean(std::string_view raw, const CleanOptions& options = {});

struct CleanedCorpus {
  Corpus corpus;
  std::vector<std::string> empty_post_ids;  // retained, but flagged
  RemovalCounts totals;
};

CleanedCorpus clean_corpus(const Corpus& corpus, const CleanOptions& options = {});

// Classification helpers shared with the tokenizers.
bool is_space(char32_t cp);
bool is_punctuation(char32_t cp);
bool is_emoji(char32_t cp);

}  // namespace aquasift

#endif  // AQUASIFT_TEXTPREP_H_
