#include <gtest/gtest.h>

#include "aquasift/corpus.h"
#include "aquasift/tokenizer.h"

namespace aquasift {
namespace {

Corpus texts(const std::vector<std::string>& ts) {
  std::vector<SocialPost> posts;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    posts.push_back({std::to_string(i), ts[i], {}, {}, {}, 0});
  }
  return Corpus(std::move(posts));
}

TEST(PreTokenize, SplitsPunctuation) {
  EXPECT_EQ(pre_tokenize("the water smells!"),
            (std::vector<std::string>{"the", "water", "smells", "!"}));
  EXPECT_EQ(pre_tokenize("  a,b  "), (std::vector<std::string>{"a", ",", "b"}));
  EXPECT_TRUE(pre_tokenize("").empty());
}

TEST(WordVocabulary, FrequencyRankWithByteOrderTies) {
  const WordVocabulary v = WordVocabulary::build(texts({"b a c a", "c b d"}), 4);
  // counts: a=2 b=2 c=2 d=1; capacity 3 real tokens plus unknown.
  EXPECT_EQ(v.tokens(), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(v.size(), 4u);
  EXPECT_EQ(v.id("a"), 1);
  EXPECT_EQ(v.id("d"), WordVocabulary::kUnknown);
}

TEST(WordVocabulary, EncodeTruncates) {
  const WordVocabulary v = WordVocabulary::from_tokens({"x", "y"});
  EXPECT_EQ(v.encode("x y z x", 10), (std::vector<int>{1, 2, 0, 1}));
  EXPECT_EQ(v.encode("x y z x", 2), (std::vector<int>{1, 2}));
  EXPECT_TRUE(v.encode("", 5).empty());
}

TEST(HashTokenizer, LeadsWithClassTokenAndStaysInRange) {
  for (auto kind : {HashTokenizerKind::kWord, HashTokenizerKind::kCharTrigram}) {
    const HashTokenizer t(kind, 64);
    const std::vector<int> ids = t.encode("Brown water, 水が茶色い!", 128);
    ASSERT_GE(ids.size(), 2u);
    EXPECT_EQ(ids[0], HashTokenizer::kClassToken);
    for (std::size_t i = 1; i < ids.size(); ++i) {
      EXPECT_GE(ids[i], 1);
      EXPECT_LT(ids[i], 64);
    }
    EXPECT_EQ(t.encode("", 16), std::vector<int>{HashTokenizer::kClassToken});
    EXPECT_EQ(t.encode("a b c d e f g h", 4).size(), 4u);
  }
}

TEST(HashTokenizer, TrigramsCoverShortWords) {
  const HashTokenizer t(HashTokenizerKind::kCharTrigram, 1 << 16);
  // "<a>" is one trigram; "<ab>" yields "<ab" and "ab>".
  EXPECT_EQ(t.encode("a", 16).size(), 2u);
  EXPECT_EQ(t.encode("ab", 16).size(), 3u);
}

TEST(HashTokenizer, Deterministic) {
  const HashTokenizer a(HashTokenizerKind::kWord, 4096);
  const HashTokenizer b(HashTokenizerKind::kWord, 4096);
  EXPECT_EQ(a.encode("tap water smells", 16), b.encode("tap water smells", 16));
}

}  // namespace
}  // namespace aquasift
