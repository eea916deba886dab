#include <set>

#include <gtest/gtest.h>

#include "aquasift/corpus.h"
#include "aquasift/random.h"
#include "aquasift/textprep.h"
#include "fuzz.h"
#include "utf8.h"

namespace aquasift {
namespace {

RemovalCounts counts(std::size_t urls, std::size_t handles, std::size_t emojis,
                     std::size_t punct) {
  return RemovalCounts{urls, handles, emojis, punct};
}

TEST(Clean, WorkedExample) {
  const CleanText c = clean("Check https://t.co/ab @mayor \U0001F4A7 the water smells!!");
  EXPECT_EQ(c.text, "Check the water smells!");
  EXPECT_EQ(c.removed, counts(1, 1, 1, 1));
}

TEST(Clean, AlreadyCleanTextUnchanged) {
  const CleanText c = clean("tap water tastes bad");
  EXPECT_EQ(c.text, "tap water tastes bad");
  EXPECT_EQ(c.removed, RemovalCounts{});
}

TEST(Clean, EmptyInput) {
  EXPECT_EQ(clean("").text, "");
  EXPECT_EQ(clean("   \t\n ").text, "");
}

TEST(Clean, UrlForms) {
  EXPECT_EQ(clean("a http://x.y b").text, "a b");
  EXPECT_EQ(clean("a HTTPS://X.Y/z?q b").text, "a b");
  EXPECT_EQ(clean("see www.example.com now").text, "see now");
  EXPECT_EQ(clean("wwwx is a word").text, "wwwx is a word");
  EXPECT_EQ(clean("a http://x https://y www.z").removed.urls, 3u);
}

TEST(Clean, Handles) {
  EXPECT_EQ(clean("thanks @city_water_2 for nothing").text, "thanks for nothing");
  // "@" inside a word is an address, not a handle; the bare "@" is stripped
  // as punctuation.
  EXPECT_EQ(clean("mail a@b now").text, "mail ab now");
  EXPECT_EQ(clean("@a @b").removed.handles, 2u);
  EXPECT_EQ(clean("@ alone").removed.handles, 0u);
}

TEST(Clean, EmojiSequencesCountPictographs) {
  // Thumbs up with a skin-tone modifier is two pictographic code points.
  EXPECT_EQ(clean("ok \U0001F44D\U0001F3FD").removed.emojis, 2u);
  // Heart plus variation selector: the selector is removed, not counted.
  const CleanText heart = clean("love ❤️ it");
  EXPECT_EQ(heart.text, "love it");
  EXPECT_EQ(heart.removed.emojis, 1u);
  // ZWJ family: two people, one joiner.
  EXPECT_EQ(clean("\U0001F468‍\U0001F469").removed.emojis, 2u);
  EXPECT_EQ(clean("done ✅").text, "done");
}

TEST(Clean, Punctuation) {
  EXPECT_EQ(clean("what?? no...").text, "what? no.");
  EXPECT_EQ(clean("#boilwater notice").text, "boilwater notice");
  EXPECT_EQ(clean("(brown) water; gross**").text, "brown water gross");
  EXPECT_EQ(clean("it's a well-known issue, right?!").text,
            "it's a well-known issue, right?!");
  EXPECT_EQ(clean("it's a well-known issue, right?!").removed.punctuation_runs, 0u);
  EXPECT_EQ(clean("wow!!! ok?? fine").removed.punctuation_runs, 2u);
}

TEST(Clean, HashtagKeepsWord) {
  const CleanText c = clean("#water #tastes bad");
  EXPECT_EQ(c.text, "water tastes bad");
  EXPECT_EQ(c.removed.punctuation_runs, 2u);
}

TEST(Clean, Options) {
  CleanOptions o;
  o.lowercase = true;
  EXPECT_EQ(clean("Tap WATER", o).text, "tap water");
  o.keep_punct = "";
  EXPECT_EQ(clean("Tap, WATER!", o).text, "tap water");
}

TEST(Clean, NonAsciiLettersKept) {
  EXPECT_EQ(clean("agua turbia café 水").text, "agua turbia café 水");
}

TEST(Clean, IdempotentOnFuzzedStrings) {
  Rng rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const std::string raw = testing::fuzz_text(rng);
    const CleanText once = clean(raw);
    const CleanText twice = clean(once.text);
    ASSERT_EQ(twice.text, once.text) << "input: " << raw;
    ASSERT_EQ(twice.removed, RemovalCounts{}) << "input: " << raw;
  }
}

TEST(Clean, NeverIntroducesCharacters) {
  Rng rng(77);
  for (int i = 0; i < 1000; ++i) {
    const std::string raw = testing::fuzz_text(rng);
    std::set<char32_t> allowed{U' '};
    for (const auto& u : utf8::decode(raw)) allowed.insert(u.cp);
    for (const auto& u : utf8::decode(clean(raw).text)) {
      ASSERT_TRUE(allowed.count(u.cp)) << "input: " << raw;
    }
  }
}

TEST(Clean, OutputHasNoNoise) {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const std::string text = clean(testing::fuzz_text(rng)).text;
    for (const auto& u : utf8::decode(text)) {
      ASSERT_FALSE(is_emoji(u.cp)) << text;
      ASSERT_NE(u.cp, U'\n');
      ASSERT_NE(u.cp, U'\t');
    }
    ASSERT_EQ(text.find("http://"), std::string::npos) << text;
    ASSERT_EQ(text.find('@'), std::string::npos) << text;
    ASSERT_EQ(text.find("  "), std::string::npos) << text;
    if (!text.empty()) {
      ASSERT_NE(text.front(), ' ');
      ASSERT_NE(text.back(), ' ');
    }
  }
}

SocialPost post(std::string id, std::string text) {
  SocialPost p;
  p.post_id = std::move(id);
  p.text = std::move(text);
  return p;
}

TEST(CleanCorpus, ReportsEmptyPostsAndKeepsThem) {
  const Corpus c({post("a", "water is brown"), post("b", "https://t.co/xyz"),
                  post("c", "fine")});
  const CleanedCorpus out = clean_corpus(c);
  ASSERT_EQ(out.corpus.size(), 3u);
  EXPECT_EQ(out.empty_post_ids, std::vector<std::string>{"b"});
  EXPECT_EQ(out.corpus[1].text, "");
  EXPECT_EQ(out.totals.urls, 1u);
}

TEST(CleanCorpus, CleanCorpusIsFixedPoint) {
  const Corpus c = clean_corpus(generate_synthetic(60, 0.5, 8).corpus).corpus;
  const CleanedCorpus again = clean_corpus(c);
  EXPECT_EQ(again.corpus, c);
  EXPECT_EQ(again.totals, RemovalCounts{});
}

TEST(CleanCorpus, PostsCleanedIndependently) {
  const Corpus c = generate_synthetic(30, 0.5, 4).corpus;
  const CleanedCorpus whole = clean_corpus(c);
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_EQ(whole.corpus[i].text, clean(c[i].text).text);
  }
}

TEST(CleanCorpus, TotalsMatchGeneratorLedger) {
  for (std::uint64_t seed : {1u, 2u, 3u, 99u}) {
    const SyntheticCorpus s = generate_synthetic(100, 0.3, seed);
    const RemovalCounts t = clean_corpus(s.corpus).totals;
    EXPECT_EQ(t.urls, s.ledger.urls) << seed;
    EXPECT_EQ(t.handles, s.ledger.handles) << seed;
    EXPECT_EQ(t.emojis, s.ledger.emojis) << seed;
    EXPECT_EQ(t.punctuation_runs, s.ledger.punctuation_runs) << seed;
    EXPECT_GT(s.ledger.urls, 0u);
    EXPECT_GT(s.ledger.emojis, 0u);
  }
}

}  // namespace
}  // namespace aquasift
