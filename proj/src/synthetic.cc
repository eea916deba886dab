#include <algorithm>
#include <iterator>
#include <cmath>
#include <cstdio>
#include <string_view>

#include "aquasift/corpus.h"
#include "aquasift/errors.h"
#include "aquasift/random.h"

namespace aquasift {

namespace {

constexpr std::string_view kRelevantWords[] = {
    "brown",     "yellow",   "murky",     "cloudy",     "smells",  "sewage",
    "rotten",    "eggs",     "chlorine",  "metallic",   "tastes",  "bitter",
    "salty",     "sick",     "diarrhea",  "vomiting",   "rash",    "stomach",
    "cramps",    "discolored", "odor",    "stinks",     "contaminated",
    "tap",       "faucet",   "drinking",  "boil",       "advisory", "rusty",
    "foul",      "greenish", "sediment",  "bacteria",   "illness", "muddy",
    "nausea"};

constexpr std::string_view kIrrelevantWords[] = {
    "football", "match",    "traffic",  "concert",   "pizza",    "movie",
    "weekend",  "election", "phone",    "coffee",    "vacation", "beach",
    "polo",     "guitar",   "birthday", "festival",  "laptop",   "recipe",
    "garden",   "marathon", "museum",   "podcast",   "sunset",   "tickets",
    "album",    "stadium",  "painting", "bakery",    "picnic", "skating",
    "camera",   "library",  "puppy",    "wedding",   "fireworks", "chess"};

constexpr std::string_view kFillerWords[] = {
    "the", "my",   "our",   "water", "today", "again", "this", "so",
    "really", "from", "is", "and",  "just",  "at",    "home",  "now"};

// One code point each from the pictographic blocks the cleaner removes.
constexpr std::string_view kEmojis[] = {
    "\U0001F4A7",        // droplet (Misc Symbols & Pictographs)
    "\U0001F922",        // nauseated face (Supplemental Symbols)
    "\U0001F637",        // face with mask (Emoticons)
    "\U0001F6B0",        // potable water (Transport & Map)
    "\u2728",            // sparkles (Dingbats)
    "\U0001F30A",        // wave
    "\U0001F92E",        // vomiting face
    "\U0001F600",        // grinning face
    "\u2764\uFE0F",      // heart + variation selector
    "\U0001F44D\U0001F3FD",  // thumbs up + skin tone (two pictographs)
};
constexpr std::size_t kEmojiCounts[] = {1, 1, 1, 1, 1, 1, 1, 1, 1, 2};
static_assert(std::size(kEmojis) == std::size(kEmojiCounts));

constexpr std::string_view kPunctSuffixes[] = {
    "!!!", "??", "...", "!!", "**", ";;"};

std::string random_alnum(Rng& rng, std::size_t n) {
  static constexpr std::string_view kChars =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s.push_back(kChars[rng.index(std::size(kChars))]);
  return s;
}

std::string make_url(Rng& rng) {
  switch (rng.index(3)) {
    case 0:
      return "https://t.co/" + random_alnum(rng, 8);
    case 1:
      return "http://news.example.org/story/" + random_alnum(rng, 5) + "?ref=tw";
    default:
      return "www." + random_alnum(rng, 6) + ".com/water";
  }
}

struct GeneratedText {
  std::string text;
  NoiseLedger noise;
};

GeneratedText make_text(bool relevant, Rng& rng) {
  const std::size_t n_words = 5 + rng.index(6);
  std::vector<std::string> words;
  std::size_t topical = 0;
  for (std::size_t i = 0; i < n_words; ++i) {
    const bool use_topic = rng.uniform() < 0.55 || (i + 2 >= n_words && topical < 2);
    if (use_topic) {
      ++topical;
      words.emplace_back(relevant ? kRelevantWords[rng.index(std::size(kRelevantWords))]
                                  : kIrrelevantWords[rng.index(std::size(kIrrelevantWords))]);
    } else {
      words.emplace_back(kFillerWords[rng.index(std::size(kFillerWords))]);
    }
  }
  if (rng.uniform() < 0.5) words[0][0] = static_cast<char>(words[0][0] - 'a' + 'A');

  GeneratedText out;
  // Punctuation decorations go on distinct words so each stays its own run.
  for (auto& w : words) {
    const double r = rng.uniform();
    if (r < 0.06) {
      w.insert(0, "#");
      ++out.noise.punctuation_runs;
    } else if (r < 0.14) {
      w += kPunctSuffixes[rng.index(std::size(kPunctSuffixes))];
      ++out.noise.punctuation_runs;
    }
  }
  // Noise tokens are standalone, whitespace-separated.
  auto insert_token = [&](std::string token) {
    const std::size_t pos = rng.index(words.size() + 1);
    words.insert(words.begin() + static_cast<std::ptrdiff_t>(pos), std::move(token));
  };
  if (rng.uniform() < 0.35) {
    insert_token(make_url(rng));
    ++out.noise.urls;
  }
  if (rng.uniform() < 0.35) {
    insert_token("@user_" + std::to_string(rng.index(10000)));
    ++out.noise.handles;
  }
  if (rng.uniform() < 0.4) {
    const std::size_t e = rng.index(std::size(kEmojis));
    insert_token(std::string(kEmojis[e]));
    out.noise.emojis += kEmojiCounts[e];
  }
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out.text += rng.uniform() < 0.1 ? "  " : " ";
    out.text += words[i];
  }
  return out;
}

}  // namespace

SyntheticCorpus generate_synthetic(std::size_t n_posts, double positive_fraction,
                                   std::uint64_t seed) {
  if (n_posts < 2) throw ArgumentError("n_posts must be at least 2");
  if (!(positive_fraction > 0.0 && positive_fraction < 1.0)) {
    throw ArgumentError("positive_fraction must lie in (0, 1)");
  }
  auto n_pos = static_cast<std::size_t>(
      std::llround(positive_fraction * static_cast<double>(n_posts)));
  n_pos = std::clamp<std::size_t>(n_pos, 1, n_posts - 1);

  Rng rng(seed);
  std::vector<Label> labels(n_posts, 0);
  std::fill_n(labels.begin(), n_pos, 1);
  rng.shuffle(labels);

  SyntheticCorpus out;
  std::vector<SocialPost> posts;
  posts.reserve(n_posts);
  for (std::size_t i = 0; i < n_posts; ++i) {
    SocialPost p;
    char id[32];
    std::snprintf(id, sizeof id, "syn-%06zu", i + 1);
    p.post_id = id;
    GeneratedText g = make_text(labels[i] == 1, rng);
    p.text = std::move(g.text);
    out.ledger.urls += g.noise.urls;
    out.ledger.handles += g.noise.handles;
    out.ledger.emojis += g.noise.emojis;
    out.ledger.punctuation_runs += g.noise.punctuation_runs;
    if (rng.uniform() < 0.5) {
      char ts[32];
      std::snprintf(ts, sizeof ts, "2021-%02zu-%02zuT%02zu:%02zu:00Z",
                    1 + rng.index(12), 1 + rng.index(28), rng.index(24),
                    rng.index(60));
      p.created_at = ts;
    }
    if (rng.uniform() < 0.5) p.author_handle = "author_" + std::to_string(rng.index(500));
    p.label = labels[i];
    posts.push_back(std::move(p));
  }
  out.corpus = Corpus(std::move(posts), CorpusRole::kTrain);
  return out;
}

}  // namespace aquasift
