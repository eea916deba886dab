#include "aquasift/textprep.h"

#include <algorithm>

#include "utf8.h"

namespace aquasift {

namespace {

using utf8::Unit;

bool is_word_char(char32_t cp) {
  return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') ||
         (cp >= '0' && cp <= '9') || cp == '_';
}

// Emoji code points that count as a removed pictograph.
bool is_pictograph(char32_t cp) {
  return (cp >= 0x1F600 && cp <= 0x1F64F) ||  // Emoticons
         (cp >= 0x1F300 && cp <= 0x1F5FF) ||  // Misc Symbols & Pictographs
         (cp >= 0x1F680 && cp <= 0x1F6FF) ||  // Transport & Map
         (cp >= 0x1F900 && cp <= 0x1F9FF) ||  // Supplemental Symbols & Pictographs
         (cp >= 0x2700 && cp <= 0x27BF);      // Dingbats
}

bool is_emoji_modifier(char32_t cp) {
  return (cp >= 0xFE00 && cp <= 0xFE0F) || cp == 0x200D;
}

bool starts_with_ci(const std::vector<Unit>& units, std::size_t begin,
                    std::size_t end, std::string_view prefix) {
  if (end - begin < prefix.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    char32_t cp = units[begin + k].cp;
    if (cp >= 'A' && cp <= 'Z') cp += 'a' - 'A';
    if (cp != static_cast<unsigned char>(prefix[k])) return false;
  }
  return true;
}

std::vector<Unit> remove_urls(const std::vector<Unit>& in, RemovalCounts& counts) {
  std::vector<Unit> out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    if (is_space(in[i].cp)) {
      out.push_back(in[i++]);
      continue;
    }
    std::size_t end = i;
    while (end < in.size() && !is_space(in[end].cp)) ++end;
    if (starts_with_ci(in, i, end, "http://") ||
        starts_with_ci(in, i, end, "https://") ||
        starts_with_ci(in, i, end, "www.")) {
      ++counts.urls;
    } else {
      out.insert(out.end(), in.begin() + static_cast<std::ptrdiff_t>(i),
                 in.begin() + static_cast<std::ptrdiff_t>(end));
    }
    i = end;
  }
  return out;
}

std::vector<Unit> remove_handles(const std::vector<Unit>& in,
                                 RemovalCounts& counts) {
  std::vector<Unit> out;
  out.reserve(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    const bool at_boundary = out.empty() || !is_word_char(out.back().cp);
    if (in[i].cp == '@' && at_boundary && i + 1 < in.size() &&
        is_word_char(in[i + 1].cp)) {
      ++counts.handles;
      ++i;
      while (i + 1 < in.size() && is_word_char(in[i + 1].cp)) ++i;
      continue;
    }
    out.push_back(in[i]);
  }
  return out;
}

std::vector<Unit> remove_emojis(const std::vector<Unit>& in, RemovalCounts& counts) {
  std::vector<Unit> out;
  out.reserve(in.size());
  for (const auto& u : in) {
    if (is_pictograph(u.cp)) {
      ++counts.emojis;
    } else if (!is_emoji_modifier(u.cp)) {
      out.push_back(u);
    }
  }
  return out;
}

std::vector<Unit> tidy_punctuation(const std::vector<Unit>& in,
                                   const std::vector<char32_t>& keep,
                                   RemovalCounts& counts) {
  std::vector<Unit> out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    if (!is_punctuation(in[i].cp)) {
      out.push_back(in[i++]);
      continue;
    }
    std::size_t end = i;
    while (end < in.size() && is_punctuation(in[end].cp)) ++end;
    const std::size_t before = out.size();
    for (std::size_t k = i; k < end; ++k) {
      if (std::find(keep.begin(), keep.end(), in[k].cp) == keep.end()) continue;
      if (out.size() > before && out.back().cp == in[k].cp) continue;
      out.push_back(in[k]);
    }
    if (out.size() - before != end - i) ++counts.punctuation_runs;
    i = end;
  }
  return out;
}

std::string collapse_whitespace(const std::vector<Unit>& in) {
  std::string out;
  bool pending_space = false;
  for (const auto& u : in) {
    if (is_space(u.cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.append(u.bytes);
  }
  return out;
}

std::string clean_once(const std::string& text, const std::vector<char32_t>& keep,
                       RemovalCounts& counts) {
  auto units = utf8::decode(text);
  units = remove_urls(units, counts);
  units = remove_handles(units, counts);
  units = remove_emojis(units, counts);
  units = tidy_punctuation(units, keep, counts);
  return collapse_whitespace(units);
}

}  // namespace

bool is_space(char32_t cp) {
  return cp == ' ' || (cp >= 0x09 && cp <= 0x0D) || cp == 0x85 || cp == 0xA0 ||
         cp == 0x1680 || (cp >= 0x2000 && cp <= 0x200A) || cp == 0x2028 ||
         cp == 0x2029 || cp == 0x202F || cp == 0x205F || cp == 0x3000;
}

bool is_punctuation(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
           (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
  }
  return cp == 0xA1 || cp == 0xA7 || cp == 0xAB || cp == 0xB6 || cp == 0xB7 ||
         cp == 0xBB || cp == 0xBF || (cp >= 0x2010 && cp <= 0x2027) ||
         (cp >= 0x2030 && cp <= 0x205E) || (cp >= 0x3001 && cp <= 0x3003) ||
         (cp >= 0x3008 && cp <= 0x3011);
}

bool is_emoji(char32_t cp) { return is_pictograph(cp) || is_emoji_modifier(cp); }

CleanText clean(std::string_view raw, const CleanOptions& options) {
  std::vector<char32_t> keep;
  for (const auto& u : utf8::decode(options.keep_punct)) keep.push_back(u.cp);

  CleanText result;
  std::string current(raw);
  for (;;) {
    RemovalCounts pass;
    std::string next = clean_once(current, keep, pass);
    if (next == current) break;
    result.removed += pass;
    current = std::move(next);
  }
  if (options.lowercase) {
    std::transform(current.begin(), current.end(), current.begin(), [](char c) {
      return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
    });
  }
  result.text = std::move(current);
  return result;
}

CleanedCorpus clean_corpus(const Corpus& corpus, const CleanOptions& options) {
  CleanedCorpus out;
  std::vector<SocialPost> posts = corpus.posts();
  for (auto& p : posts) {
    CleanText c = clean(p.text, options);
    out.totals += c.removed;
    p.text = std::move(c.text);
    if (p.text.empty()) out.empty_post_ids.push_back(p.post_id);
  }
  out.corpus = Corpus(std::move(posts), corpus.role());
  return out;
}

}  // namespace aquasift
