#include <fstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "aquasift/corpus.h"
#include "aquasift/errors.h"
#include "csv.h"

namespace aquasift {

using nlohmann::json;

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

class IdRegistry {
 public:
  void add(const std::string& id, std::size_t line) {
    if (!lines_.emplace(id, line).second) throw DuplicateIdError(id, line);
  }

 private:
  std::unordered_map<std::string, std::size_t> lines_;
};

std::optional<std::string> optional_string(const json& obj, const char* key,
                                           const std::string& path,
                                           std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw IngestError(path, line, std::string("field \"") + key +
                                      "\" must be a string");
  }
  return it->get<std::string>();
}

SocialPost parse_json_record(const std::string& text, const std::string& path,
                             std::size_t line) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    throw IngestError(path, line, std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) throw IngestError(path, line, "record is not an object");

  SocialPost post;
  auto id = obj.find("post_id");
  if (id == obj.end() || !id->is_string() || id->get<std::string>().empty()) {
    throw IngestError(path, line, "missing or empty string field \"post_id\"");
  }
  post.post_id = id->get<std::string>();
  auto text_it = obj.find("text");
  if (text_it == obj.end() || !text_it->is_string()) {
    throw IngestError(path, line, "missing string field \"text\"");
  }
  post.text = text_it->get<std::string>();
  post.created_at = optional_string(obj, "created_at", path, line);
  post.author_handle = optional_string(obj, "author_handle", path, line);
  post.image_ref = optional_string(obj, "image_ref", path, line);

  auto label = obj.find("label");
  if (label != obj.end() && !label->is_null()) {
    if (!label->is_number_integer() ||
        (label->get<long long>() != 0 && label->get<long long>() != 1)) {
      throw IngestError(path, line, "label must be 0 or 1");
    }
    post.label = static_cast<Label>(label->get<long long>());
  }
  return post;
}

Corpus ingest_jsonl(std::istream& in, const std::string& path, CorpusRole role) {
  std::vector<SocialPost> posts;
  IdRegistry ids;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    SocialPost post = parse_json_record(text, path, line);
    ids.add(post.post_id, line);
    posts.push_back(std::move(post));
  }
  return Corpus(std::move(posts), role);
}

Corpus ingest_csv(std::istream& in, const std::string& path, CorpusRole role) {
  csv::Reader reader(in);
  auto next = [&]() -> std::optional<csv::Record> {
    try {
      return reader.next();
    } catch (const std::runtime_error& e) {
      throw IngestError(path, 0, e.what());
    }
  };
  auto header = next();
  if (!header) throw IngestError(path, 1, "missing header row");
  if (!header->fields.empty() && header->fields[0].rfind("\xEF\xBB\xBF", 0) == 0) {
    header->fields[0].erase(0, 3);
  }
  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header->fields.size(); ++i) {
    column[header->fields[i]] = i;
  }
  if (!column.count("post_id") || !column.count("text")) {
    throw IngestError(path, 1, "header must contain post_id and text");
  }
  auto optional_field = [&](const csv::Record& rec,
                            const char* name) -> std::optional<std::string> {
    auto it = column.find(name);
    if (it == column.end() || rec.fields[it->second].empty()) return std::nullopt;
    return rec.fields[it->second];
  };

  std::vector<SocialPost> posts;
  IdRegistry ids;
  while (auto rec = next()) {
    if (rec->fields.size() == 1 && rec->fields[0].empty()) continue;
    if (rec->fields.size() != header->fields.size()) {
      throw IngestError(path, rec->line,
                        "expected " + std::to_string(header->fields.size()) +
                            " fields, found " +
                            std::to_string(rec->fields.size()));
    }
    SocialPost post;
    post.post_id = rec->fields[column["post_id"]];
    if (post.post_id.empty()) throw IngestError(path, rec->line, "empty post_id");
    post.text = rec->fields[column["text"]];
    post.created_at = optional_field(*rec, "created_at");
    post.author_handle = optional_field(*rec, "author_handle");
    post.image_ref = optional_field(*rec, "image_ref");
    if (auto label = optional_field(*rec, "label")) {
      if (*label != "0" && *label != "1") {
        throw IngestError(path, rec->line, "label must be 0 or 1");
      }
      post.label = *label == "1" ? 1 : 0;
    }
    ids.add(post.post_id, rec->line);
    posts.push_back(std::move(post));
  }
  return Corpus(std::move(posts), role);
}

}  // namespace

CorpusFormat format_for_path(const std::string& path) {
  return ends_with(path, ".csv") ? CorpusFormat::kCsv : CorpusFormat::kJsonl;
}

Corpus ingest(const std::string& path, CorpusFormat format, CorpusRole role) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open corpus file " + path);
  return format == CorpusFormat::kCsv ? ingest_csv(in, path, role)
                                      : ingest_jsonl(in, path, role);
}

std::string to_jsonl_record(const SocialPost& post) {
  json obj = json::object();
  obj["post_id"] = post.post_id;
  obj["text"] = post.text;
  if (post.created_at) obj["created_at"] = *post.created_at;
  if (post.author_handle) obj["author_handle"] = *post.author_handle;
  if (post.image_ref) obj["image_ref"] = *post.image_ref;
  if (post.label) obj["label"] = *post.label;
  return obj.dump();
}

void write_corpus(const Corpus& corpus, const std::string& path,
                  CorpusFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write corpus file " + path);
  if (format == CorpusFormat::kJsonl) {
    for (const auto& p : corpus.posts()) out << to_jsonl_record(p) << '\n';
  } else {
    out << "post_id,text,created_at,author_handle,image_ref,label\n";
    for (const auto& p : corpus.posts()) {
      out << csv::escape(p.post_id) << ',' << csv::escape(p.text) << ','
          << csv::escape(p.created_at.value_or("")) << ','
          << csv::escape(p.author_handle.value_or("")) << ','
          << csv::escape(p.image_ref.value_or("")) << ','
          << (p.label ? std::to_string(*p.label) : "") << '\n';
    }
  }
  if (!out) throw ArgumentError("failed writing corpus file " + path);
}

}  // namespace aquasift
