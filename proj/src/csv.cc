#include "csv.h"

#include <stdexcept>

namespace aquasift::csv {

std::optional<Record> Reader::next() {
  if (in_.peek() == std::char_traits<char>::eof()) return std::nullopt;
  Record rec;
  rec.line = line_;
  std::string field;
  bool quoted = false;
  bool after_quote = false;
  for (;;) {
    const int c = in_.get();
    if (c == std::char_traits<char>::eof()) {
      if (quoted) {
        throw std::runtime_error("unterminated quoted field");
      }
      rec.fields.push_back(std::move(field));
      return rec;
    }
    const char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          quoted = false;
          after_quote = true;
        }
      } else {
        if (ch == '\n') ++line_;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == ',') {
      rec.fields.push_back(std::move(field));
      field.clear();
      after_quote = false;
    } else if (ch == '\r' && in_.peek() == '\n') {
      continue;
    } else if (ch == '\n') {
      ++line_;
      rec.fields.push_back(std::move(field));
      return rec;
    } else if (ch == '"' && field.empty() && !after_quote) {
      quoted = true;
    } else {
      if (after_quote) {
        throw std::runtime_error("unexpected character after closing quote");
      }
      field.push_back(ch);
    }
  }
}

std::string escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace aquasift::csv
