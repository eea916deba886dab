#ifndef AQUASIFT_SRC_CSV_H_
#define AQUASIFT_SRC_CSV_H_

#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace aquasift::csv {

struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based line on which the record starts
};

// RFC 4180 reader: quoted fields may contain commas, doubled quotes and
// newlines. Accepts LF or CRLF line endings.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Next record, or nullopt at end of input. Throws std::runtime_error on
  // an unterminated quote.
  std::optional<Record> next();

 private:
  std::istream& in_;
  std::size_t line_ = 1;
};

std::string escape(const std::string& field);

}  // namespace aquasift::csv

#endif  // AQUASIFT_SRC_CSV_H_
