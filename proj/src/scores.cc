#include "aquasift/scores.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_set>

#include "aquasift/errors.h"
#include "csv.h"

namespace aquasift {

std::vector<std::string> PosteriorScores::ids() const {
  std::vector<std::string> out;
  out.reserve(scores.size());
  for (const auto& [id, s] : scores) out.push_back(id);
  return out;
}

std::vector<double> PosteriorScores::values() const {
  std::vector<double> out;
  out.reserve(scores.size());
  for (const auto& [id, s] : scores) out.push_back(s);
  return out;
}

void PosteriorScores::validate() const {
  std::unordered_set<std::string> seen;
  for (const auto& [id, s] : scores) {
    if (!seen.insert(id).second) {
      throw ArgumentError("scores of \"" + model_id + "\" repeat post_id \"" + id + "\"");
    }
    if (!(s >= 0.0 && s <= 1.0)) {
      throw ArgumentError("score of post \"" + id + "\" from \"" + model_id +
                          "\" is outside [0, 1]");
    }
  }
}

void write_scores(const PosteriorScores& scores, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write score file " + path);
  out << "post_id,score\n";
  char buf[32];
  for (const auto& [id, s] : scores.scores) {
    std::snprintf(buf, sizeof buf, "%.6f", s);
    out << csv::escape(id) << ',' << buf << '\n';
  }
  if (!out) throw ArgumentError("failed writing score file " + path);
}

PosteriorScores read_scores(const std::string& path, const std::string& model_id) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open score file " + path);
  csv::Reader reader(in);
  PosteriorScores out{model_id, {}};
  try {
    auto header = reader.next();
    if (!header || header->fields.size() != 2 || header->fields[0] != "post_id" ||
        header->fields[1] != "score") {
      throw IngestError(path, 1, "expected header post_id,score");
    }
    while (auto rec = reader.next()) {
      if (rec->fields.size() == 1 && rec->fields[0].empty()) continue;
      if (rec->fields.size() != 2) throw IngestError(path, rec->line, "expected 2 fields");
      std::size_t used = 0;
      double s = 0;
      try {
        s = std::stod(rec->fields[1], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != rec->fields[1].size()) {
        throw IngestError(path, rec->line, "score is not a number");
      }
      out.scores.emplace_back(rec->fields[0], s);
    }
  } catch (const IngestError&) {
    throw;
  } catch (const std::runtime_error& e) {
    throw IngestError(path, 0, e.what());
  }
  out.validate();
  return out;
}

}  // namespace aquasift
