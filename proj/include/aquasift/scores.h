#ifndef AQUASIFT_SCORES_H_
#define AQUASIFT_SCORES_H_

#include <string>
#include <utility>
#include <vector>

namespace aquasift {

// Per-post probability of the relevant class from one model, in the order
// of the corpus it was computed on.
struct PosteriorScores {
  std::string model_id;
  std::vector<std::pair<std::string, double>> scores;

  std::size_t size() const { return scores.size(); }
  std::vector<std::string> ids() const;
  std::vector<double> values() const;

  // Throws ArgumentError on a duplicate id or a score outside [0, 1].
  void validate() const;

  friend bool operator==(const PosteriorScores&, const PosteriorScores&) = default;
};

// Score file: header "post_id,score", one row per post, scores printed with
// six decimals.
void write_scores(const PosteriorScores& scores, const std::string& path);
PosteriorScores read_scores(const std::string& path, const std::string& model_id);

}  // namespace aquasift

#endif  // AQUASIFT_SCORES_H_
