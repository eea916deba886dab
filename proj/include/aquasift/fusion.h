#ifndef AQUASIFT_FUSION_H_
#define AQUASIFT_FUSION_H_

#include <map>
#include <string>
#include <vector>

#include "aquasift/metrics.h"
#include "aquasift/scores.h"

namespace aquasift {

inline constexpr const char* kFusionModelId = "fusion";

// Non-negative per-model weights (normalized internally) and the decision
// threshold. At least one weight must be positive.
struct FusionConfig {
  std::map<std::string, double> weights;
  double threshold = 0.5;

  static FusionConfig equal(const std::vector<std::string>& model_ids,
                            double threshold = 0.5);

  // Throws ConfigError on negative/non-finite/all-zero weights or a
  // threshold outside (0, 1).
  void validate() const;
  std::map<std::string, double> normalized_weights() const;
};

// Per-post convex combination of the models' scores. Equal weights reduce
// to the plain arithmetic mean (sum, then divide by the model count); the
// result is clamped into [min, max] of the inputs so rounding never leaves
// the hull. Output order follows score_sets[0].
// Throws ArgumentError for fewer than two sets, AlignmentError when post ids
// or model ids disagree, ConfigError for an invalid config.
PosteriorScores fuse(const std::vector<PosteriorScores>& score_sets,
                     const FusionConfig& config);

// Weights proportional to each model's positive-class validation F1.
// Throws ConfigError when every F1 is zero or any F1 is not finite.
FusionConfig merit_weights(const std::map<std::string, MetricsReport>& validation_reports);

// Label 1 iff score >= threshold.
LabelMap decide(const PosteriorScores& scores, double threshold);

}  // namespace aquasift

#endif  // AQUASIFT_FUSION_H_
