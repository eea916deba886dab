#include "aquasift/fusion.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "aquasift/errors.h"

namespace aquasift {

FusionConfig FusionConfig::equal(const std::vector<std::string>& model_ids,
                                 double threshold) {
  FusionConfig c;
  for (const auto& id : model_ids) c.weights[id] = 1.0;
  c.threshold = threshold;
  return c;
}

void FusionConfig::validate() const {
  double total = 0.0;
  for (const auto& [id, w] : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw ConfigError("weight of \"" + id + "\" must be finite and non-negative");
    }
    total += w;
  }
  if (!(total > 0.0)) throw ConfigError("at least one fusion weight must be positive");
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ConfigError("fusion threshold must lie in (0, 1)");
  }
}

std::map<std::string, double> FusionConfig::normalized_weights() const {
  validate();
  double total = 0.0;
  for (const auto& [id, w] : weights) total += w;
  std::map<std::string, double> out;
  for (const auto& [id, w] : weights) out[id] = w / total;
  return out;
}

namespace {

void check_alignment(const std::vector<PosteriorScores>& sets) {
  const auto first_ids = sets[0].ids();
  const std::set<std::string> reference(first_ids.begin(), first_ids.end());
  for (std::size_t k = 1; k < sets.size(); ++k) {
    const auto ids = sets[k].ids();
    const std::set<std::string> other(ids.begin(), ids.end());
    if (other == reference && ids.size() == sets[0].size()) continue;
    std::vector<std::string> diff;
    std::set_symmetric_difference(reference.begin(), reference.end(), other.begin(),
                                  other.end(), std::back_inserter(diff));
    std::string listed;
    for (const auto& id : diff) listed += (listed.empty() ? "" : ", ") + id;
    throw AlignmentError("score sets \"" + sets[0].model_id + "\" and \"" +
                         sets[k].model_id + "\" cover different posts; symmetric difference: [" +
                         listed + "]");
  }
}

}  // namespace

PosteriorScores fuse(const std::vector<PosteriorScores>& score_sets,
                     const FusionConfig& config) {
  if (score_sets.size() < 2) throw ArgumentError("fusion needs at least two score sets");
  config.validate();
  for (const auto& s : score_sets) s.validate();

  std::set<std::string> models;
  for (const auto& s : score_sets) {
    if (!models.insert(s.model_id).second) {
      throw AlignmentError("model id \"" + s.model_id + "\" appears twice");
    }
    if (!config.weights.count(s.model_id)) {
      throw AlignmentError("no fusion weight for model \"" + s.model_id + "\"");
    }
  }
  for (const auto& [id, w] : config.weights) {
    if (!models.count(id)) {
      throw AlignmentError("fusion weight given for absent model \"" + id + "\"");
    }
  }
  check_alignment(score_sets);

  std::vector<double> w;
  for (const auto& s : score_sets) w.push_back(config.weights.at(s.model_id));
  const bool equal = std::all_of(w.begin(), w.end(), [&](double x) { return x == w[0]; });
  double weight_total = 0.0;
  for (double x : w) weight_total += x;

  // Index every later set by post id once.
  std::vector<std::map<std::string, double>> lookup(score_sets.size());
  for (std::size_t k = 1; k < score_sets.size(); ++k) {
    lookup[k] = {score_sets[k].scores.begin(), score_sets[k].scores.end()};
  }

  PosteriorScores out{kFusionModelId, {}};
  out.scores.reserve(score_sets[0].size());
  for (const auto& [id, first] : score_sets[0].scores) {
    double lo = first, hi = first;
    double acc = equal ? first : w[0] * first;
    for (std::size_t k = 1; k < score_sets.size(); ++k) {
      const double s = lookup[k].at(id);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
      acc += equal ? s : w[k] * s;
    }
    const double fused = equal ? acc / static_cast<double>(score_sets.size())
                               : acc / weight_total;
    out.scores.emplace_back(id, std::clamp(fused, lo, hi));
  }
  return out;
}

FusionConfig merit_weights(const std::map<std::string, MetricsReport>& validation_reports) {
  FusionConfig c;
  double total = 0.0;
  for (const auto& [id, r] : validation_reports) {
    const double f1 = r.positive_class.f1;
    if (!std::isfinite(f1) || f1 < 0.0) {
      throw ConfigError("validation F1 of \"" + id + "\" is not a finite non-negative number");
    }
    total += f1;
  }
  if (!(total > 0.0)) throw ConfigError("every validation F1 is zero; no merit weights");
  for (const auto& [id, r] : validation_reports) c.weights[id] = r.positive_class.f1 / total;
  return c;
}

LabelMap decide(const PosteriorScores& scores, double threshold) {
  LabelMap out;
  for (const auto& [id, s] : scores.scores) out[id] = s >= threshold ? 1 : 0;
  return out;
}

}  // namespace aquasift
