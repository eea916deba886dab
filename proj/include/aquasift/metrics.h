#ifndef AQUASIFT_METRICS_H_
#define AQUASIFT_METRICS_H_

#include <map>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "aquasift/corpus.h"

namespace aquasift {

using LabelMap = std::map<std::string, Label>;

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct PrecisionRecallF1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Positive-class metrics feed the per-run tables. Micro metrics pool both
// classes; for single-label binary data they all equal accuracy.
struct MetricsReport {
  PrecisionRecallF1 positive_class;
  PrecisionRecallF1 micro;
  double accuracy = 0.0;
  ConfusionMatrix matrix;
};

// Harmonic mean 2pr/(p+r); 0 when p + r == 0, and exactly p when p == r.
double f1_score(double precision, double recall);

// Throws AlignmentError listing the ids present in only one of the maps.
ConfusionMatrix confusion(const LabelMap& predicted, const LabelMap& gold);

// Throws ArgumentError for an empty matrix. Zero denominators yield 0.
MetricsReport report(const ConfusionMatrix& matrix);

// Gold labels of a fully labeled corpus.
LabelMap gold_labels(const Corpus& corpus);

nlohmann::json to_json(const MetricsReport& report);
MetricsReport metrics_report_from_json(const nlohmann::json& j);

// Aligned plain-text table in the per-run layout, positive-class flavor.
std::string render_table(const MetricsReport& report, const std::string& run_name);

}  // namespace aquasift

#endif  // AQUASIFT_METRICS_H_
