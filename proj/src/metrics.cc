#include "aquasift/metrics.h"

#include <cstdio>

#include <nlohmann/json.hpp>

#include "aquasift/errors.h"

namespace aquasift {

using nlohmann::json;

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

PrecisionRecallF1 prf(std::size_t tp, std::size_t fp, std::size_t fn) {
  PrecisionRecallF1 m;
  m.precision = ratio(tp, tp + fp);
  m.recall = ratio(tp, tp + fn);
  m.f1 = f1_score(m.precision, m.recall);
  return m;
}

json prf_json(const PrecisionRecallF1& m) {
  return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

PrecisionRecallF1 prf_from_json(const json& j) {
  return {j.at("precision").get<double>(), j.at("recall").get<double>(),
          j.at("f1").get<double>()};
}

}  // namespace

double f1_score(double precision, double recall) {
  if (precision + recall <= 0.0) return 0.0;
  if (precision == recall) return precision;
  return 2.0 * precision * recall / (precision + recall);
}

ConfusionMatrix confusion(const LabelMap& predicted, const LabelMap& gold) {
  std::string only_pred, only_gold;
  for (const auto& [id, l] : predicted) {
    if (!gold.count(id)) only_pred += (only_pred.empty() ? "" : ", ") + id;
  }
  for (const auto& [id, l] : gold) {
    if (!predicted.count(id)) only_gold += (only_gold.empty() ? "" : ", ") + id;
  }
  if (!only_pred.empty() || !only_gold.empty()) {
    throw AlignmentError("prediction/gold id mismatch; only predicted: [" + only_pred +
                         "]; only gold: [" + only_gold + "]");
  }
  ConfusionMatrix m;
  for (const auto& [id, p] : predicted) {
    const Label g = gold.at(id);
    if ((p != 0 && p != 1) || (g != 0 && g != 1)) {
      throw ArgumentError("labels must be 0 or 1 (post \"" + id + "\")");
    }
    if (p == 1 && g == 1) ++m.tp;
    if (p == 1 && g == 0) ++m.fp;
    if (p == 0 && g == 1) ++m.fn;
    if (p == 0 && g == 0) ++m.tn;
  }
  return m;
}

MetricsReport report(const ConfusionMatrix& matrix) {
  if (matrix.total() == 0) throw ArgumentError("cannot report on an empty confusion matrix");
  MetricsReport r;
  r.matrix = matrix;
  r.positive_class = prf(matrix.tp, matrix.fp, matrix.fn);
  // Pool both classes: class 0's true positives are tn, and every error is
  // a false positive for one class and a false negative for the other.
  const std::size_t pooled_tp = matrix.tp + matrix.tn;
  const std::size_t pooled_fp = matrix.fp + matrix.fn;
  const std::size_t pooled_fn = matrix.fn + matrix.fp;
  r.micro = prf(pooled_tp, pooled_fp, pooled_fn);
  r.accuracy = ratio(matrix.tp + matrix.tn, matrix.total());
  return r;
}

LabelMap gold_labels(const Corpus& corpus) {
  corpus.require_labeled();
  LabelMap out;
  for (const auto& p : corpus.posts()) out.emplace(p.post_id, *p.label);
  return out;
}

json to_json(const MetricsReport& r) {
  return {{"evaluated_posts", r.matrix.total()},
          {"accuracy", r.accuracy},
          {"positive_class", prf_json(r.positive_class)},
          {"micro", prf_json(r.micro)},
          {"matrix", {{"tp", r.matrix.tp}, {"fp", r.matrix.fp},
                      {"fn", r.matrix.fn}, {"tn", r.matrix.tn}}},
          {"note",
           "micro metrics pool both classes and equal accuracy for binary "
           "single-label data; positive_class is the per-run comparable flavor"}};
}

MetricsReport metrics_report_from_json(const json& j) {
  MetricsReport r;
  try {
    r.accuracy = j.at("accuracy").get<double>();
    r.positive_class = prf_from_json(j.at("positive_class"));
    r.micro = prf_from_json(j.at("micro"));
    const json& m = j.at("matrix");
    r.matrix = {m.at("tp").get<std::size_t>(), m.at("fp").get<std::size_t>(),
                m.at("fn").get<std::size_t>(), m.at("tn").get<std::size_t>()};
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("malformed metrics report: ") + e.what());
  }
  return r;
}

std::string render_table(const MetricsReport& r, const std::string& run_name) {
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof buf, "%-10s | %-9s | %-9s | %-9s | %-9s\n", "Runs",
                "Precision", "Recall", "F1-Score", "Accuracy");
  out += buf;
  std::snprintf(buf, sizeof buf, "%-10s | %-9.3f | %-9.3f | %-9.3f | %-9.3f\n",
                run_name.c_str(), r.positive_class.precision, r.positive_class.recall,
                r.positive_class.f1, r.accuracy);
  out += buf;
  std::snprintf(buf, sizeof buf, "micro P/R/F1 = %.3f/%.3f/%.3f over %zu posts\n",
                r.micro.precision, r.micro.recall, r.micro.f1, r.matrix.total());
  out += buf;
  return out;
}

}  // namespace aquasift
