#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "aquasift/errors.h"
#include "aquasift/metrics.h"
#include "aquasift/random.h"

namespace aquasift {
namespace {

LabelMap labels(const std::vector<Label>& v) {
  LabelMap m;
  for (std::size_t i = 0; i < v.size(); ++i) m["p" + std::to_string(i)] = v[i];
  return m;
}

TEST(Confusion, PerfectPrediction) {
  const LabelMap gold = labels({1, 0, 1, 0});
  EXPECT_EQ(confusion(gold, gold), (ConfusionMatrix{2, 0, 0, 2}));
}

TEST(Confusion, AllPositivePredictor) {
  EXPECT_EQ(confusion(labels({1, 1}), labels({1, 0})), (ConfusionMatrix{1, 1, 0, 0}));
}

TEST(Confusion, HandEnumerated) {
  EXPECT_EQ(confusion(labels({1, 0, 0, 1}), labels({1, 1, 0, 0})),
            (ConfusionMatrix{1, 1, 1, 1}));
}

TEST(Confusion, KeyMismatchListsIds) {
  LabelMap pred{{"a", 1}, {"b", 0}};
  LabelMap gold{{"a", 1}, {"c", 0}};
  try {
    confusion(pred, gold);
    FAIL();
  } catch (const AlignmentError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("b"), std::string::npos);
    EXPECT_NE(msg.find("c"), std::string::npos);
  }
}

TEST(Report, OneOfEach) {
  const MetricsReport r = report({1, 1, 1, 1});
  EXPECT_DOUBLE_EQ(r.positive_class.precision, 0.5);
  EXPECT_DOUBLE_EQ(r.positive_class.recall, 0.5);
  EXPECT_DOUBLE_EQ(r.positive_class.f1, 0.5);
  EXPECT_DOUBLE_EQ(r.accuracy, 0.5);
}

TEST(Report, Perfect) {
  const MetricsReport r = report({2, 0, 0, 2});
  for (double v : {r.positive_class.precision, r.positive_class.recall, r.positive_class.f1,
                   r.micro.precision, r.micro.recall, r.micro.f1, r.accuracy}) {
    EXPECT_EQ(v, 1.0);
  }
}

TEST(Report, ZeroDenominatorsAreZero) {
  const MetricsReport r = report({0, 0, 0, 5});
  EXPECT_EQ(r.positive_class.precision, 0.0);
  EXPECT_EQ(r.positive_class.recall, 0.0);
  EXPECT_EQ(r.positive_class.f1, 0.0);
  EXPECT_EQ(r.accuracy, 1.0);
}

TEST(Report, EmptyMatrixRejected) { EXPECT_THROW(report({}), ArgumentError); }

// 2pr/(p+r) gives 0.79338 here.
TEST(F1, RunTwoTestRow) { EXPECT_NEAR(f1_score(0.732, 0.866), 0.794, 1e-3); }

struct ReferenceRow {
  const char* name;
  double p, r, f1;
};

void PrintTo(const ReferenceRow& row, std::ostream* os) { *os << row.name; }

class ReferenceRows : public ::testing::TestWithParam<ReferenceRow> {};

TEST_P(ReferenceRows, F1RecomputedFromPrecisionAndRecall) {
  const ReferenceRow row = GetParam();
  EXPECT_NEAR(f1_score(row.p, row.r), row.f1, 1e-3) << row.name;
}

INSTANTIATE_TEST_SUITE_P(
    DevAndTest, ReferenceRows,
    ::testing::Values(ReferenceRow{"dev_run1", 0.950, 0.925, 0.938},
                      ReferenceRow{"dev_run2", 0.949, 0.950, 0.950},
                      ReferenceRow{"dev_run3", 0.862, 0.900, 0.881},
                      ReferenceRow{"dev_run4", 0.885, 0.947, 0.915},
                      ReferenceRow{"test_run1", 0.732, 0.866, 0.794},
                      ReferenceRow{"test_run2", 0.732, 0.866, 0.794},
                      ReferenceRow{"test_run3", 0.606, 0.877, 0.717},
                      ReferenceRow{"test_run4", 0.565, 0.801, 0.663}),
    [](const auto& info) { return std::string(info.param.name); });

TEST(Report, MicroIdentityOnRandomPairs) {
  Rng rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.index(200);
    std::vector<Label> p(n), g(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = static_cast<Label>(rng.index(2));
      g[i] = static_cast<Label>(rng.index(2));
    }
    const MetricsReport r = report(confusion(labels(p), labels(g)));
    ASSERT_EQ(r.micro.precision, r.accuracy);
    ASSERT_EQ(r.micro.recall, r.accuracy);
    ASSERT_EQ(r.micro.f1, r.accuracy);
  }
}

TEST(Report, SwappingPositiveClass) {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const ConfusionMatrix m{rng.index(20) + 1, rng.index(20), rng.index(20), rng.index(20) + 1};
    const ConfusionMatrix swapped{m.tn, m.fn, m.fp, m.tp};
    const MetricsReport a = report(m);
    const MetricsReport b = report(swapped);
    // Precision of the negative class: tn / (tn + fn).
    EXPECT_DOUBLE_EQ(b.positive_class.precision,
                     static_cast<double>(m.tn) / static_cast<double>(m.tn + m.fn));
    EXPECT_DOUBLE_EQ(b.positive_class.recall,
                     static_cast<double>(m.tn) / static_cast<double>(m.tn + m.fp));
    EXPECT_EQ(a.accuracy, b.accuracy);
    EXPECT_EQ(a.micro.f1, b.micro.f1);
  }
}

TEST(Report, ValuesInUnitInterval) {
  Rng rng(10);
  for (int trial = 0; trial < 200; ++trial) {
    const MetricsReport r =
        report({rng.index(5), rng.index(5), rng.index(5), rng.index(5) + 1});
    for (double v : {r.positive_class.precision, r.positive_class.recall, r.positive_class.f1,
                     r.accuracy}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(Report, JsonRoundTrip) {
  const MetricsReport r = report({7, 2, 3, 11});
  const nlohmann::json j = to_json(r);
  EXPECT_EQ(j.at("evaluated_posts"), 23);
  const MetricsReport back = metrics_report_from_json(j);
  EXPECT_EQ(back.matrix, r.matrix);
  EXPECT_DOUBLE_EQ(back.positive_class.f1, r.positive_class.f1);
  EXPECT_DOUBLE_EQ(back.accuracy, r.accuracy);
}

TEST(Report, TableHasRunColumns) {
  const std::string t = render_table(report({7, 2, 3, 11}), "run2_mono");
  for (const char* col : {"Runs", "Precision", "Recall", "F1-Score", "Accuracy", "run2_mono"}) {
    EXPECT_NE(t.find(col), std::string::npos) << col;
  }
}

TEST(GoldLabels, FromCorpus) {
  const Corpus c({{"a", "x", {}, {}, {}, 1}, {"b", "y", {}, {}, {}, 0}});
  EXPECT_EQ(gold_labels(c), (LabelMap{{"a", 1}, {"b", 0}}));
}

}  // namespace
}  // namespace aquasift
