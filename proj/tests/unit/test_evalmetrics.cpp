#include <doctest.h>

#include <cmath>

#include "floodlens/errors.hpp"
#include "floodlens/evalmetrics.hpp"
#include "floodlens/rng.hpp"
#include "support/oracles.hpp"

using namespace floodlens;
using namespace floodlens::testing;

TEST_SUITE("evalmetrics") {

TEST_CASE("rocauc on the worked four-point example") {
  const std::vector<double> scores{0.1, 0.4, 0.35, 0.8};
  const std::vector<int> labels{0, 0, 1, 1};
  CHECK(rocauc(scores, labels) == 0.75);
}

TEST_CASE("rocauc extremes") {
  CHECK(rocauc(std::vector<double>{0.1, 0.2, 0.8, 0.9}, std::vector<int>{0, 0, 1, 1}) == 1.0);
  CHECK(rocauc(std::vector<double>{0.5, 0.5, 0.5, 0.5}, std::vector<int>{0, 1, 0, 1}) == 0.5);
  CHECK_THROWS_AS(rocauc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}), MetricError);
}

TEST_CASE("balanced accuracy hand cases") {
  CHECK(balanced_accuracy(std::vector<int>{1, 1, 0, 0}, std::vector<int>{1, 1, 0, 0}) == 1.0);
  CHECK(balanced_accuracy(std::vector<int>{1, 1, 1, 1}, std::vector<int>{1, 1, 0, 0}) == 0.5);
  CHECK(balanced_accuracy(std::vector<int>{1, 0, 0, 0}, std::vector<int>{1, 1, 0, 0}) == 0.75);
  CHECK_THROWS_AS(balanced_accuracy(std::vector<int>{1, 0}, std::vector<int>{1, 1}), MetricError);
}

TEST_CASE("f1 and accuracy hand cases") {
  CHECK(f1(std::vector<int>{1, 1, 0}, std::vector<int>{1, 1, 0}) == 1.0);
  CHECK(accuracy(std::vector<int>{1, 1, 0}, std::vector<int>{1, 1, 0}) == 1.0);
  CHECK(f1(std::vector<int>{0, 0, 0}, std::vector<int>{1, 0, 1}) == 0.0);
  CHECK(f1(std::vector<int>{1, 1, 0}, std::vector<int>{1, 0, 0}) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(accuracy(std::vector<int>{1, 1, 0}, std::vector<int>{1, 0, 0}) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("all four metrics match the brute-force oracle on random instances") {
  Rng rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(49);
    std::vector<double> scores(n);
    std::vector<int> labels(n), preds(n);
    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < n; ++i) {
      // Quantized scores force plenty of ties.
      scores[i] = std::floor(rng.uniform01() * 8.0) / 8.0;
      labels[i] = rng.bernoulli(0.4) ? 1 : 0;
      preds[i] = rng.bernoulli(0.5) ? 1 : 0;
      (labels[i] ? has_pos : has_neg) = true;
    }
    if (!has_pos) labels[0] = 1;
    if (!has_neg) labels[n - 1] = 0;

    CHECK(std::abs(rocauc(scores, labels) - brute_rocauc(scores, labels)) < 1e-12);
    CHECK(std::abs(accuracy(preds, labels) - brute_accuracy(preds, labels)) < 1e-12);
    CHECK(std::abs(f1(preds, labels) - brute_f1(preds, labels)) < 1e-12);
    CHECK(std::abs(balanced_accuracy(preds, labels) - brute_balanced_accuracy(preds, labels)) < 1e-12);
  }
}

TEST_CASE("rocauc is invariant under strictly monotone transforms") {
  Rng rng(7);
  std::vector<double> scores(60);
  std::vector<int> labels(60);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i] = std::floor(rng.uniform01() * 16.0) / 16.0;
    labels[i] = rng.bernoulli(0.5) ? 1 : 0;
  }
  labels[0] = 1;
  labels[1] = 0;
  const double base = rocauc(scores, labels);
  std::vector<double> exp_scores(scores), affine(scores);
  for (double& s : exp_scores) s = std::exp(s);
  for (double& s : affine) s = 3.0 * s - 11.0;
  CHECK(rocauc(exp_scores, labels) == doctest::Approx(base).epsilon(1e-15));
  CHECK(rocauc(affine, labels) == doctest::Approx(base).epsilon(1e-15));
}

TEST_CASE("rocauc(scores) + rocauc(-scores) = 1 when tie-free") {
  Rng rng(13);
  std::vector<double> scores(40);
  std::vector<int> labels(40);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i] = rng.uniform01() + static_cast<double>(i) * 1e-9;  // distinct
    labels[i] = rng.bernoulli(0.5) ? 1 : 0;
  }
  labels[0] = 1;
  labels[1] = 0;
  std::vector<double> neg(scores);
  for (double& s : neg) s = -s;
  CHECK(rocauc(scores, labels) + rocauc(neg, labels) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("balanced accuracy of a constant predictor is exactly 0.5") {
  const std::vector<int> labels{1, 1, 0, 0, 1, 0, 0};
  CHECK(balanced_accuracy(std::vector<int>(labels.size(), 1), labels) == 0.5);
  CHECK(balanced_accuracy(std::vector<int>(labels.size(), 0), labels) == 0.5);
}

TEST_CASE("build_report orders rows and checks label consistency") {
  EvalRun a{"statistical", 1, {0.9, 0.1, 0.8, 0.2}, {1, 0, 1, 0}, {1, 0, 1, 0}, 25};
  EvalRun b{"baseline", 1, {1.0, 0.0, 0.0, 0.0}, {1, 0, 0, 0}, {1, 0, 1, 0}, 1};
  EvalRun c{"baseline", 2, {1.0, 0.0, 1.0, 0.0}, {1, 0, 1, 0}, {1, 0, 0, 1}, 1};
  const EvalReport report = build_report({a, b, c});
  REQUIRE(report.rows.size() == 3);
  CHECK(report.rows[0].model == "baseline");
  CHECK(report.rows[0].horizon == 1);
  CHECK(report.rows[1].model == "statistical");
  CHECK(report.rows[2].horizon == 2);
  CHECK(report.rows[1].rocauc == 1.0);
  CHECK(report.rows[0].n_test == 4);

  EvalRun bad{"other", 1, {0.1, 0.2, 0.3, 0.4}, {0, 0, 0, 1}, {1, 1, 0, 0}, 3};
  CHECK_THROWS_AS(build_report({a, bad}), ReportError);
}

TEST_CASE("report csv is stable and carries the feature counts") {
  EvalRun a{"baseline", 1, {1.0, 0.0, 0.0, 0.0}, {1, 0, 0, 0}, {1, 0, 1, 0}, 1};
  const EvalReport report = build_report({a});
  const std::string csv = report.to_csv();
  CHECK(csv.rfind("model,horizon,feature_count,rocauc,accuracy,f1,balanced_accuracy,n_test\n", 0) == 0);
  CHECK(csv.find("baseline,1,1,") != std::string::npos);
}

TEST_CASE("roc_curve endpoints and monotonicity") {
  Rng rng(5);
  std::vector<double> scores(30);
  std::vector<int> labels(30);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i] = std::floor(rng.uniform01() * 4.0) / 4.0;
    labels[i] = rng.bernoulli(0.5) ? 1 : 0;
  }
  labels[0] = 1;
  labels[1] = 0;
  const auto points = roc_curve(scores, labels);
  CHECK(points.front() == std::pair<double, double>{0.0, 0.0});
  CHECK(points.back() == std::pair<double, double>{1.0, 1.0});
  for (std::size_t i = 1; i < points.size(); ++i) {
    CHECK(points[i].first >= points[i - 1].first);
    CHECK(points[i].second >= points[i - 1].second);
  }
}

}  // TEST_SUITE
