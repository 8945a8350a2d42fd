#include <doctest.h>

#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "floodlens/errors.hpp"
#include "floodlens/evalmetrics.hpp"
#include "floodlens/gbdt.hpp"
#include "floodlens/model.hpp"
#include "floodlens/rng.hpp"

using namespace floodlens;

namespace {

/// Split with precomputed examples; selection = all features.
DatasetSplit make_split(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                        double train_fraction = 1.0) {
  DatasetSplit split;
  const std::size_t d = X[0].size();
  for (std::size_t f = 0; f < d; ++f) {
    split.feature_names.push_back("f" + std::to_string(f));
    split.selected.push_back(static_cast<int>(f));
  }
  const std::size_t n_train = static_cast<std::size_t>(std::llround(train_fraction * X.size()));
  for (std::size_t i = 0; i < X.size(); ++i) {
    LabeledExample ex;
    ex.features = X[i];
    ex.label = y[i];
    (i < n_train ? split.train : split.test).push_back(std::move(ex));
  }
  return split;
}

SearchConfig small_search() {
  SearchConfig s;
  s.max_depths = {3};
  s.learning_rates = {0.3};
  s.tree_counts = {50};
  return s;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("linearly separable toy set reaches train ROCAUC 1.0") {
  Rng rng(42);
  std::vector<std::vector<double>> X;
  std::vector<int> y;
  for (int i = 0; i < 80; ++i) {
    const int label = i % 2;
    X.push_back({static_cast<double>(label) + 0.1 * rng.uniform01(), rng.uniform01()});
    y.push_back(label);
  }
  const DatasetSplit split = make_split(X, y);
  const TrainedClassifier clf = train_classifier(split, small_search(), 1);
  const auto scores = predict_proba(clf, split.train, split.feature_names);
  std::vector<int> labels;
  for (const auto& ex : split.train) labels.push_back(ex.label);
  CHECK(rocauc(scores, labels) == 1.0);
}

TEST_CASE("permutation null: CV ROCAUC stays in the chance band") {
  Rng rng(2026);
  const std::size_t n = 300;
  std::vector<std::vector<double>> X;
  std::vector<int> base_labels;
  for (std::size_t i = 0; i < n; ++i) {
    X.push_back({rng.uniform01(), rng.uniform01(), rng.uniform01(), rng.uniform01()});
    base_labels.push_back(i % 2 == 0 ? 1 : 0);
  }
  std::vector<double> aucs;
  for (int seed = 0; seed < 20; ++seed) {
    std::vector<int> y = base_labels;
    Rng perm(static_cast<std::uint64_t>(seed) + 1000);
    perm.shuffle(y);
    const DatasetSplit split = make_split(X, y);
    const TrainedClassifier clf = train_classifier(split, small_search(), 7);
    aucs.push_back(clf.cv_auc);
  }
  int in_band = 0;
  double sum = 0.0, sq = 0.0;
  for (double a : aucs) {
    in_band += (a >= 0.4 && a <= 0.6);
    sum += a;
    sq += a * a;
  }
  const double mean = sum / 20.0;
  const double sd = std::sqrt(std::max(sq / 20.0 - mean * mean, 0.0));
  const double se = sd / std::sqrt(20.0);
  CHECK(in_band >= 18);
  CHECK(mean - 2.0 * se <= 0.5);
  CHECK(mean + 2.0 * se >= 0.5);
}

TEST_CASE("same seed reproduces hyperparameters, score and predictions bit-for-bit") {
  Rng rng(5);
  std::vector<std::vector<double>> X;
  std::vector<int> y;
  for (int i = 0; i < 120; ++i) {
    const double a = rng.uniform01(), b = rng.uniform01();
    X.push_back({a, b, rng.uniform01()});
    y.push_back(a + 0.3 * b > 0.6 ? 1 : 0);
  }
  SearchConfig search;
  search.max_depths = {2, 3};
  search.learning_rates = {0.1, 0.3};
  search.tree_counts = {30};
  const DatasetSplit split = make_split(X, y, 0.8);

  const TrainedClassifier c1 = train_classifier(split, search, 99);
  const TrainedClassifier c2 = train_classifier(split, search, 99);
  CHECK(c1.best.max_depth == c2.best.max_depth);
  CHECK(c1.best.learning_rate == c2.best.learning_rate);
  CHECK(c1.cv_auc == c2.cv_auc);
  CHECK(c1.to_json().dump() == c2.to_json().dump());
  CHECK(predict_proba(c1, split.test, split.feature_names) ==
        predict_proba(c2, split.test, split.feature_names));
}

TEST_CASE("predict_proba contracts: empty input, duplicates, range") {
  Rng rng(17);
  std::vector<std::vector<double>> X;
  std::vector<int> y;
  for (int i = 0; i < 60; ++i) {
    const double a = rng.uniform01();
    X.push_back({a, rng.uniform01()});
    y.push_back(a > 0.5 ? 1 : 0);
  }
  const DatasetSplit split = make_split(X, y);
  const TrainedClassifier clf = train_classifier(split, small_search(), 3);

  CHECK(predict_proba(clf, {}, split.feature_names).empty());

  std::vector<LabeledExample> dup{split.train[0], split.train[0]};
  const auto scores = predict_proba(clf, dup, split.feature_names);
  CHECK(scores[0] == scores[1]);

  const auto all = predict_proba(clf, split.train, split.feature_names);
  for (double s : all) {
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
    CHECK(std::isfinite(s));
  }
}

TEST_CASE("thresholded confusion matrix always sums to the example count") {
  Rng rng(23);
  std::vector<std::vector<double>> X;
  std::vector<int> y;
  for (int i = 0; i < 90; ++i) {
    const double a = rng.uniform01();
    X.push_back({a, rng.uniform01()});
    y.push_back(rng.bernoulli(0.3 + 0.4 * a) ? 1 : 0);
  }
  const DatasetSplit split = make_split(X, y);
  const TrainedClassifier clf = train_classifier(split, small_search(), 3);
  const auto scores = predict_proba(clf, split.train, split.feature_names);
  for (double threshold : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const int pred = scores[i] >= threshold ? 1 : 0;
      if (split.train[i].label == 1) {
        pred ? ++tp : ++fn;
      } else {
        pred ? ++fp : ++tn;
      }
    }
    CHECK(tp + fp + tn + fn == scores.size());
  }
}

TEST_CASE("feature manifest mismatch raises a contract error") {
  std::vector<std::vector<double>> X;
  std::vector<int> y;
  Rng rng(31);
  for (int i = 0; i < 40; ++i) {
    const double a = rng.uniform01();
    X.push_back({a, rng.uniform01()});
    y.push_back(a > 0.5 ? 1 : 0);
  }
  const DatasetSplit split = make_split(X, y);
  const TrainedClassifier clf = train_classifier(split, small_search(), 3);
  std::vector<std::string> renamed{"f0", "other"};
  CHECK_THROWS_AS(predict_proba(clf, split.train, renamed), FeatureContractError);
}

TEST_CASE("single-class training set is rejected") {
  std::vector<std::vector<double>> X{{0.1, 0.2}, {0.2, 0.1}, {0.4, 0.3}};
  std::vector<int> y{1, 1, 1};
  const DatasetSplit split = make_split(X, y);
  CHECK_THROWS_AS(train_classifier(split, small_search(), 1), TrainingError);
}

TEST_CASE("baseline predicts the current-year flood indicator") {
  std::vector<std::string> names{"flood_count", "flood_binary", "flood_damage"};
  std::vector<LabeledExample> examples;
  for (int b : {1, 0, 0, 1}) {
    LabeledExample ex;
    ex.features = {static_cast<double>(b * 2), static_cast<double>(b), 0.0};
    examples.push_back(ex);
  }
  CHECK(baseline_predict(examples, names) == std::vector<int>{1, 0, 0, 1});
  std::vector<LabeledExample> all_zero(3);
  for (auto& ex : all_zero) ex.features = {0.0, 0.0, 0.0};
  CHECK(baseline_predict(all_zero, names) == std::vector<int>{0, 0, 0});
  CHECK_THROWS_AS(baseline_predict(examples, {"a", "b", "c"}), FeatureContractError);
}

TEST_CASE("model json round-trip preserves predictions exactly") {
  Rng rng(41);
  std::vector<std::vector<double>> X;
  std::vector<int> y;
  for (int i = 0; i < 70; ++i) {
    const double a = rng.uniform01(), b = rng.uniform01();
    X.push_back({a, b});
    y.push_back(a > b ? 1 : 0);
  }
  const DatasetSplit split = make_split(X, y);
  const TrainedClassifier clf = train_classifier(split, small_search(), 3);
  const TrainedClassifier restored = TrainedClassifier::from_json(clf.to_json());
  CHECK(predict_proba(clf, split.train, split.feature_names) ==
        predict_proba(restored, split.train, split.feature_names));
}

}  // TEST_SUITE
