/*
 * Copyright 2026 The FloodLens Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "floodlens/model.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "floodlens/errors.hpp"
#include "floodlens/evalmetrics.hpp"
#include "floodlens/rng.hpp"
#include "floodlens/sha256.hpp"
#include "floodlens/strings.hpp"

namespace floodlens {

std::string feature_manifest_checksum(const std::vector<std::string>& names) {
  return sha256_hex(join(names, ","));
}

namespace {

/// Stratified fold labels: positives and negatives are shuffled separately
/// and dealt round-robin, so every fold carries both classes.
std::vector<int> stratified_folds(const std::vector<int>& y, int k, Rng& rng) {
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < y.size(); ++i) (y[i] == 1 ? pos : neg).push_back(i);
  rng.shuffle(pos);
  rng.shuffle(neg);
  std::vector<int> fold(y.size(), 0);
  for (std::size_t i = 0; i < pos.size(); ++i) fold[pos[i]] = static_cast<int>(i % k);
  for (std::size_t i = 0; i < neg.size(); ++i) fold[neg[i]] = static_cast<int>(i % k);
  return fold;
}

}  // namespace

TrainedClassifier train_classifier(const DatasetSplit& split, const SearchConfig& search,
                                   std::uint64_t seed) {
  if (split.train.empty()) throw TrainingError("empty train set");
  if (search.cv_folds < 2) throw TrainingError("cv_folds must be at least 2");

  std::vector<std::vector<double>> X;
  std::vector<int> y;
  X.reserve(split.train.size());
  y.reserve(split.train.size());
  for (const LabeledExample& ex : split.train) {
    X.push_back(selected_features(ex, split.selected));
    y.push_back(ex.label);
  }

  std::size_t n_pos = 0;
  for (int v : y) n_pos += (v == 1);
  const std::size_t n_neg = y.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw TrainingError("train set contains a single class");
  }
  if (n_pos < static_cast<std::size_t>(search.cv_folds) ||
      n_neg < static_cast<std::size_t>(search.cv_folds)) {
    throw TrainingError("need at least " + std::to_string(search.cv_folds) +
                        " examples of each class for stratified CV");
  }
  const double pos_weight = static_cast<double>(n_neg) / static_cast<double>(n_pos);

  Rng rng(derive_seed(seed, "model/cv-folds"));
  const std::vector<int> fold = stratified_folds(y, search.cv_folds, rng);

  HyperParams best_params;
  double best_auc = -1.0;
  for (int depth : search.max_depths) {
    for (double lr : search.learning_rates) {
      for (int n_trees : search.tree_counts) {
        double auc_sum = 0.0;
        for (int k = 0; k < search.cv_folds; ++k) {
          std::vector<std::vector<double>> x_tr, x_va;
          std::vector<int> y_tr;
          std::vector<int> y_va;
          for (std::size_t i = 0; i < X.size(); ++i) {
            if (fold[i] == k) {
              x_va.push_back(X[i]);
              y_va.push_back(y[i]);
            } else {
              x_tr.push_back(X[i]);
              y_tr.push_back(y[i]);
            }
          }
          GbdtParams params;
          params.max_depth = depth;
          params.learning_rate = lr;
          params.n_trees = n_trees;
          params.pos_weight = pos_weight;
          const GbdtModel m = GbdtModel::train(x_tr, y_tr, params);
          auc_sum += rocauc(m.predict_proba(x_va), y_va);
        }
        const double mean_auc = auc_sum / search.cv_folds;
        if (mean_auc > best_auc) {
          best_auc = mean_auc;
          best_params = {depth, lr, n_trees};
        }
      }
    }
  }

  GbdtParams params;
  params.max_depth = best_params.max_depth;
  params.learning_rate = best_params.learning_rate;
  params.n_trees = best_params.n_trees;
  params.pos_weight = pos_weight;

  TrainedClassifier clf;
  clf.model = GbdtModel::train(X, y, params);
  clf.best = best_params;
  clf.cv_auc = best_auc;
  clf.seed = seed;
  clf.selected = split.selected;
  for (int f : split.selected) clf.selected_names.push_back(split.feature_names[static_cast<std::size_t>(f)]);
  clf.manifest_checksum = feature_manifest_checksum(clf.selected_names);
  return clf;
}

std::vector<double> predict_proba(const TrainedClassifier& clf,
                                  const std::vector<LabeledExample>& examples,
                                  const std::vector<std::string>& full_names) {
  for (std::size_t k = 0; k < clf.selected.size(); ++k) {
    const std::size_t f = static_cast<std::size_t>(clf.selected[k]);
    if (f >= full_names.size() || full_names[f] != clf.selected_names[k]) {
      throw FeatureContractError("feature manifest mismatch at index " + std::to_string(clf.selected[k]));
    }
  }
  std::vector<double> out;
  out.reserve(examples.size());
  for (const LabeledExample& ex : examples) {
    if (ex.features.size() != full_names.size()) {
      throw FeatureContractError("example feature length does not match the manifest");
    }
    out.push_back(clf.model.predict_proba_one(selected_features(ex, clf.selected)));
  }
  return out;
}

std::vector<int> baseline_predict(const std::vector<LabeledExample>& examples,
                                  const std::vector<std::string>& full_names) {
  const auto it = std::find(full_names.begin(), full_names.end(), "flood_binary");
  if (it == full_names.end()) {
    throw FeatureContractError("examples carry no flood_binary feature");
  }
  const std::size_t f = static_cast<std::size_t>(it - full_names.begin());
  std::vector<int> out;
  out.reserve(examples.size());
  for (const LabeledExample& ex : examples) {
    out.push_back(ex.features[f] >= 0.5 ? 1 : 0);
  }
  return out;
}

nlohmann::json TrainedClassifier::to_json() const {
  nlohmann::json j;
  j["model"] = model.to_json();
  j["best"] = {{"max_depth", best.max_depth},
               {"learning_rate", best.learning_rate},
               {"n_trees", best.n_trees}};
  j["cv_auc"] = cv_auc;
  j["seed"] = seed;
  j["selected_indices"] = selected;
  j["selected_names"] = selected_names;
  j["manifest_checksum"] = manifest_checksum;
  return j;
}

TrainedClassifier TrainedClassifier::from_json(const nlohmann::json& j) {
  TrainedClassifier clf;
  clf.model = GbdtModel::from_json(j.at("model"));
  clf.best.max_depth = j.at("best").at("max_depth").get<int>();
  clf.best.learning_rate = j.at("best").at("learning_rate").get<double>();
  clf.best.n_trees = j.at("best").at("n_trees").get<int>();
  clf.cv_auc = j.at("cv_auc").get<double>();
  clf.seed = j.at("seed").get<std::uint64_t>();
  clf.selected = j.at("selected_indices").get<std::vector<int>>();
  clf.selected_names = j.at("selected_names").get<std::vector<std::string>>();
  clf.manifest_checksum = j.at("manifest_checksum").get<std::string>();
  return clf;
}

nlohmann::json TrainedClassifier::sidecar(const SearchConfig& search) const {
  nlohmann::json j;
  j["grid"] = {{"max_depths", search.max_depths},
               {"learning_rates", search.learning_rates},
               {"tree_counts", search.tree_counts},
               {"cv_folds", search.cv_folds}};
  j["best"] = {{"max_depth", best.max_depth},
               {"learning_rate", best.learning_rate},
               {"n_trees", best.n_trees}};
  j["cv_auc"] = cv_auc;
  j["seed"] = seed;
  j["manifest_checksum"] = manifest_checksum;
  j["feature_count"] = selected.size();
  return j;
}

}  // namespace floodlens
