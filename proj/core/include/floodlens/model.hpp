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

#ifndef FLOODLENS_MODEL_HPP
#define FLOODLENS_MODEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "floodlens/dataset.hpp"
#include "floodlens/gbdt.hpp"

namespace floodlens {

/// Hyperparameter grid for the boosted-tree search. The defaults are the
/// documented artifact grid; tests may pass a smaller one.
struct SearchConfig {
  std::vector<int> max_depths{3, 5, 7};
  std::vector<double> learning_rates{0.05, 0.1, 0.3};
  std::vector<int> tree_counts{100, 300};
  int cv_folds = 3;
};

struct HyperParams {
  int max_depth = 0;
  double learning_rate = 0.0;
  int n_trees = 0;
};

/// Boosted-tree classifier selected by stratified k-fold cross validation
/// scored with ROCAUC, refit on the full train slice. Carries the feature
/// manifest it was fitted on; predictions verify it.
struct TrainedClassifier {
  GbdtModel model;
  HyperParams best;
  double cv_auc = 0.0;
  std::uint64_t seed = 0;
  std::vector<int> selected;                // indices into the full feature layout
  std::vector<std::string> selected_names;  // names of the selected features
  std::string manifest_checksum;            // sha256 over the joined selected names

  nlohmann::json to_json() const;
  static TrainedClassifier from_json(const nlohmann::json& j);
  /// Sidecar metadata: grid searched, best params, cv score, seed, checksum.
  nlohmann::json sidecar(const SearchConfig& search) const;
};

std::string feature_manifest_checksum(const std::vector<std::string>& names);

/// Grid search over `search`, k-fold stratified CV on split.train, refit of
/// the best configuration. The positive-class weight is set to the train
/// negative/positive ratio. Throws TrainingError when train is single-class
/// or too small to stratify.
TrainedClassifier train_classifier(const DatasetSplit& split, const SearchConfig& search,
                                   std::uint64_t seed);

/// Scores in [0,1], one per example, order preserving. Throws
/// FeatureContractError when `full_names` does not match the manifest the
/// model was trained with.
std::vector<double> predict_proba(const TrainedClassifier& clf,
                                  const std::vector<LabeledExample>& examples,
                                  const std::vector<std::string>& full_names);

/// Persistence baseline: predicts the current-year flood indicator.
std::vector<int> baseline_predict(const std::vector<LabeledExample>& examples,
                                  const std::vector<std::string>& full_names);

}  // namespace floodlens

#endif  // FLOODLENS_MODEL_HPP
