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

#ifndef FLOODLENS_GBDT_HPP
#define FLOODLENS_GBDT_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace floodlens {

/// Second-order gradient boosting for binary logistic loss, exact greedy
/// splits. Deterministic: fixed scan order, first strictly-better split wins.
struct GbdtParams {
  int max_depth = 5;
  double learning_rate = 0.1;
  int n_trees = 100;
  double reg_lambda = 1.0;        // L2 on leaf weights
  double min_child_weight = 1.0;  // minimum hessian sum per child
  double gamma = 0.0;             // minimum split gain
  double pos_weight = 1.0;        // sample weight for label-1 rows
  double base_score = 0.5;        // initial probability
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf weight (shrinkage already applied)
};

struct Tree {
  std::vector<TreeNode> nodes;  // node 0 is the root

  double predict(std::span<const double> x) const;
};

class GbdtModel {
 public:
  GbdtModel() = default;

  /// X is row-major, all rows the same length, finite values only.
  static GbdtModel train(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                         const GbdtParams& params);

  double predict_margin(std::span<const double> x) const;
  double predict_proba_one(std::span<const double> x) const;
  std::vector<double> predict_proba(const std::vector<std::vector<double>>& X) const;

  /// Total split gain attributed to each feature.
  const std::vector<double>& feature_gain() const { return feature_gain_; }

  int n_features() const { return n_features_; }
  const GbdtParams& params() const { return params_; }
  const std::vector<Tree>& trees() const { return trees_; }

  nlohmann::json to_json() const;
  static GbdtModel from_json(const nlohmann::json& j);

 private:
  GbdtParams params_;
  int n_features_ = 0;
  std::vector<Tree> trees_;
  std::vector<double> feature_gain_;
};

double sigmoid(double x);

}  // namespace floodlens

#endif  // FLOODLENS_GBDT_HPP
