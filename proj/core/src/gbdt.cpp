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

#include "floodlens/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "floodlens/errors.hpp"

namespace floodlens {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double Tree::predict(std::span<const double> x) const {
  int node = 0;
  while (nodes[node].feature >= 0) {
    node = x[static_cast<std::size_t>(nodes[node].feature)] < nodes[node].threshold
               ? nodes[node].left
               : nodes[node].right;
  }
  return nodes[node].value;
}

namespace {

struct SplitCandidate {
  double gain = 0.0;  // only candidates with gain > 0 are kept
  int feature = -1;
  double threshold = 0.0;
};

struct NodeAgg {
  double g = 0.0;
  double h = 0.0;
  std::size_t count = 0;
};

double leaf_objective(double g, double h, double lambda) { return g * g / (h + lambda); }

}  // namespace

GbdtModel GbdtModel::train(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                           const GbdtParams& params) {
  const std::size_t n = X.size();
  if (n == 0 || y.size() != n) throw TrainingError("empty training set or label size mismatch");
  const std::size_t d = X[0].size();
  if (d == 0) throw TrainingError("no features");
  for (const auto& row : X) {
    if (row.size() != d) throw TrainingError("ragged feature matrix");
    for (double v : row) {
      if (!std::isfinite(v)) throw TrainingError("non-finite feature value");
    }
  }

  GbdtModel model;
  model.params_ = params;
  model.n_features_ = static_cast<int>(d);
  model.feature_gain_.assign(d, 0.0);

  // Column-major copy plus one presorted index list per feature.
  std::vector<std::vector<double>> col(d, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < d; ++f) col[f][i] = X[i][f];
  }
  std::vector<std::vector<std::uint32_t>> sorted(d, std::vector<std::uint32_t>(n));
  for (std::size_t f = 0; f < d; ++f) {
    std::iota(sorted[f].begin(), sorted[f].end(), 0u);
    std::stable_sort(sorted[f].begin(), sorted[f].end(),
                     [&](std::uint32_t a, std::uint32_t b) { return col[f][a] < col[f][b]; });
  }

  std::vector<double> margin(n, std::log(params.base_score / (1.0 - params.base_score)));
  std::vector<double> grad(n), hess(n);
  std::vector<int> row_node(n);

  for (int round = 0; round < params.n_trees; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(margin[i]);
      const double w = y[i] == 1 ? params.pos_weight : 1.0;
      grad[i] = w * (p - static_cast<double>(y[i]));
      hess[i] = std::max(w * p * (1.0 - p), 1e-16);
    }

    Tree tree;
    tree.nodes.push_back(TreeNode{});
    std::fill(row_node.begin(), row_node.end(), 0);
    std::vector<int> frontier{0};  // node ids open for splitting at this depth

    for (int depth = 0; depth < params.max_depth && !frontier.empty(); ++depth) {
      // Slot lookup: tree node id -> position in the frontier.
      std::vector<int> slot(tree.nodes.size(), -1);
      for (std::size_t s = 0; s < frontier.size(); ++s) slot[frontier[s]] = static_cast<int>(s);

      std::vector<NodeAgg> total(frontier.size());
      for (std::size_t i = 0; i < n; ++i) {
        const int s = row_node[i] >= 0 ? slot[row_node[i]] : -1;
        if (s < 0) continue;
        total[s].g += grad[i];
        total[s].h += hess[i];
        ++total[s].count;
      }

      std::vector<SplitCandidate> best(frontier.size());
      std::vector<NodeAgg> left(frontier.size());
      std::vector<double> prev_val(frontier.size());
      std::vector<char> started(frontier.size());

      for (std::size_t f = 0; f < d; ++f) {
        std::fill(left.begin(), left.end(), NodeAgg{});
        std::fill(started.begin(), started.end(), 0);
        for (std::uint32_t idx : sorted[f]) {
          const int node = row_node[idx];
          const int s = node >= 0 ? slot[node] : -1;
          if (s < 0) continue;
          const double v = col[f][idx];
          if (started[s] && v > prev_val[s]) {
            const double gl = left[s].g, hl = left[s].h;
            const double gr = total[s].g - gl, hr = total[s].h - hl;
            if (hl >= params.min_child_weight && hr >= params.min_child_weight) {
              const double gain = 0.5 * (leaf_objective(gl, hl, params.reg_lambda) +
                                         leaf_objective(gr, hr, params.reg_lambda) -
                                         leaf_objective(total[s].g, total[s].h, params.reg_lambda)) -
                                  params.gamma;
              if (gain > best[s].gain) {
                best[s] = {gain, static_cast<int>(f), 0.5 * (prev_val[s] + v)};
              }
            }
          }
          left[s].g += grad[idx];
          left[s].h += hess[idx];
          ++left[s].count;
          prev_val[s] = v;
          started[s] = 1;
        }
      }

      std::vector<int> next_frontier;
      for (std::size_t s = 0; s < frontier.size(); ++s) {
        const int node = frontier[s];
        if (best[s].feature < 0 || best[s].gain <= 0.0) {
          tree.nodes[node].feature = -1;
          tree.nodes[node].value = -total[s].g / (total[s].h + params.reg_lambda) * params.learning_rate;
          continue;
        }
        tree.nodes[node].feature = best[s].feature;
        tree.nodes[node].threshold = best[s].threshold;
        tree.nodes[node].left = static_cast<int>(tree.nodes.size());
        tree.nodes[node].right = static_cast<int>(tree.nodes.size()) + 1;
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        model.feature_gain_[static_cast<std::size_t>(best[s].feature)] += best[s].gain;
        next_frontier.push_back(tree.nodes[node].left);
        next_frontier.push_back(tree.nodes[node].right);
      }

      // Route rows of split nodes to their children.
      for (std::size_t i = 0; i < n; ++i) {
        const int node = row_node[i];
        const int s = node >= 0 && node < static_cast<int>(slot.size()) ? slot[node] : -1;
        if (s < 0 || tree.nodes[node].feature < 0) continue;
        row_node[i] = col[static_cast<std::size_t>(tree.nodes[node].feature)][i] <
                              tree.nodes[node].threshold
                          ? tree.nodes[node].left
                          : tree.nodes[node].right;
      }
      frontier = std::move(next_frontier);
    }

    // Depth limit reached: finalize any nodes still open as leaves.
    if (!frontier.empty()) {
      std::vector<int> slot(tree.nodes.size(), -1);
      for (std::size_t s = 0; s < frontier.size(); ++s) slot[frontier[s]] = static_cast<int>(s);
      std::vector<NodeAgg> total(frontier.size());
      for (std::size_t i = 0; i < n; ++i) {
        const int s = slot[row_node[i]];
        if (s >= 0) {
          total[s].g += grad[i];
          total[s].h += hess[i];
        }
      }
      for (std::size_t s = 0; s < frontier.size(); ++s) {
        TreeNode& leaf = tree.nodes[frontier[s]];
        leaf.feature = -1;
        leaf.value = -total[s].g / (total[s].h + params.reg_lambda) * params.learning_rate;
      }
    }

    for (std::size_t i = 0; i < n; ++i) margin[i] += tree.nodes[row_node[i]].value;
    model.trees_.push_back(std::move(tree));
  }
  return model;
}

double GbdtModel::predict_margin(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_features_) {
    throw FeatureContractError("feature vector length " + std::to_string(x.size()) +
                               " does not match model width " + std::to_string(n_features_));
  }
  double m = std::log(params_.base_score / (1.0 - params_.base_score));
  for (const Tree& t : trees_) m += t.predict(x);
  return m;
}

double GbdtModel::predict_proba_one(std::span<const double> x) const {
  return sigmoid(predict_margin(x));
}

std::vector<double> GbdtModel::predict_proba(const std::vector<std::vector<double>>& X) const {
  std::vector<double> out;
  out.reserve(X.size());
  for (const auto& row : X) out.push_back(predict_proba_one(row));
  return out;
}

nlohmann::json GbdtModel::to_json() const {
  nlohmann::json j;
  j["params"] = {{"max_depth", params_.max_depth},
                 {"learning_rate", params_.learning_rate},
                 {"n_trees", params_.n_trees},
                 {"reg_lambda", params_.reg_lambda},
                 {"min_child_weight", params_.min_child_weight},
                 {"gamma", params_.gamma},
                 {"pos_weight", params_.pos_weight},
                 {"base_score", params_.base_score}};
  j["n_features"] = n_features_;
  j["feature_gain"] = feature_gain_;
  nlohmann::json trees = nlohmann::json::array();
  for (const Tree& t : trees_) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const TreeNode& nd : t.nodes) {
      nodes.push_back({nd.feature, nd.threshold, nd.left, nd.right, nd.value});
    }
    trees.push_back(std::move(nodes));
  }
  j["trees"] = std::move(trees);
  return j;
}

GbdtModel GbdtModel::from_json(const nlohmann::json& j) {
  GbdtModel m;
  const auto& p = j.at("params");
  m.params_.max_depth = p.at("max_depth").get<int>();
  m.params_.learning_rate = p.at("learning_rate").get<double>();
  m.params_.n_trees = p.at("n_trees").get<int>();
  m.params_.reg_lambda = p.at("reg_lambda").get<double>();
  m.params_.min_child_weight = p.at("min_child_weight").get<double>();
  m.params_.gamma = p.at("gamma").get<double>();
  m.params_.pos_weight = p.at("pos_weight").get<double>();
  m.params_.base_score = p.at("base_score").get<double>();
  m.n_features_ = j.at("n_features").get<int>();
  m.feature_gain_ = j.at("feature_gain").get<std::vector<double>>();
  for (const auto& tj : j.at("trees")) {
    Tree t;
    for (const auto& nj : tj) {
      TreeNode nd;
      nd.feature = nj.at(0).get<int>();
      nd.threshold = nj.at(1).get<double>();
      nd.left = nj.at(2).get<int>();
      nd.right = nj.at(3).get<int>();
      nd.value = nj.at(4).get<double>();
      t.nodes.push_back(nd);
    }
    m.trees_.push_back(std::move(t));
  }
  return m;
}

}  // namespace floodlens
