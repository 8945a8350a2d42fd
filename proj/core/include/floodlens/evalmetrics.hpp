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

#ifndef FLOODLENS_EVALMETRICS_HPP
#define FLOODLENS_EVALMETRICS_HPP

#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace floodlens {

/// ROC AUC as the Mann-Whitney statistic: the probability that a random
/// positive is scored above a random negative, with ties counted 1/2.
/// Throws MetricError unless both classes are present.
double rocauc(std::span<const double> scores, std::span<const int> labels);

double accuracy(std::span<const int> pred, std::span<const int> labels);

/// F1 = 2·precision·recall / (precision + recall); defined as 0 when the
/// predictor emits no positives or there are no true positives.
double f1(std::span<const int> pred, std::span<const int> labels);

/// (TPR + TNR) / 2. Throws MetricError unless both classes are present.
double balanced_accuracy(std::span<const int> pred, std::span<const int> labels);

/// One evaluated (model, horizon) run. `preds` are the thresholded decisions;
/// `scores` feed ROCAUC. The deterministic baseline passes its 0/1 decisions
/// as scores, which is the only signal it has.
struct EvalRun {
  std::string model;
  int horizon = 0;
  std::vector<double> scores;
  std::vector<int> preds;
  std::vector<int> labels;
  int feature_count = 0;
};

struct EvalRow {
  std::string model;
  int horizon = 0;
  int feature_count = 0;
  double rocauc = 0.0;
  double accuracy = 0.0;
  double f1 = 0.0;
  double balanced_accuracy = 0.0;
  std::size_t n_test = 0;
};

struct EvalReport {
  std::vector<EvalRow> rows;  // ordered by (horizon, model)

  std::string to_csv() const;
  /// Human-readable fixed-width grid, one row per (horizon, model).
  std::string to_text() const;
};

/// Aggregates runs into a report. Runs sharing a horizon must carry identical
/// label vectors (same test set); otherwise a ReportError is thrown.
EvalReport build_report(const std::vector<EvalRun>& runs);

/// ROC points (FPR, TPR) from (0,0) to (1,1), one step per distinct score.
std::vector<std::pair<double, double>> roc_curve(std::span<const double> scores,
                                                 std::span<const int> labels);

}  // namespace floodlens

#endif  // FLOODLENS_EVALMETRICS_HPP
