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

#include "floodlens/evalmetrics.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

#include "floodlens/csv.hpp"
#include "floodlens/errors.hpp"
#include "floodlens/num.hpp"

namespace floodlens {

namespace {

struct Confusion {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

Confusion confusion(std::span<const int> pred, std::span<const int> labels) {
  if (pred.size() != labels.size()) throw MetricError("pred/label length mismatch");
  if (pred.empty()) throw MetricError("empty input");
  Confusion c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (labels[i] == 1) {
      pred[i] == 1 ? ++c.tp : ++c.fn;
    } else {
      pred[i] == 1 ? ++c.fp : ++c.tn;
    }
  }
  return c;
}

}  // namespace

double rocauc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw MetricError("score/label length mismatch");
  const std::size_t n = scores.size();
  std::size_t n_pos = 0;
  for (int y : labels) n_pos += (y == 1);
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw MetricError("ROCAUC undefined: labels contain a single class");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Average ranks over tied scores, then the Mann-Whitney U statistic.
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;  // ranks are 1-based
    for (std::size_t k = i; k <= j; ++k) {
      if (labels[order[k]] == 1) rank_sum_pos += avg_rank;
    }
    i = j + 1;
  }
  const double u = rank_sum_pos - 0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double accuracy(std::span<const int> pred, std::span<const int> labels) {
  const Confusion c = confusion(pred, labels);
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(pred.size());
}

double f1(std::span<const int> pred, std::span<const int> labels) {
  const Confusion c = confusion(pred, labels);
  const double denom = static_cast<double>(2 * c.tp + c.fp + c.fn);
  if (denom == 0.0) return 0.0;
  return 2.0 * static_cast<double>(c.tp) / denom;
}

double balanced_accuracy(std::span<const int> pred, std::span<const int> labels) {
  const Confusion c = confusion(pred, labels);
  if (c.tp + c.fn == 0 || c.tn + c.fp == 0) {
    throw MetricError("balanced accuracy undefined: labels contain a single class");
  }
  const double tpr = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  const double tnr = static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
  return 0.5 * (tpr + tnr);
}

std::string EvalReport::to_csv() const {
  std::ostringstream out;
  out << "model,horizon,feature_count,rocauc,accuracy,f1,balanced_accuracy,n_test\n";
  for (const EvalRow& r : rows) {
    write_csv_row(out, {r.model, std::to_string(r.horizon), std::to_string(r.feature_count),
                        format_double(r.rocauc), format_double(r.accuracy), format_double(r.f1),
                        format_double(r.balanced_accuracy), std::to_string(r.n_test)});
  }
  return out.str();
}

std::string EvalReport::to_text() const {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-28s %7s %6s %8s %8s %8s %8s %7s\n", "model", "horizon",
                "feats", "rocauc", "acc", "f1", "bal_acc", "n_test");
  out << line;
  out << std::string(86, '-') << '\n';
  int last_horizon = rows.empty() ? 0 : rows.front().horizon;
  for (const EvalRow& r : rows) {
    if (r.horizon != last_horizon) {
      out << '\n';
      last_horizon = r.horizon;
    }
    std::snprintf(line, sizeof(line), "%-28s %7d %6d %8.4f %8.4f %8.4f %8.4f %7zu\n",
                  r.model.c_str(), r.horizon, r.feature_count, r.rocauc, r.accuracy, r.f1,
                  r.balanced_accuracy, r.n_test);
    out << line;
  }
  return out.str();
}

EvalReport build_report(const std::vector<EvalRun>& runs) {
  if (runs.empty()) throw ReportError("no evaluation runs");

  std::map<int, const std::vector<int>*> labels_by_horizon;
  EvalReport report;
  for (const EvalRun& run : runs) {
    if (run.labels.empty()) throw ReportError("run has no labels: " + run.model);
    auto [it, inserted] = labels_by_horizon.emplace(run.horizon, &run.labels);
    if (!inserted && *it->second != run.labels) {
      throw ReportError("inconsistent label vectors within horizon " + std::to_string(run.horizon));
    }
    EvalRow row;
    row.model = run.model;
    row.horizon = run.horizon;
    row.feature_count = run.feature_count;
    row.rocauc = rocauc(run.scores, run.labels);
    row.accuracy = accuracy(run.preds, run.labels);
    row.f1 = f1(run.preds, run.labels);
    row.balanced_accuracy = balanced_accuracy(run.preds, run.labels);
    row.n_test = run.labels.size();
    report.rows.push_back(std::move(row));
  }
  std::sort(report.rows.begin(), report.rows.end(), [](const EvalRow& a, const EvalRow& b) {
    if (a.horizon != b.horizon) return a.horizon < b.horizon;
    return a.model < b.model;
  });
  return report;
}

std::vector<std::pair<double, double>> roc_curve(std::span<const double> scores,
                                                 std::span<const int> labels) {
  if (scores.size() != labels.size() || scores.empty()) throw MetricError("bad roc_curve input");
  std::size_t n_pos = 0;
  for (int y : labels) n_pos += (y == 1);
  const std::size_t n_neg = scores.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw MetricError("roc_curve undefined for single-class labels");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  std::vector<std::pair<double, double>> points{{0.0, 0.0}};
  std::size_t tp = 0, fp = 0, i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) {
      labels[order[k]] == 1 ? ++tp : ++fp;
    }
    points.emplace_back(static_cast<double>(fp) / static_cast<double>(n_neg),
                        static_cast<double>(tp) / static_cast<double>(n_pos));
    i = j + 1;
  }
  return points;
}

}  // namespace floodlens
