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

// Brute-force reference implementations used as independent oracles by the
// unit and acceptance suites. Deliberately naive: no sorting tricks, no
// shared code with the library implementations they check.

#ifndef FLOODLENS_TESTS_ORACLES_HPP
#define FLOODLENS_TESTS_ORACLES_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "floodlens/events.hpp"

namespace floodlens::testing {

/// All positive/negative pairs, ties worth 1/2.
inline double brute_rocauc(std::span<const double> scores, std::span<const int> labels) {
  double wins = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (labels[j] != 0) continue;
      ++pairs;
      if (scores[i] > scores[j]) {
        wins += 1.0;
      } else if (scores[i] == scores[j]) {
        wins += 0.5;
      }
    }
  }
  return wins / static_cast<double>(pairs);
}

inline double brute_accuracy(std::span<const int> pred, std::span<const int> labels) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += (pred[i] == labels[i]);
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

inline double brute_f1(std::span<const int> pred, std::span<const int> labels) {
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] == 1 && labels[i] == 1) ++tp;
    if (pred[i] == 1 && labels[i] == 0) ++fp;
    if (pred[i] == 0 && labels[i] == 1) ++fn;
  }
  if (2 * tp + fp + fn == 0) return 0.0;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

inline double brute_balanced_accuracy(std::span<const int> pred, std::span<const int> labels) {
  double tp = 0, fn = 0, tn = 0, fp = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (labels[i] == 1) {
      pred[i] == 1 ? ++tp : ++fn;
    } else {
      pred[i] == 1 ? ++fp : ++tn;
    }
  }
  return 0.5 * (tp / (tp + fn) + tn / (tn + fp));
}

/// Label oracle: linear scan over the raw event list.
inline int brute_flood_label(const std::vector<GeoEvent>& events, GridId grid, int year,
                             int horizon) {
  for (const GeoEvent& e : events) {
    if (e.grid == grid && e.type == DisasterType::flood && e.year > year &&
        e.year <= year + horizon) {
      return 1;
    }
  }
  return 0;
}

}  // namespace floodlens::testing

#endif  // FLOODLENS_TESTS_ORACLES_HPP
