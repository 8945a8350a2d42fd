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

#ifndef FLOODLENS_DATASET_HPP
#define FLOODLENS_DATASET_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "floodlens/events.hpp"
#include "floodlens/geogrid.hpp"

namespace floodlens {

/// One (grid, year) sample: features are the 24 yearly stats, the year, and
/// (in multimodal modes) the grid's text embedding. Label is 1 iff a flood
/// occurs at the grid within (year, year + horizon].
struct LabeledExample {
  GridId grid;
  int year = 0;
  int horizon = 0;
  std::vector<double> features;
  int label = 0;
};

enum class SplitMode { random_examples, by_grid, temporal };

std::string_view to_string(SplitMode mode);
std::optional<SplitMode> parse_split_mode(std::string_view s);

struct AssembleOptions {
  StudyWindow window;
  SplitMode split_mode = SplitMode::random_examples;
  double train_fraction = 0.7;
  int select_top_k = 64;
};

struct DatasetSplit {
  std::vector<LabeledExample> train;
  std::vector<LabeledExample> test;
  std::uint64_t seed = 0;
  int horizon = 0;
  std::string architecture;                // "statistical" or an embedding architecture
  SplitMode split_mode = SplitMode::random_examples;
  std::vector<std::string> feature_names;  // full concatenated layout
  std::vector<int> selected;               // ascending indices into feature_names
};

/// 1 iff any flood-type event at `grid` in years [year+1, year+horizon].
/// Throws HorizonError when year + horizon exceeds the study window.
int flood_label(const EventTable& table, GridId grid, int year, int horizon, StudyWindow window);

/// Grids with at least `min_flood_count` flood events across all years.
std::set<GridId> filter_grids(const EventTable& table, int min_flood_count = 2);

using EmbeddingMap = std::map<GridId, std::vector<double>>;

/// Builds the labeled dataset for one horizon: filtered grids × labelable
/// years, 70/30 split by `options.split_mode`, feature selection fitted on
/// the train slice only. `embeddings` must be null exactly when
/// `architecture == "statistical"`; a filtered grid without an embedding is a
/// JoinError.
DatasetSplit assemble(const EventTable& table, const EmbeddingMap* embeddings,
                      const std::string& architecture, int horizon, std::uint64_t seed,
                      const AssembleOptions& options);

/// Drops zero-variance features (on train), then keeps the top-K remaining
/// features by preliminary tree-ensemble gain. Returns ascending indices.
std::vector<int> select_features(const std::vector<LabeledExample>& train, int top_k);

void write_dataset_csv(std::ostream& out, const DatasetSplit& split);
nlohmann::json dataset_manifest(const DatasetSplit& split);

/// Extracts the selected feature columns of one example.
std::vector<double> selected_features(const LabeledExample& ex, const std::vector<int>& selected);

}  // namespace floodlens

#endif  // FLOODLENS_DATASET_HPP
