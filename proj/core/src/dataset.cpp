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

#include "floodlens/dataset.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "floodlens/csv.hpp"
#include "floodlens/errors.hpp"
#include "floodlens/featstat.hpp"
#include "floodlens/gbdt.hpp"
#include "floodlens/num.hpp"
#include "floodlens/rng.hpp"

namespace floodlens {

std::string_view to_string(SplitMode mode) {
  switch (mode) {
    case SplitMode::random_examples: return "random";
    case SplitMode::by_grid: return "by_grid";
    case SplitMode::temporal: return "temporal";
  }
  return "random";
}

std::optional<SplitMode> parse_split_mode(std::string_view s) {
  if (s == "random") return SplitMode::random_examples;
  if (s == "by_grid") return SplitMode::by_grid;
  if (s == "temporal") return SplitMode::temporal;
  return std::nullopt;
}

int flood_label(const EventTable& table, GridId grid, int year, int horizon, StudyWindow window) {
  if (year + horizon > window.end) {
    throw HorizonError("label window [" + std::to_string(year + 1) + ", " +
                       std::to_string(year + horizon) + "] exceeds study window end " +
                       std::to_string(window.end));
  }
  for (const GeoEvent& e : table.at_grid(grid)) {
    if (e.type == DisasterType::flood && e.year > year && e.year <= year + horizon) return 1;
  }
  return 0;
}

std::set<GridId> filter_grids(const EventTable& table, int min_flood_count) {
  std::map<GridId, int> flood_counts;
  for (const GeoEvent& e : table.events()) {
    if (e.type == DisasterType::flood) ++flood_counts[e.grid];
  }
  std::set<GridId> selected;
  for (const auto& [grid, count] : flood_counts) {
    if (count >= min_flood_count) selected.insert(grid);
  }
  return selected;
}

namespace {

void split_examples(std::vector<LabeledExample>& examples, SplitMode mode, double train_fraction,
                    std::uint64_t seed, std::vector<LabeledExample>& train,
                    std::vector<LabeledExample>& test) {
  const std::size_t n = examples.size();
  Rng rng(derive_seed(seed, "dataset/split"));
  switch (mode) {
    case SplitMode::random_examples: {
      std::vector<std::size_t> order(n);
      for (std::size_t i = 0; i < n; ++i) order[i] = i;
      rng.shuffle(order);
      const std::size_t n_train =
          static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
      std::vector<char> in_train(n, 0);
      for (std::size_t i = 0; i < n_train; ++i) in_train[order[i]] = 1;
      for (std::size_t i = 0; i < n; ++i) {
        (in_train[i] ? train : test).push_back(std::move(examples[i]));
      }
      break;
    }
    case SplitMode::by_grid: {
      std::set<GridId> grid_set;
      for (const auto& ex : examples) grid_set.insert(ex.grid);
      std::vector<GridId> grids(grid_set.begin(), grid_set.end());
      rng.shuffle(grids);
      const std::size_t n_train_grids =
          static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(grids.size())));
      std::set<GridId> train_grids(grids.begin(), grids.begin() + static_cast<std::ptrdiff_t>(n_train_grids));
      for (auto& ex : examples) {
        (train_grids.count(ex.grid) ? train : test).push_back(std::move(ex));
      }
      break;
    }
    case SplitMode::temporal: {
      // Earliest years train. Cutoff = the year that brings the train share
      // closest to the requested fraction, at year granularity.
      std::map<int, std::size_t> per_year;
      for (const auto& ex : examples) ++per_year[ex.year];
      std::size_t cum = 0;
      int cutoff = per_year.begin()->first;
      double best_diff = 2.0;
      for (const auto& [year, count] : per_year) {
        cum += count;
        const double diff =
            std::abs(static_cast<double>(cum) / static_cast<double>(n) - train_fraction);
        if (diff < best_diff) {
          best_diff = diff;
          cutoff = year;
        }
      }
      for (auto& ex : examples) {
        (ex.year <= cutoff ? train : test).push_back(std::move(ex));
      }
      break;
    }
  }
}

}  // namespace

std::vector<int> select_features(const std::vector<LabeledExample>& train, int top_k) {
  if (train.empty()) throw DegenerateDataError("feature selection needs a non-empty train set");
  const std::size_t d = train[0].features.size();

  std::vector<int> non_constant;
  for (std::size_t f = 0; f < d; ++f) {
    double lo = train[0].features[f], hi = lo;
    for (const auto& ex : train) {
      lo = std::min(lo, ex.features[f]);
      hi = std::max(hi, ex.features[f]);
    }
    if (hi > lo) non_constant.push_back(static_cast<int>(f));
  }
  if (non_constant.empty()) throw DegenerateDataError("all features are constant on the train set");
  if (top_k <= 0 || static_cast<std::size_t>(top_k) >= non_constant.size()) return non_constant;

  std::size_t n_pos = 0;
  for (const auto& ex : train) n_pos += (ex.label == 1);
  if (n_pos == 0 || n_pos == train.size()) {
    // Importance is undefined on a single-class slice; keep the first K
    // non-constant features.
    non_constant.resize(static_cast<std::size_t>(top_k));
    return non_constant;
  }

  std::vector<std::vector<double>> X;
  std::vector<int> y;
  X.reserve(train.size());
  y.reserve(train.size());
  for (const auto& ex : train) {
    std::vector<double> row;
    row.reserve(non_constant.size());
    for (int f : non_constant) row.push_back(ex.features[static_cast<std::size_t>(f)]);
    X.push_back(std::move(row));
    y.push_back(ex.label);
  }

  GbdtParams params;
  params.max_depth = 3;
  params.learning_rate = 0.3;
  params.n_trees = 50;
  params.pos_weight = static_cast<double>(train.size() - n_pos) / static_cast<double>(n_pos);
  const GbdtModel probe = GbdtModel::train(X, y, params);

  std::vector<std::size_t> order(non_constant.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return probe.feature_gain()[a] > probe.feature_gain()[b];
  });
  order.resize(static_cast<std::size_t>(top_k));

  std::vector<int> selected;
  selected.reserve(order.size());
  for (std::size_t i : order) selected.push_back(non_constant[i]);
  std::sort(selected.begin(), selected.end());
  return selected;
}

DatasetSplit assemble(const EventTable& table, const EmbeddingMap* embeddings,
                      const std::string& architecture, int horizon, std::uint64_t seed,
                      const AssembleOptions& options) {
  if (horizon < 1 || horizon > 5) {
    throw ConfigError("horizon must be in [1, 5], got " + std::to_string(horizon));
  }
  const bool statistical = architecture == "statistical";
  if (statistical && embeddings != nullptr) {
    throw ConfigError("statistical mode takes no embeddings");
  }
  if (!statistical && embeddings == nullptr) {
    throw ConfigError("architecture `" + architecture + "` requires an embedding map");
  }
  const int last_year = options.window.end - horizon;
  if (last_year < options.window.start) {
    throw HorizonError("horizon " + std::to_string(horizon) + " leaves no labelable years in [" +
                       std::to_string(options.window.start) + ", " +
                       std::to_string(options.window.end) + "]");
  }

  DatasetSplit split;
  split.seed = seed;
  split.horizon = horizon;
  split.architecture = architecture;
  split.split_mode = options.split_mode;
  split.feature_names = stat_feature_names();

  std::size_t emb_dim = 0;
  if (!statistical) {
    if (embeddings->empty()) throw JoinError("embedding map is empty");
    emb_dim = embeddings->begin()->second.size();
    for (std::size_t i = 0; i < emb_dim; ++i) split.feature_names.push_back("emb_" + std::to_string(i));
  }

  const std::set<GridId> grids = filter_grids(table);
  std::vector<LabeledExample> examples;
  examples.reserve(grids.size() * static_cast<std::size_t>(last_year - options.window.start + 1));
  for (GridId grid : grids) {
    const std::vector<double>* emb = nullptr;
    if (!statistical) {
      auto it = embeddings->find(grid);
      if (it == embeddings->end()) {
        throw JoinError("no embedding for filtered grid " + std::to_string(grid.value()));
      }
      if (it->second.size() != emb_dim) {
        throw JoinError("inconsistent embedding dimension at grid " + std::to_string(grid.value()));
      }
      emb = &it->second;
    }
    for (int year = options.window.start; year <= last_year; ++year) {
      LabeledExample ex;
      ex.grid = grid;
      ex.year = year;
      ex.horizon = horizon;
      ex.features = feature_values(aggregate_year(table, grid, year));
      if (emb) ex.features.insert(ex.features.end(), emb->begin(), emb->end());
      ex.label = flood_label(table, grid, year, horizon, options.window);
      examples.push_back(std::move(ex));
    }
  }
  if (examples.empty()) throw DegenerateDataError("no grids pass the flood-count filter");

  split_examples(examples, options.split_mode, options.train_fraction, seed, split.train, split.test);
  split.selected = select_features(split.train, options.select_top_k);
  return split;
}

std::vector<double> selected_features(const LabeledExample& ex, const std::vector<int>& selected) {
  std::vector<double> out;
  out.reserve(selected.size());
  for (int f : selected) out.push_back(ex.features[static_cast<std::size_t>(f)]);
  return out;
}

void write_dataset_csv(std::ostream& out, const DatasetSplit& split) {
  out << "split,grid,year,horizon,label";
  for (const std::string& name : split.feature_names) out << ',' << name;
  out << '\n';
  auto emit = [&](const std::vector<LabeledExample>& part, const char* tag) {
    for (const LabeledExample& ex : part) {
      std::vector<std::string> fields{tag, std::to_string(ex.grid.value()), std::to_string(ex.year),
                                      std::to_string(ex.horizon), std::to_string(ex.label)};
      for (double v : ex.features) fields.push_back(format_double(v));
      write_csv_row(out, fields);
    }
  };
  emit(split.train, "train");
  emit(split.test, "test");
}

nlohmann::json dataset_manifest(const DatasetSplit& split) {
  nlohmann::json j;
  j["architecture"] = split.architecture;
  j["horizon"] = split.horizon;
  j["seed"] = split.seed;
  j["split_mode"] = std::string(to_string(split.split_mode));
  j["feature_names"] = split.feature_names;
  j["selected_indices"] = split.selected;
  j["feature_count"] = split.selected.size();
  j["n_train"] = split.train.size();
  j["n_test"] = split.test.size();
  std::size_t pos_train = 0, pos_test = 0;
  for (const auto& ex : split.train) pos_train += (ex.label == 1);
  for (const auto& ex : split.test) pos_test += (ex.label == 1);
  j["n_train_positive"] = pos_train;
  j["n_test_positive"] = pos_test;
  return j;
}

}  // namespace floodlens
