#include <doctest.h>

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "floodlens/dataset.hpp"
#include "floodlens/errors.hpp"
#include "floodlens/rng.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace floodlens;
using namespace floodlens::testing;

namespace {

/// `n_grids` cells, each with two floods early in the window so every grid
/// passes the >= 2 flood filter, plus scattered storms.
EventTable dense_world(int n_grids, int first_year) {
  std::vector<GeoEvent> events;
  int id = 0;
  for (int g = 0; g < n_grids; ++g) {
    const double lat = 0.5 + g;
    const double lon = 10.5;
    events.push_back(make_event("F" + std::to_string(id++), DisasterType::flood, first_year, lat, lon));
    events.push_back(
        make_event("F" + std::to_string(id++), DisasterType::flood, first_year + 2, lat, lon));
    if (g % 2 == 0) {
      events.push_back(
          make_event("S" + std::to_string(id++), DisasterType::storm, first_year + 1, lat, lon));
    }
  }
  return EventTable::from_events(events);
}

EmbeddingMap constant_embeddings(const EventTable& table, std::size_t dim) {
  EmbeddingMap map;
  for (GridId g : unique_grids(table)) {
    std::vector<double> v(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      v[i] = 0.01 * static_cast<double>(i) + 1e-4 * g.value();
    }
    map[g] = v;
  }
  return map;
}

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("flood_label windows") {
  const double lat = 3.5, lon = 4.5;
  const GridId g = grid_id(cell_of(lat, lon));
  const auto table = EventTable::from_events({
      make_event("A", DisasterType::flood, 2000, lat, lon),
      make_event("B", DisasterType::flood, 2003, lat, lon),
  });
  const StudyWindow window{1960, 2018};
  CHECK(flood_label(table, g, 2000, 2, window) == 0);  // 2001-2002 quiet
  CHECK(flood_label(table, g, 2001, 2, window) == 1);  // 2003 inside
  CHECK(flood_label(table, g, 1999, 1, window) == 1);  // 2000 inside
  CHECK(flood_label(table, g, 2003, 5, window) == 0);

  const auto empty = EventTable{};
  for (int year : {1960, 1990, 2010}) {
    for (int n = 1; n <= 5; ++n) CHECK(flood_label(empty, g, year, n, window) == 0);
  }
  CHECK_THROWS_AS(flood_label(table, g, 2017, 2, window), HorizonError);
}

TEST_CASE("flood_label agrees with the brute-force event scan on 1000 random cases") {
  Rng rng(424242);
  std::vector<GeoEvent> events;
  std::vector<GridId> grids;
  for (int g = 0; g < 12; ++g) {
    grids.push_back(grid_id(cell_of(10.5 + g, 55.5)));
  }
  int id = 0;
  for (int i = 0; i < 400; ++i) {
    const int g = static_cast<int>(rng.uniform_index(grids.size()));
    const auto type = rng.bernoulli(0.5) ? DisasterType::flood : DisasterType::storm;
    events.push_back(make_event("E" + std::to_string(id++), type, 1960 + rng.uniform_int(0, 58),
                                10.5 + g, 55.5));
  }
  const auto table = EventTable::from_events(events);
  const StudyWindow window{1960, 2018};
  for (int trial = 0; trial < 1000; ++trial) {
    const GridId g = grids[rng.uniform_index(grids.size())];
    const int n = rng.uniform_int(1, 5);
    const int year = rng.uniform_int(1960, 2018 - n);
    CHECK(flood_label(table, g, year, n, window) == brute_flood_label(events, g, year, n));
  }
}

TEST_CASE("filter_grids thresholds at two floods") {
  std::vector<GeoEvent> events;
  int id = 0;
  auto add_floods = [&](double lat, int count) {
    for (int i = 0; i < count; ++i) {
      events.push_back(
          make_event("E" + std::to_string(id++), DisasterType::flood, 2000 + i, lat, 7.5));
    }
  };
  add_floods(1.5, 0);
  add_floods(2.5, 1);
  add_floods(3.5, 2);
  add_floods(4.5, 5);
  // storms never count
  events.push_back(make_event("S1", DisasterType::storm, 2001, 1.5, 7.5));
  const auto table = EventTable::from_events(events);
  const auto selected = filter_grids(table);
  CHECK(selected.size() == 2);
  CHECK(selected.count(grid_id(cell_of(3.5, 7.5))) == 1);
  CHECK(selected.count(grid_id(cell_of(4.5, 7.5))) == 1);
  CHECK(filter_grids(EventTable{}).empty());
}

TEST_CASE("assemble cardinality: 10 grids, 1960-2018, horizon 5 -> 540 examples") {
  const auto table = dense_world(10, 1961);
  AssembleOptions options;
  options.window = StudyWindow{1960, 2018};
  const DatasetSplit split = assemble(table, nullptr, "statistical", 5, 1, options);
  CHECK(split.train.size() + split.test.size() == 540);
  CHECK(split.feature_names.size() == 25);
  for (const auto& ex : split.train) CHECK(ex.features.size() == 25);
  // 70/30 within one example
  CHECK(std::llabs(static_cast<long long>(split.train.size()) -
                   std::llround(0.7 * 540.0)) <= 1);
}

TEST_CASE("multimodal concatenation appends the embedding block") {
  const auto table = dense_world(6, 1991);
  const auto embeddings = constant_embeddings(table, 32);
  AssembleOptions options;
  options.window = StudyWindow{1990, 2009};
  const DatasetSplit split = assemble(table, &embeddings, "transfer_head", 2, 1, options);
  CHECK(split.feature_names.size() == 57);  // 24 + year + 32
  CHECK(split.feature_names[24] == "year");
  CHECK(split.feature_names[25] == "emb_0");
  CHECK(split.feature_names[56] == "emb_31");
  for (const auto& ex : split.test) CHECK(ex.features.size() == 57);
}

TEST_CASE("missing embedding for a filtered grid is a join error") {
  const auto table = dense_world(4, 1991);
  auto embeddings = constant_embeddings(table, 8);
  embeddings.erase(embeddings.begin());
  AssembleOptions options;
  options.window = StudyWindow{1990, 2009};
  CHECK_THROWS_AS(assemble(table, &embeddings, "transfer_head", 1, 1, options), JoinError);
}

TEST_CASE("mode/embedding mismatches are config errors") {
  const auto table = dense_world(4, 1991);
  const auto embeddings = constant_embeddings(table, 8);
  AssembleOptions options;
  options.window = StudyWindow{1990, 2009};
  CHECK_THROWS_AS(assemble(table, &embeddings, "statistical", 1, 1, options), ConfigError);
  CHECK_THROWS_AS(assemble(table, nullptr, "transfer_head", 1, 1, options), ConfigError);
  CHECK_THROWS_AS(assemble(table, nullptr, "statistical", 0, 1, options), ConfigError);
  CHECK_THROWS_AS(assemble(table, nullptr, "statistical", 6, 1, options), ConfigError);
}

TEST_CASE("split determinism: same seed gives the identical partition") {
  const auto table = dense_world(8, 1992);
  AssembleOptions options;
  options.window = StudyWindow{1990, 2009};
  auto key = [](const DatasetSplit& s) {
    std::vector<std::pair<int, int>> ids;
    for (const auto& ex : s.train) ids.emplace_back(ex.grid.value(), ex.year);
    return ids;
  };
  const auto a = assemble(table, nullptr, "statistical", 2, 77, options);
  const auto b = assemble(table, nullptr, "statistical", 2, 77, options);
  const auto c = assemble(table, nullptr, "statistical", 2, 78, options);
  CHECK(key(a) == key(b));
  CHECK(key(a) != key(c));
}

TEST_CASE("grouped and temporal split modes") {
  const auto table = dense_world(10, 1992);
  AssembleOptions options;
  options.window = StudyWindow{1990, 2009};

  options.split_mode = SplitMode::by_grid;
  const auto grouped = assemble(table, nullptr, "statistical", 1, 5, options);
  std::set<int> train_grids, test_grids;
  for (const auto& ex : grouped.train) train_grids.insert(ex.grid.value());
  for (const auto& ex : grouped.test) test_grids.insert(ex.grid.value());
  for (int g : test_grids) CHECK(train_grids.count(g) == 0);

  options.split_mode = SplitMode::temporal;
  const auto temporal = assemble(table, nullptr, "statistical", 1, 5, options);
  int max_train_year = -10000, min_test_year = 10000;
  for (const auto& ex : temporal.train) max_train_year = std::max(max_train_year, ex.year);
  for (const auto& ex : temporal.test) min_test_year = std::min(min_test_year, ex.year);
  CHECK(max_train_year < min_test_year);
}

TEST_CASE("select_features drops constants and honors the size bound") {
  Rng rng(9);
  std::vector<LabeledExample> train;
  for (int i = 0; i < 200; ++i) {
    LabeledExample ex;
    const double signal = rng.uniform01();
    ex.label = signal > 0.5 ? 1 : 0;
    ex.features = {signal, 3.14, rng.uniform01(), signal + 0.01 * rng.uniform01(), rng.uniform01()};
    train.push_back(std::move(ex));
  }
  SUBCASE("constant column excluded") {
    const auto selected = select_features(train, 64);
    CHECK(std::find(selected.begin(), selected.end(), 1) == selected.end());
    CHECK(selected.size() == 4);
  }
  SUBCASE("K smaller than the survivor count truncates by importance") {
    const auto selected = select_features(train, 2);
    CHECK(selected.size() == 2);
    // the signal column and its duplicate dominate
    CHECK(std::find(selected.begin(), selected.end(), 0) != selected.end());
  }
  SUBCASE("all-constant input is degenerate") {
    for (auto& ex : train) ex.features = {1.0, 2.0};
    CHECK_THROWS_AS(select_features(train, 4), DegenerateDataError);
  }
}

TEST_CASE("selection is computed on the train slice and applied to both") {
  const auto table = dense_world(8, 1992);
  AssembleOptions options;
  options.window = StudyWindow{1990, 2009};
  options.select_top_k = 6;
  const auto split = assemble(table, nullptr, "statistical", 1, 3, options);
  CHECK(!split.selected.empty());
  CHECK(split.selected.size() <= 6);
  for (int f : split.selected) {
    CHECK(f >= 0);
    CHECK(f < static_cast<int>(split.feature_names.size()));
  }
  CHECK(std::is_sorted(split.selected.begin(), split.selected.end()));
  const auto row = selected_features(split.test[0], split.selected);
  CHECK(row.size() == split.selected.size());
}

TEST_CASE("manifest records layout, selection and counts") {
  const auto table = dense_world(5, 1995);
  AssembleOptions options;
  options.window = StudyWindow{1990, 2009};
  const auto split = assemble(table, nullptr, "statistical", 2, 11, options);
  const auto manifest = dataset_manifest(split);
  CHECK(manifest.at("architecture") == "statistical");
  CHECK(manifest.at("horizon") == 2);
  CHECK(manifest.at("feature_names").size() == 25);
  CHECK(manifest.at("feature_count").get<std::size_t>() == split.selected.size());
  CHECK(manifest.at("n_train").get<std::size_t>() == split.train.size());
  // concatenation order: stats block then year (then embeddings when present)
  CHECK(manifest.at("feature_names")[0] == "flood_count");
  CHECK(manifest.at("feature_names")[24] == "year");
}

}  // TEST_SUITE
