#include <doctest.h>

#include <sstream>

#include "floodlens/featstat.hpp"
#include "support/fixtures.hpp"

using namespace floodlens;
using namespace floodlens::testing;

namespace {

constexpr int kFlood = static_cast<int>(DisasterType::flood);
constexpr int kStorm = static_cast<int>(DisasterType::storm);
constexpr int kQuake = static_cast<int>(DisasterType::earthquake);

}  // namespace

TEST_SUITE("featstat") {

TEST_CASE("hand aggregation of a three-event fixture") {
  const GridId g = grid_id(cell_of(10.5, 20.5));
  const auto table = EventTable::from_events({
      make_event("A", DisasterType::flood, 2001, 10.5, 20.5, "P", 1.0e6),
      make_event("B", DisasterType::flood, 2001, 10.6, 20.6, "P"),
      make_event("C", DisasterType::storm, 2001, 10.7, 20.7, "P"),
  });
  const GridYearFeatures row = aggregate_year(table, g, 2001);
  CHECK(row.count[kFlood] == 2);
  CHECK(row.binary[kFlood] == 1);
  CHECK(row.damage[kFlood] == 1.0e6);
  CHECK(row.count[kStorm] == 1);
  CHECK(row.binary[kStorm] == 1);
  CHECK(row.damage[kStorm] == 0.0);
  for (int t = 0; t < kDisasterTypeCount; ++t) {
    if (t == kFlood || t == kStorm) continue;
    CHECK(row.count[t] == 0);
    CHECK(row.binary[t] == 0);
    CHECK(row.damage[t] == 0.0);
  }
  CHECK(row.year_feature == 2001.0);
}

TEST_CASE("empty selection yields all-zero features") {
  const GridId g = grid_id(cell_of(0.5, 0.5));
  const GridYearFeatures row = aggregate_year(EventTable{}, g, 1999);
  for (int t = 0; t < kDisasterTypeCount; ++t) {
    CHECK(row.count[t] == 0);
    CHECK(row.binary[t] == 0);
    CHECK(row.damage[t] == 0.0);
  }
  CHECK(row.year_feature == 1999.0);
}

TEST_CASE("single earthquake with damage") {
  const GridId g = grid_id(cell_of(5.5, 5.5));
  const auto table = EventTable::from_events({
      make_event("A", DisasterType::earthquake, 1990, 5.5, 5.5, "Q", 2.5e7),
  });
  const GridYearFeatures row = aggregate_year(table, g, 1990);
  CHECK(row.count[kQuake] == 1);
  CHECK(row.binary[kQuake] == 1);
  CHECK(row.damage[kQuake] == 2.5e7);
  CHECK(row.count[kFlood] == 0);
}

TEST_CASE("locality: events in other grids or years do not leak") {
  const GridId g = grid_id(cell_of(10.5, 20.5));
  const auto table = EventTable::from_events({
      make_event("A", DisasterType::flood, 2001, 10.5, 20.5),
      make_event("B", DisasterType::flood, 2002, 10.5, 20.5),   // other year
      make_event("C", DisasterType::flood, 2001, 50.5, 20.5),   // other grid
  });
  const GridYearFeatures row = aggregate_year(table, g, 2001);
  CHECK(row.count[kFlood] == 1);
}

TEST_CASE("feature matrix is dense and deterministically ordered") {
  const auto table = EventTable::from_events({
      make_event("A", DisasterType::flood, 2001, 10.5, 20.5),
  });
  std::set<GridId> grids{grid_id(cell_of(10.5, 20.5)), grid_id(cell_of(30.5, 40.5))};
  const auto rows = feature_matrix(table, grids, StudyWindow{2000, 2002});
  REQUIRE(rows.size() == 6);  // 2 grids x 3 years
  // ordered by (grid, year)
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const bool ordered = rows[i - 1].grid < rows[i].grid ||
                         (rows[i - 1].grid == rows[i].grid && rows[i - 1].year < rows[i].year);
    CHECK(ordered);
  }
  std::ostringstream a, b;
  write_feature_csv(a, feature_matrix(table, grids, StudyWindow{2000, 2002}));
  write_feature_csv(b, rows);
  CHECK(a.str() == b.str());
}

TEST_CASE("conservation: per-type counts sum to the event totals") {
  std::vector<GeoEvent> events;
  int id = 0;
  for (int year = 2000; year <= 2004; ++year) {
    for (int k = 0; k < (year % 3) + 1; ++k) {
      events.push_back(make_event("F" + std::to_string(id++), DisasterType::flood, year, 10.5, 20.5));
      events.push_back(make_event("S" + std::to_string(id++), DisasterType::storm, year, 30.5, 40.5));
    }
  }
  const auto table = EventTable::from_events(events);
  std::set<GridId> grids{grid_id(cell_of(10.5, 20.5)), grid_id(cell_of(30.5, 40.5))};
  const auto rows = feature_matrix(table, grids, StudyWindow{2000, 2004});
  std::array<long, kDisasterTypeCount> sums{};
  for (const auto& row : rows) {
    for (int t = 0; t < kDisasterTypeCount; ++t) sums[t] += row.count[t];
  }
  CHECK(sums[kFlood] == static_cast<long>(table.size()) / 2);
  CHECK(sums[kStorm] == static_cast<long>(table.size()) / 2);
  for (const auto& row : rows) {
    for (int t = 0; t < kDisasterTypeCount; ++t) {
      CHECK(row.binary[t] == std::min(row.count[t], 1));
    }
  }
}

TEST_CASE("feature layout has 25 names in the canonical order") {
  const auto& names = stat_feature_names();
  REQUIRE(names.size() == 25);
  CHECK(names[0] == "flood_count");
  CHECK(names[1] == "flood_binary");
  CHECK(names[2] == "flood_damage");
  CHECK(names[3] == "storm_count");
  CHECK(names[21] == "mass_movement_dry_count");
  CHECK(names[24] == "year");
}

TEST_CASE("csv header matches the fixed column order") {
  std::ostringstream out;
  write_feature_csv(out, {});
  const std::string header = out.str();
  CHECK(header.rfind("grid,year,flood_count,flood_binary,flood_damage,storm_count", 0) == 0);
  CHECK(header.find("mass_movement_dry_damage,year\n") != std::string::npos);
}

}  // TEST_SUITE
