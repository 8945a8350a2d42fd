#include <doctest.h>

#include <fstream>

#include "floodlens/errors.hpp"
#include "floodlens/events.hpp"
#include "floodlens/io.hpp"
#include "support/fixtures.hpp"

using namespace floodlens;
using namespace floodlens::testing;

namespace {

ParseResult parse_fixture(const std::optional<std::filesystem::path>& damages = std::nullopt) {
  IngestConfig config;
  return parse_events(test_data_dir() / "disasters_100.csv", damages, config);
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("disaster type parsing is case/space/underscore insensitive") {
  CHECK(parse_disaster_type("flood") == DisasterType::flood);
  CHECK(parse_disaster_type("FLOOD") == DisasterType::flood);
  CHECK(parse_disaster_type("Extreme Temperature") == DisasterType::extreme_temperature);
  CHECK(parse_disaster_type("extreme_temperature") == DisasterType::extreme_temperature);
  CHECK(parse_disaster_type("Mass Movement (Dry)") == DisasterType::mass_movement_dry);
  CHECK(parse_disaster_type("mass_movement_dry") == DisasterType::mass_movement_dry);
  CHECK(parse_disaster_type("Volcanic activity") == DisasterType::volcanic_activity);
  CHECK(!parse_disaster_type("Tsunami").has_value());
  CHECK(!parse_disaster_type("").has_value());
}

TEST_CASE("direct field mapping with damage join") {
  TempDir dir("ingest_direct");
  write_file_atomic(dir / "d.csv",
                    "record_id,disaster_type,year,lat,lon,location_name\n"
                    "X,flood,2001,42.36,-71.06,Boston\n");
  write_file_atomic(dir / "c.csv", "record_id,damage_cost\nX,5000000\n");
  IngestConfig config;
  const ParseResult res = parse_events(dir / "d.csv", dir / "c.csv", config);
  REQUIRE(res.table.size() == 1);
  const GeoEvent& e = res.table.events()[0];
  CHECK(e.type == DisasterType::flood);
  CHECK(e.year == 2001);
  CHECK(e.grid == grid_id(cell_of(42.36, -71.06)));
  REQUIRE(e.damage_cost.has_value());
  CHECK(*e.damage_cost == 5.0e6);
  CHECK(res.stats.damage_joined == 1);
}

TEST_CASE("unknown type is dropped and counted") {
  TempDir dir("ingest_unknown");
  write_file_atomic(dir / "d.csv",
                    "record_id,disaster_type,year,lat,lon,location_name\n"
                    "A,flood,2001,1.0,1.0,P\n"
                    "B,Tsunami,2001,1.0,1.0,P\n");
  const ParseResult res = parse_events(dir / "d.csv", std::nullopt, IngestConfig{});
  CHECK(res.table.size() == 1);
  REQUIRE(res.rejects.size() == 1);
  CHECK(res.rejects[0].reason == "unknown_disaster_type");
  CHECK(res.rejects[0].record_id == "B");
}

TEST_CASE("bundled 100-row fixture yields 97 events and 3 rejects") {
  const ParseResult res = parse_fixture();
  CHECK(res.stats.rows_in == 100);
  CHECK(res.table.size() == 97);
  CHECK(res.rejects.size() == 3);
  CHECK(res.stats.accepted + res.stats.rejected == res.stats.rows_in);
}

TEST_CASE("damage join statistics on the bundled fixture") {
  const ParseResult res = parse_fixture(test_data_dir() / "damages.csv");
  CHECK(res.stats.damage_rows == 37);
  CHECK(res.stats.damage_joined == 31);
  CHECK(res.stats.damage_unmatched == 4);  // three rejected events + one unknown id
  CHECK(res.stats.damage_rejected == 2);   // duplicate id + negative cost
}

TEST_CASE("grid is always consistent with the coordinates") {
  const ParseResult res = parse_fixture();
  for (const GeoEvent& e : res.table.events()) {
    CHECK(e.grid == grid_id(cell_of(e.lat, e.lon)));
  }
}

TEST_CASE("parsing is deterministic: serialized tables are byte-identical") {
  const ParseResult a = parse_fixture(test_data_dir() / "damages.csv");
  const ParseResult b = parse_fixture(test_data_dir() / "damages.csv");
  CHECK(a.table.to_csv() == b.table.to_csv());
  CHECK(rejects_to_jsonl(a.rejects) == rejects_to_jsonl(b.rejects));
}

TEST_CASE("event table round-trips through its CSV form") {
  TempDir dir("ingest_roundtrip");
  const ParseResult res = parse_fixture(test_data_dir() / "damages.csv");
  write_file_atomic(dir / "events.csv", res.table.to_csv());
  const EventTable reloaded = EventTable::read_csv(dir / "events.csv");
  CHECK(reloaded.to_csv() == res.table.to_csv());
}

TEST_CASE("missing file and malformed header are fatal") {
  CHECK_THROWS_AS(parse_events("/nonexistent/nowhere.csv", std::nullopt, IngestConfig{}), IoError);
  TempDir dir("ingest_header");
  write_file_atomic(dir / "bad.csv", "a,b,c\n1,2,3\n");
  CHECK_THROWS_AS(parse_events(dir / "bad.csv", std::nullopt, IngestConfig{}), SchemaError);
}

TEST_CASE("duplicate record ids are rejected rows") {
  TempDir dir("ingest_dup");
  write_file_atomic(dir / "d.csv",
                    "record_id,disaster_type,year,lat,lon,location_name\n"
                    "A,flood,2001,1.0,1.0,P\n"
                    "A,storm,2002,2.0,2.0,Q\n");
  const ParseResult res = parse_events(dir / "d.csv", std::nullopt, IngestConfig{});
  CHECK(res.table.size() == 1);
  REQUIRE(res.rejects.size() == 1);
  CHECK(res.rejects[0].reason == "duplicate_record_id");
}

TEST_CASE("year outside the study window is rejected") {
  TempDir dir("ingest_window");
  write_file_atomic(dir / "d.csv",
                    "record_id,disaster_type,year,lat,lon,location_name\n"
                    "A,flood,1901,1.0,1.0,P\n"
                    "B,flood,2019,1.0,1.0,P\n"
                    "C,flood,2018,1.0,1.0,P\n");
  const ParseResult res = parse_events(dir / "d.csv", std::nullopt, IngestConfig{});
  CHECK(res.table.size() == 1);
  CHECK(res.rejects.size() == 2);
  CHECK(res.rejects[0].reason == "year_out_of_window");
}

TEST_CASE("unique_grids") {
  CHECK(unique_grids(EventTable{}).empty());
  const auto table = EventTable::from_events({
      make_event("A", DisasterType::flood, 2000, 10.2, 20.2),
      make_event("B", DisasterType::storm, 2001, 10.7, 20.7),  // same cell
      make_event("C", DisasterType::flood, 2001, 11.2, 20.2),
  });
  CHECK(unique_grids(table).size() == 2);
}

}  // TEST_SUITE
