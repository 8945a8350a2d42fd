#include <doctest.h>

#include <set>

#include "floodlens/errors.hpp"
#include "floodlens/geogrid.hpp"
#include "floodlens/rng.hpp"

using namespace floodlens;

TEST_SUITE("geogrid") {

TEST_CASE("cell_of floors fractional coordinates") {
  CHECK(cell_of(0.5, 0.5) == GridCell{0, 0});
  CHECK(cell_of(-0.5, -0.5) == GridCell{-1, -1});
  CHECK(cell_of(42.36, -71.06) == GridCell{42, -72});
}

TEST_CASE("boundary policy clamps the pole and wraps the antimeridian") {
  CHECK(cell_of(90.0, 180.0) == GridCell{89, -180});
  CHECK(cell_of(90.0, 0.0) == GridCell{89, 0});
  CHECK(cell_of(0.0, 180.0) == GridCell{0, -180});
  CHECK(cell_of(-90.0, -180.0) == GridCell{-90, -180});
}

TEST_CASE("out-of-range coordinates are rejected") {
  CHECK_THROWS_AS(cell_of(90.0001, 0.0), CoordinateRangeError);
  CHECK_THROWS_AS(cell_of(-91.0, 0.0), CoordinateRangeError);
  CHECK_THROWS_AS(cell_of(0.0, 180.5), CoordinateRangeError);
  CHECK_THROWS_AS(cell_of(0.0, -200.0), CoordinateRangeError);
}

TEST_CASE("grid_id encoding matches the row-major layout") {
  CHECK(grid_id(GridCell{0, 0}).value() == 32580);
  CHECK(grid_id(GridCell{-90, -180}).value() == 0);
  CHECK(grid_id(GridCell{89, 179}).value() == 64799);
}

TEST_CASE("cell_of_id inverts grid_id on the named examples") {
  CHECK(cell_of_id(GridId(32580)) == GridCell{0, 0});
  CHECK(cell_of_id(GridId(0)) == GridCell{-90, -180});
  CHECK(cell_of_id(GridId(64799)) == GridCell{89, 179});
}

TEST_CASE("grid id range is validated") {
  CHECK_THROWS_AS(GridId(-1), CoordinateRangeError);
  CHECK_THROWS_AS(GridId(64800), CoordinateRangeError);
}

TEST_CASE("round trip is exact and injective over all 64800 cells") {
  std::set<int> seen;
  for (int lat = -90; lat <= 89; ++lat) {
    for (int lon = -180; lon <= 179; ++lon) {
      const GridCell cell{lat, lon};
      const GridId id = grid_id(cell);
      CHECK(cell_of_id(id) == cell);
      seen.insert(id.value());
    }
  }
  CHECK(seen.size() == 64800);
  CHECK(*seen.begin() == 0);
  CHECK(*seen.rbegin() == 64799);
}

TEST_CASE("returned cell contains the point") {
  Rng rng(20260810);
  for (int i = 0; i < 5000; ++i) {
    const double lat = rng.uniform(-90.0, 90.0);
    const double lon = rng.uniform(-180.0, 180.0);
    const GridCell c = cell_of(lat, lon);
    if (lat < 90.0) {
      CHECK(c.lat_floor <= lat);
      CHECK(lat < c.lat_floor + 1);
    }
    if (lon < 180.0) {
      CHECK(c.lon_floor <= lon);
      CHECK(lon < c.lon_floor + 1);
    }
  }
}

}  // TEST_SUITE
