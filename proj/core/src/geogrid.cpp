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

#include "floodlens/geogrid.hpp"

#include <cmath>
#include <string>

#include "floodlens/errors.hpp"

namespace floodlens {

GridId::GridId(int value) : value_(value) {
  if (value < 0 || value >= kCount) {
    throw CoordinateRangeError("grid id out of range [0, 64799]: " + std::to_string(value));
  }
}

GridCell cell_of(double lat, double lon) {
  if (!(lat >= -90.0 && lat <= 90.0) || !(lon >= -180.0 && lon <= 180.0)) {
    throw CoordinateRangeError("coordinates out of range: lat=" + std::to_string(lat) +
                               " lon=" + std::to_string(lon));
  }
  int lat_floor = static_cast<int>(std::floor(lat));
  int lon_floor = static_cast<int>(std::floor(lon));
  if (lat_floor == 90) lat_floor = 89;    // pole clamps into the top row
  if (lon_floor == 180) lon_floor = -180;  // antimeridian wraps
  return GridCell{lat_floor, lon_floor};
}

GridId grid_id(GridCell cell) {
  return GridId((cell.lat_floor + 90) * 360 + (cell.lon_floor + 180));
}

GridCell cell_of_id(GridId id) {
  const int v = id.value();
  return GridCell{v / 360 - 90, v % 360 - 180};
}

}  // namespace floodlens
