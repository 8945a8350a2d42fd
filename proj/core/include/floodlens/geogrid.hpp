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

#ifndef FLOODLENS_GEOGRID_HPP
#define FLOODLENS_GEOGRID_HPP

#include <compare>
#include <cstddef>
#include <functional>

namespace floodlens {

/// A 1°×1° cell of the global grid, identified by the floored corner.
/// lat_floor ∈ [-90, 89], lon_floor ∈ [-180, 179].
struct GridCell {
  int lat_floor = 0;
  int lon_floor = 0;

  auto operator<=>(const GridCell&) const = default;
};

/// Dense integer encoding of a GridCell, row-major from the south-west
/// corner: value = (lat_floor + 90) * 360 + (lon_floor + 180). Bijective
/// with GridCell over the 64800 cells.
class GridId {
 public:
  static constexpr int kCount = 180 * 360;

  GridId() = default;
  explicit GridId(int value);  // throws CoordinateRangeError outside [0, 64799]

  int value() const { return value_; }
  auto operator<=>(const GridId&) const = default;

 private:
  int value_ = 0;
};

/// Cell containing (lat, lon). Floor convention; the two boundary rows map
/// inward: lat = 90 clamps to the 89 row, lon = 180 wraps to -180.
/// Throws CoordinateRangeError when lat ∉ [-90, 90] or lon ∉ [-180, 180].
GridCell cell_of(double lat, double lon);

GridId grid_id(GridCell cell);

GridCell cell_of_id(GridId id);

}  // namespace floodlens

template <>
struct std::hash<floodlens::GridId> {
  std::size_t operator()(const floodlens::GridId& id) const noexcept {
    return std::hash<int>{}(id.value());
  }
};

#endif  // FLOODLENS_GEOGRID_HPP
