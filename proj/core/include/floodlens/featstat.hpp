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

#ifndef FLOODLENS_FEATSTAT_HPP
#define FLOODLENS_FEATSTAT_HPP

#include <array>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "floodlens/events.hpp"
#include "floodlens/geogrid.hpp"

namespace floodlens {

/// Yearly statistics for one grid cell: per disaster type a count, a 0/1
/// indicator and the summed damage cost, plus the year itself as a numeric
/// feature. 24 type-derived features + 1.
struct GridYearFeatures {
  GridId grid;
  int year = 0;
  std::array<int, kDisasterTypeCount> count{};
  std::array<int, kDisasterTypeCount> binary{};
  std::array<double, kDisasterTypeCount> damage{};
  double year_feature = 0.0;
};

/// Features from events at exactly (grid, year); all zeros when the cell was
/// quiet that year. Absent damage costs contribute 0 to the damage sums.
GridYearFeatures aggregate_year(const EventTable& table, GridId grid, int year);

/// Dense matrix over grids × window, ordered by (grid, year). Quiet years are
/// included as zero rows.
std::vector<GridYearFeatures> feature_matrix(const EventTable& table, const std::set<GridId>& grids,
                                             StudyWindow years);

/// Fixed feature layout: per type {count, binary, damage} in the canonical
/// type order, then "year". 25 names.
const std::vector<std::string>& stat_feature_names();

/// Values in the stat_feature_names() order.
std::vector<double> feature_values(const GridYearFeatures& row);

/// CSV with columns: grid, year, the 24 type features, year_feature.
void write_feature_csv(std::ostream& out, std::span<const GridYearFeatures> rows);

}  // namespace floodlens

#endif  // FLOODLENS_FEATSTAT_HPP
