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

#include "floodlens/featstat.hpp"

#include "floodlens/csv.hpp"
#include "floodlens/num.hpp"

namespace floodlens {

GridYearFeatures aggregate_year(const EventTable& table, GridId grid, int year) {
  GridYearFeatures row;
  row.grid = grid;
  row.year = year;
  row.year_feature = static_cast<double>(year);
  for (const GeoEvent& e : table.at(grid, year)) {
    const int t = static_cast<int>(e.type);
    row.count[t] += 1;
    row.binary[t] = 1;
    if (e.damage_cost) row.damage[t] += *e.damage_cost;
  }
  return row;
}

std::vector<GridYearFeatures> feature_matrix(const EventTable& table, const std::set<GridId>& grids,
                                             StudyWindow years) {
  std::vector<GridYearFeatures> rows;
  rows.reserve(grids.size() * static_cast<std::size_t>(years.n_years()));
  for (GridId grid : grids) {
    for (int year = years.start; year <= years.end; ++year) {
      rows.push_back(aggregate_year(table, grid, year));
    }
  }
  return rows;
}

const std::vector<std::string>& stat_feature_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (int t = 0; t < kDisasterTypeCount; ++t) {
      const std::string base{to_string(static_cast<DisasterType>(t))};
      n.push_back(base + "_count");
      n.push_back(base + "_binary");
      n.push_back(base + "_damage");
    }
    n.push_back("year");
    return n;
  }();
  return names;
}

std::vector<double> feature_values(const GridYearFeatures& row) {
  std::vector<double> v;
  v.reserve(3 * kDisasterTypeCount + 1);
  for (int t = 0; t < kDisasterTypeCount; ++t) {
    v.push_back(static_cast<double>(row.count[t]));
    v.push_back(static_cast<double>(row.binary[t]));
    v.push_back(row.damage[t]);
  }
  v.push_back(row.year_feature);
  return v;
}

void write_feature_csv(std::ostream& out, std::span<const GridYearFeatures> rows) {
  out << "grid,year";
  for (const std::string& name : stat_feature_names()) out << ',' << name;
  out << '\n';
  for (const GridYearFeatures& row : rows) {
    std::vector<std::string> fields{std::to_string(row.grid.value()), std::to_string(row.year)};
    for (double v : feature_values(row)) fields.push_back(format_double(v));
    write_csv_row(out, fields);
  }
}

}  // namespace floodlens
