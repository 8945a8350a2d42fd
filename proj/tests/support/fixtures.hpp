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

#ifndef FLOODLENS_TESTS_FIXTURES_HPP
#define FLOODLENS_TESTS_FIXTURES_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "floodlens/events.hpp"
#include "floodlens/geogrid.hpp"

namespace floodlens::testing {

inline GeoEvent make_event(std::string record_id, DisasterType type, int year, double lat,
                           double lon, std::string name = "Town",
                           std::optional<double> damage = std::nullopt) {
  GeoEvent e;
  e.record_id = std::move(record_id);
  e.type = type;
  e.year = year;
  e.lat = lat;
  e.lon = lon;
  e.location_name = std::move(name);
  e.damage_cost = damage;
  e.grid = grid_id(cell_of(lat, lon));
  return e;
}

/// Fresh directory under the system temp root, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    base_ = std::filesystem::temp_directory_path() /
            ("floodlens_" + tag + "_" + std::to_string(counter()++));
    std::filesystem::remove_all(base_);
    std::filesystem::create_directories(base_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(base_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return base_; }
  std::filesystem::path operator/(const std::string& name) const { return base_ / name; }

 private:
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::filesystem::path base_;
};

inline std::filesystem::path test_data_dir() {
#ifdef FLOODLENS_TEST_DATA_DIR
  return FLOODLENS_TEST_DATA_DIR;
#else
  return "tests/fixtures";
#endif
}

}  // namespace floodlens::testing

#endif  // FLOODLENS_TESTS_FIXTURES_HPP
