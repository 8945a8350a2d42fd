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

#ifndef FLOODLENS_EVENTS_HPP
#define FLOODLENS_EVENTS_HPP

#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "floodlens/geogrid.hpp"

namespace floodlens {

/// The eight disaster categories, in the canonical listing order used for
/// every feature layout in the pipeline.
enum class DisasterType {
  flood = 0,
  storm,
  earthquake,
  extreme_temperature,
  landslide,
  volcanic_activity,
  drought,
  mass_movement_dry,
};

inline constexpr int kDisasterTypeCount = 8;

std::string_view to_string(DisasterType type);

/// Parses a type string. Case-insensitive; spaces and underscores are
/// interchangeable and parentheses are ignored, so "Mass movement (Dry)"
/// and "mass_movement_dry" both resolve. Returns nullopt for unknown types.
std::optional<DisasterType> parse_disaster_type(std::string_view raw);

/// One geocoded disaster record with its grid id precomputed.
struct GeoEvent {
  std::string record_id;
  DisasterType type = DisasterType::flood;
  int year = 0;
  double lat = 0.0;
  double lon = 0.0;
  std::string location_name;
  std::optional<double> damage_cost;  // absent when not reported
  GridId grid;
};

struct StudyWindow {
  int start = 1960;
  int end = 2018;

  bool contains(int year) const { return year >= start && year <= end; }
  int n_years() const { return end - start + 1; }
};

/// One dropped input row. Serialized to the rejects report (JSONL).
struct RejectRecord {
  std::string file;       // "disasters" or "damages"
  std::size_t line = 0;   // 1-based line the record started on
  std::string record_id;  // may be empty when the id itself was unreadable
  std::string reason;
  std::string detail;
};

struct ParseStats {
  std::size_t rows_in = 0;          // disaster-file data rows
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t damage_rows = 0;
  std::size_t damage_joined = 0;
  std::size_t damage_unmatched = 0;  // damage rows whose record_id has no event
  std::size_t damage_rejected = 0;   // malformed or duplicate damage rows
};

/// Immutable, canonically ordered event collection. Events are sorted by
/// (grid, year, record_id) so that (grid, year) slices are contiguous and
/// serialization is byte-stable.
class EventTable {
 public:
  EventTable() = default;

  /// Sorts and indexes. Duplicate record ids must already be filtered out.
  static EventTable from_events(std::vector<GeoEvent> events);

  const std::vector<GeoEvent>& events() const { return events_; }
  bool empty() const { return events_.empty(); }
  std::size_t size() const { return events_.size(); }

  /// Events at exactly (grid, year); empty span when none.
  std::span<const GeoEvent> at(GridId grid, int year) const;

  /// Events at a grid across all years.
  std::span<const GeoEvent> at_grid(GridId grid) const;

  void write_csv(std::ostream& out) const;
  std::string to_csv() const;
  static EventTable read_csv(const std::filesystem::path& path);

 private:
  std::vector<GeoEvent> events_;
};

/// Distinct grid ids with at least one event of any type.
std::set<GridId> unique_grids(const EventTable& table);

struct IngestConfig {
  StudyWindow window;
};

struct ParseResult {
  EventTable table;
  std::vector<RejectRecord> rejects;
  ParseStats stats;
};

/// Parses the disaster CSV (`record_id,disaster_type,year,lat,lon,location_name`)
/// and, when given, joins the damage CSV (`record_id,damage_cost`) on record_id.
/// Malformed rows are dropped and recorded, never fatal; a missing file or a
/// wrong header is fatal (IoError / SchemaError).
ParseResult parse_events(const std::filesystem::path& disaster_csv,
                         const std::optional<std::filesystem::path>& damage_csv,
                         const IngestConfig& config);

std::string rejects_to_jsonl(const std::vector<RejectRecord>& rejects);

}  // namespace floodlens

#endif  // FLOODLENS_EVENTS_HPP
