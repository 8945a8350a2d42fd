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

#include "floodlens/events.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "floodlens/csv.hpp"
#include "floodlens/errors.hpp"
#include "floodlens/num.hpp"
#include "floodlens/strings.hpp"

namespace floodlens {

namespace {

constexpr std::string_view kTypeNames[kDisasterTypeCount] = {
    "flood",
    "storm",
    "earthquake",
    "extreme_temperature",
    "landslide",
    "volcanic_activity",
    "drought",
    "mass_movement_dry",
};

const char* const kDisasterHeader = "record_id,disaster_type,year,lat,lon,location_name";
const char* const kDamageHeader = "record_id,damage_cost";

std::string normalize_type(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_sep = false;
  for (char c : raw) {
    const unsigned char uc = static_cast<unsigned char>(c);
    if (c == '(' || c == ')') continue;
    if (std::isspace(uc) || c == '_') {
      if (!out.empty()) pending_sep = true;
      continue;
    }
    if (pending_sep) {
      out += '_';
      pending_sep = false;
    }
    out += static_cast<char>(std::tolower(uc));
  }
  return out;
}

void check_header(const std::vector<std::string>& row, const char* expected,
                  const std::filesystem::path& path) {
  std::vector<std::string> want = split(expected, ',');
  bool ok = row.size() == want.size();
  for (std::size_t i = 0; ok && i < want.size(); ++i) {
    ok = std::string(trim(to_lower(row[i]))) == want[i];
  }
  if (!ok) {
    throw SchemaError("malformed header in " + path.string() + ": expected `" +
                      std::string(expected) + "`");
  }
}

struct EventKeyLess {
  bool operator()(const GeoEvent& a, const GeoEvent& b) const {
    if (a.grid != b.grid) return a.grid < b.grid;
    if (a.year != b.year) return a.year < b.year;
    return a.record_id < b.record_id;
  }
};

}  // namespace

std::string_view to_string(DisasterType type) { return kTypeNames[static_cast<int>(type)]; }

std::optional<DisasterType> parse_disaster_type(std::string_view raw) {
  const std::string norm = normalize_type(raw);
  for (int i = 0; i < kDisasterTypeCount; ++i) {
    if (norm == kTypeNames[i]) return static_cast<DisasterType>(i);
  }
  return std::nullopt;
}

EventTable EventTable::from_events(std::vector<GeoEvent> events) {
  std::sort(events.begin(), events.end(), EventKeyLess{});
  EventTable table;
  table.events_ = std::move(events);
  return table;
}

std::span<const GeoEvent> EventTable::at(GridId grid, int year) const {
  const GeoEvent probe{.year = year, .grid = grid};
  auto [lo, hi] = std::equal_range(events_.begin(), events_.end(), probe,
                                   [](const GeoEvent& a, const GeoEvent& b) {
                                     if (a.grid != b.grid) return a.grid < b.grid;
                                     return a.year < b.year;
                                   });
  if (lo == hi) return {};
  return {events_.data() + (lo - events_.begin()), static_cast<std::size_t>(hi - lo)};
}

std::span<const GeoEvent> EventTable::at_grid(GridId grid) const {
  const GeoEvent probe{.grid = grid};
  auto [lo, hi] = std::equal_range(events_.begin(), events_.end(), probe,
                                   [](const GeoEvent& a, const GeoEvent& b) { return a.grid < b.grid; });
  if (lo == hi) return {};
  return {events_.data() + (lo - events_.begin()), static_cast<std::size_t>(hi - lo)};
}

void EventTable::write_csv(std::ostream& out) const {
  out << "record_id,disaster_type,year,lat,lon,location_name,damage_cost,grid_id\n";
  for (const GeoEvent& e : events_) {
    write_csv_row(out, {e.record_id, std::string(to_string(e.type)), std::to_string(e.year),
                        format_double(e.lat), format_double(e.lon), e.location_name,
                        e.damage_cost ? format_double(*e.damage_cost) : std::string(),
                        std::to_string(e.grid.value())});
  }
}

std::string EventTable::to_csv() const {
  std::ostringstream ss;
  write_csv(ss);
  return ss.str();
}

EventTable EventTable::read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open event table: " + path.string());
  CsvReader reader(in);
  auto header = reader.next_row();
  if (!header || header->size() != 8) {
    throw SchemaError("malformed event table header in " + path.string());
  }
  std::vector<GeoEvent> events;
  while (auto row = reader.next_row()) {
    if (row->size() == 1 && (*row)[0].empty()) continue;
    if (row->size() != 8) {
      throw SchemaError("malformed event table row at line " + std::to_string(reader.record_line()) +
                        " in " + path.string());
    }
    GeoEvent e;
    e.record_id = (*row)[0];
    const auto type = parse_disaster_type((*row)[1]);
    const auto year = parse_int((*row)[2]);
    const auto lat = parse_double((*row)[3]);
    const auto lon = parse_double((*row)[4]);
    const auto grid = parse_int((*row)[7]);
    if (!type || !year || !lat || !lon || !grid) {
      throw SchemaError("unparseable event table row at line " + std::to_string(reader.record_line()) +
                        " in " + path.string());
    }
    e.type = *type;
    e.year = static_cast<int>(*year);
    e.lat = *lat;
    e.lon = *lon;
    e.location_name = (*row)[5];
    if (!(*row)[6].empty()) {
      const auto dmg = parse_double((*row)[6]);
      if (!dmg) throw SchemaError("bad damage_cost at line " + std::to_string(reader.record_line()));
      e.damage_cost = *dmg;
    }
    e.grid = GridId(static_cast<int>(*grid));
    events.push_back(std::move(e));
  }
  return from_events(std::move(events));
}

std::set<GridId> unique_grids(const EventTable& table) {
  std::set<GridId> grids;
  for (const GeoEvent& e : table.events()) grids.insert(e.grid);
  return grids;
}

ParseResult parse_events(const std::filesystem::path& disaster_csv,
                         const std::optional<std::filesystem::path>& damage_csv,
                         const IngestConfig& config) {
  std::ifstream in(disaster_csv, std::ios::binary);
  if (!in) throw IoError("cannot open disaster file: " + disaster_csv.string());

  ParseResult result;
  CsvReader reader(in);
  auto header = reader.next_row();
  if (!header) throw SchemaError("empty disaster file: " + disaster_csv.string());
  check_header(*header, kDisasterHeader, disaster_csv);

  std::vector<GeoEvent> events;
  std::unordered_set<std::string> seen_ids;
  std::unordered_map<std::string, std::size_t> event_by_id;

  auto reject = [&](std::size_t line, const std::string& id, const std::string& reason,
                    const std::string& detail) {
    result.rejects.push_back({"disasters", line, id, reason, detail});
    ++result.stats.rejected;
  };

  while (auto row = reader.next_row()) {
    if (row->size() == 1 && (*row)[0].empty()) continue;  // stray blank line
    ++result.stats.rows_in;
    const std::size_t line = reader.record_line();
    if (row->size() != 6) {
      reject(line, "", "wrong_field_count", "expected 6 fields, got " + std::to_string(row->size()));
      continue;
    }
    const std::string id = std::string(trim((*row)[0]));
    if (id.empty()) {
      reject(line, id, "missing_record_id", "");
      continue;
    }
    if (!seen_ids.insert(id).second) {
      reject(line, id, "duplicate_record_id", "");
      continue;
    }
    const auto type = parse_disaster_type((*row)[1]);
    if (!type) {
      reject(line, id, "unknown_disaster_type", std::string(trim((*row)[1])));
      continue;
    }
    const auto year = parse_int(trim((*row)[2]));
    if (!year) {
      reject(line, id, "unparseable_year", std::string(trim((*row)[2])));
      continue;
    }
    if (!config.window.contains(static_cast<int>(*year))) {
      reject(line, id, "year_out_of_window",
             std::to_string(*year) + " outside [" + std::to_string(config.window.start) + ", " +
                 std::to_string(config.window.end) + "]");
      continue;
    }
    const auto lat = parse_double(trim((*row)[3]));
    const auto lon = parse_double(trim((*row)[4]));
    if (!lat || !lon) {
      reject(line, id, "unparseable_coordinates", "");
      continue;
    }
    GeoEvent e;
    try {
      e.grid = grid_id(cell_of(*lat, *lon));
    } catch (const CoordinateRangeError& err) {
      reject(line, id, "coordinates_out_of_range", err.what());
      continue;
    }
    e.record_id = id;
    e.type = *type;
    e.year = static_cast<int>(*year);
    e.lat = *lat;
    e.lon = *lon;
    e.location_name = std::string(trim((*row)[5]));
    event_by_id[id] = events.size();
    events.push_back(std::move(e));
    ++result.stats.accepted;
  }

  if (damage_csv) {
    std::ifstream din(*damage_csv, std::ios::binary);
    if (!din) throw IoError("cannot open damage file: " + damage_csv->string());
    CsvReader dreader(din);
    auto dheader = dreader.next_row();
    if (!dheader) throw SchemaError("empty damage file: " + damage_csv->string());
    check_header(*dheader, kDamageHeader, *damage_csv);

    std::unordered_set<std::string> joined_ids;
    while (auto row = dreader.next_row()) {
      if (row->size() == 1 && (*row)[0].empty()) continue;
      ++result.stats.damage_rows;
      const std::size_t line = dreader.record_line();
      if (row->size() != 2) {
        result.rejects.push_back({"damages", line, "", "wrong_field_count", ""});
        ++result.stats.damage_rejected;
        continue;
      }
      const std::string id = std::string(trim((*row)[0]));
      const auto cost = parse_double(trim((*row)[1]));
      if (id.empty() || !cost || *cost < 0.0) {
        result.rejects.push_back({"damages", line, id, "bad_damage_cost", std::string(trim((*row)[1]))});
        ++result.stats.damage_rejected;
        continue;
      }
      if (!joined_ids.insert(id).second) {
        // EM-DAT join is one damage value per record id; keep the first.
        result.rejects.push_back({"damages", line, id, "duplicate_damage_record", ""});
        ++result.stats.damage_rejected;
        continue;
      }
      auto it = event_by_id.find(id);
      if (it == event_by_id.end()) {
        ++result.stats.damage_unmatched;
        continue;
      }
      events[it->second].damage_cost = *cost;
      ++result.stats.damage_joined;
    }
  }

  result.table = EventTable::from_events(std::move(events));
  return result;
}

std::string rejects_to_jsonl(const std::vector<RejectRecord>& rejects) {
  std::string out;
  for (const RejectRecord& r : rejects) {
    nlohmann::json j;
    j["file"] = r.file;
    j["line"] = r.line;
    if (!r.record_id.empty()) j["record_id"] = r.record_id;
    j["reason"] = r.reason;
    if (!r.detail.empty()) j["detail"] = r.detail;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace floodlens
