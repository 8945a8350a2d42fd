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

#ifndef FLOODLENS_SYNTHETIC_HPP
#define FLOODLENS_SYNTHETIC_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "floodlens/events.hpp"

namespace floodlens {

/// Synthetic world used by the test suite and the bundled demo: half the
/// grids are latently flood-prone, which drives both their event history
/// (more floods and storms, light persistence) and their geography text
/// (river/floodplain wording vs arid/plateau wording). Flood recurrence is
/// therefore predictable from history alone, and better predictable once
/// the text reveals the latent class.
struct SynthConfig {
  int n_grids = 50;
  StudyWindow window{1990, 2009};
  std::uint64_t seed = 20260810;
  double prone_fraction = 0.5;
  double flood_rate_prone = 0.40;
  double flood_rate_quiet = 0.12;
  double storm_rate_prone = 0.38;
  double storm_rate_quiet = 0.14;
  double persistence_boost = 0.12;  // extra flood probability after a flood year
  double other_rate = 0.03;         // background rate of the remaining types
  double damage_scale = 1.0e6;
  int summary_only_every = 17;  // every k-th grid's page has no Geography section
  int missing_page_every = 23;  // every k-th grid has no page at all
};

struct SynthWorld {
  SynthConfig config;
  std::vector<GeoEvent> events;
  std::vector<std::string> location_names;         // per grid index
  std::vector<int> prone;                          // per grid index, 0/1
  std::map<std::string, std::string> wiki_pages;   // title -> plaintext extract

  EventTable table() const { return EventTable::from_events(events); }
};

SynthWorld make_synthetic_world(const SynthConfig& config);

/// Writes disasters.csv, damages.csv and wiki_pages.json under `dir`.
void write_world_files(const SynthWorld& world, const std::filesystem::path& dir);

}  // namespace floodlens

#endif  // FLOODLENS_SYNTHETIC_HPP
