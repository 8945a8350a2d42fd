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

#include "floodlens/synthetic.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

#include "floodlens/csv.hpp"
#include "floodlens/errors.hpp"
#include "floodlens/io.hpp"
#include "floodlens/num.hpp"
#include "floodlens/rng.hpp"

namespace floodlens {

namespace {

const char* const kNameStems[] = {
    "Alder", "Birch",  "Cedar",  "Dunmore", "Elms",   "Fenwick", "Garron", "Hartley",
    "Ives",  "Juniper", "Keld",  "Lorring", "Marsten", "Norwood", "Orley", "Pember",
};

const char* const kProneSentences[] = {
    "The town lies on a low floodplain beside a broad river.",
    "Heavy monsoon rain swells the basin every year.",
    "Wide wetlands and marsh surround the river banks.",
    "The lowlands along the delta flood when the water rises.",
    "Seasonal rains overflow the streams across the plain.",
};

const char* const kQuietSentences[] = {
    "The town sits on a high arid plateau with rocky hills.",
    "Rainfall is scarce and the desert ground drains quickly.",
    "Dry uplands and dunes stretch to the east.",
    "The steppe around the ridge is dust and stone.",
    "Gravel terrain on the mesa sheds what little rain falls.",
};

std::string page_for(const std::string& name, bool prone, bool summary_only, Rng& rng) {
  auto pick = [&](const char* const* pool, std::size_t n) { return pool[rng.uniform_index(n)]; };
  const char* const* pool = prone ? kProneSentences : kQuietSentences;
  const std::size_t pool_size = prone ? std::size(kProneSentences) : std::size(kQuietSentences);

  std::ostringstream page;
  page << name << " is a settlement in the study region.\n";
  if (summary_only) {
    // No Geography heading: the client falls back to this lead.
    page << pick(pool, pool_size) << ' ' << pick(pool, pool_size) << '\n';
    return page.str();
  }
  page << "\n== History ==\nRecords begin in the nineteenth century.\n";
  page << "\n== Geography ==\n";
  page << pick(pool, pool_size) << ' ' << pick(pool, pool_size) << ' ' << pick(pool, pool_size)
       << '\n';
  page << "\n== Economy ==\nFarming and trade.\n";
  return page.str();
}

}  // namespace

SynthWorld make_synthetic_world(const SynthConfig& config) {
  if (config.n_grids < 2 || config.n_grids > 120) {
    throw ConfigError("synthetic world supports 2..120 grids");
  }
  SynthWorld world;
  world.config = config;
  Rng rng(derive_seed(config.seed, "synthetic/world"));

  int event_id = 0;
  auto push_event = [&](DisasterType type, int year, double lat, double lon,
                        const std::string& name, std::optional<double> damage) {
    GeoEvent e;
    e.record_id = "SY" + std::to_string(++event_id);
    e.type = type;
    e.year = year;
    e.lat = lat;
    e.lon = lon;
    e.location_name = name;
    e.damage_cost = damage;
    e.grid = grid_id(cell_of(lat, lon));
    world.events.push_back(std::move(e));
  };

  for (int g = 0; g < config.n_grids; ++g) {
    const bool prone = g < static_cast<int>(config.prone_fraction * config.n_grids);
    world.prone.push_back(prone ? 1 : 0);
    const std::string name = std::string(kNameStems[g % std::size(kNameStems)]) +
                             (prone ? " Hollow " : " Heights ") + std::to_string(g);
    world.location_names.push_back(name);

    // one cell per grid, marching east then north from (-40, 10)
    const double base_lat = -40.0 + (g % 60);
    const double base_lon = 10.0 + 2.0 * (g / 60);

    const bool missing_page = config.missing_page_every > 0 && g % config.missing_page_every == 11;
    const bool summary_only = config.summary_only_every > 0 && g % config.summary_only_every == 5;
    if (!missing_page) {
      world.wiki_pages[name] = page_for(name, prone, summary_only, rng);
    }

    bool flooded_last_year = false;
    for (int year = config.window.start; year <= config.window.end; ++year) {
      const double flood_rate = (prone ? config.flood_rate_prone : config.flood_rate_quiet) +
                                (flooded_last_year ? config.persistence_boost : 0.0);
      const bool flood = rng.bernoulli(std::min(flood_rate, 0.9));
      if (flood) {
        const int n_events = rng.bernoulli(0.25) ? 2 : 1;
        for (int k = 0; k < n_events; ++k) {
          const double lat = base_lat + rng.uniform(0.05, 0.95);
          const double lon = base_lon + rng.uniform(0.05, 0.95);
          std::optional<double> damage;
          if (rng.bernoulli(0.6)) damage = config.damage_scale * rng.uniform(0.5, 3.0);
          push_event(DisasterType::flood, year, lat, lon, name, damage);
        }
      }
      flooded_last_year = flood;

      if (rng.bernoulli(prone ? config.storm_rate_prone : config.storm_rate_quiet)) {
        push_event(DisasterType::storm, year, base_lat + rng.uniform(0.05, 0.95),
                   base_lon + rng.uniform(0.05, 0.95), name,
                   rng.bernoulli(0.3) ? std::optional<double>(config.damage_scale * rng.uniform(0.2, 1.0))
                                      : std::nullopt);
      }
      for (DisasterType t : {DisasterType::earthquake, DisasterType::drought,
                             DisasterType::extreme_temperature}) {
        if (rng.bernoulli(config.other_rate)) {
          push_event(t, year, base_lat + rng.uniform(0.05, 0.95), base_lon + rng.uniform(0.05, 0.95),
                     name, std::nullopt);
        }
      }
    }
  }
  return world;
}

void write_world_files(const SynthWorld& world, const std::filesystem::path& dir) {
  ensure_dir(dir);

  std::ostringstream disasters;
  disasters << "record_id,disaster_type,year,lat,lon,location_name\n";
  std::ostringstream damages;
  damages << "record_id,damage_cost\n";
  for (const GeoEvent& e : world.events) {
    write_csv_row(disasters, {e.record_id, std::string(to_string(e.type)), std::to_string(e.year),
                              format_double(e.lat), format_double(e.lon), e.location_name});
    if (e.damage_cost) {
      write_csv_row(damages, {e.record_id, format_double(*e.damage_cost)});
    }
  }
  write_file_atomic(dir / "disasters.csv", disasters.str());
  write_file_atomic(dir / "damages.csv", damages.str());

  nlohmann::json pages;
  pages["pages"] = world.wiki_pages;
  write_file_atomic(dir / "wiki_pages.json", pages.dump(2) + "\n");
}

}  // namespace floodlens
