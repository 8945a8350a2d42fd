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

// Generates the synthetic demo corpus: disasters.csv, damages.csv and
// wiki_pages.json for the mock server, plus a ready-to-run config file.

#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "floodlens/errors.hpp"
#include "floodlens/io.hpp"
#include "floodlens/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"synthetic world generator for floodlens"};
  std::string out_dir = "data/synthetic";
  floodlens::SynthConfig config;
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--grids", config.n_grids, "number of grid cells")->capture_default_str();
  app.add_option("--seed", config.seed, "world seed")->capture_default_str();
  app.add_option("--start", config.window.start, "first year")->capture_default_str();
  app.add_option("--end", config.window.end, "last year")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    const floodlens::SynthWorld world = floodlens::make_synthetic_world(config);
    floodlens::write_world_files(world, out_dir);

    std::ostringstream ini;
    ini << "# floodlens demo configuration (synthetic corpus)\n"
        << "disasters=" << out_dir << "/disasters.csv\n"
        << "damages=" << out_dir << "/damages.csv\n"
        << "out=out/synthetic\n"
        << "window-start=" << config.window.start << "\n"
        << "window-end=" << config.window.end << "\n"
        << "horizons=1,2,5\n"
        << "seed=7\n"
        << "encoder-preset=tiny\n"
        << "head-lr=0.1\n"
        << "finetune-lr=0.003\n"
        << "batch-size=8\n"
        << "rate-limit=0\n"
        << "# start tools/floodlens-mockwiki --pages " << out_dir << "/wiki_pages.json\n"
        << "# and export FLOODLENS_WIKI_BASE before running fetch-text\n";
    floodlens::write_file_atomic(std::filesystem::path(out_dir) / "floodlens.ini", ini.str());

    std::size_t floods = 0;
    for (const auto& e : world.events) floods += (e.type == floodlens::DisasterType::flood);
    std::cout << "wrote " << world.events.size() << " events (" << floods << " floods) for "
              << config.n_grids << " grids to " << out_dir << "\n";
  } catch (const floodlens::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.exit_class());
  }
  return 0;
}
