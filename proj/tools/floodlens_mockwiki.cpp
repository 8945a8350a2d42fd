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

// Serves fixture wiki pages over the same API route the pipeline client
// uses. Point FLOODLENS_WIKI_BASE at the printed URL to run fetch-text
// without touching the live API.

#include <csignal>
#include <iostream>
#include <semaphore>
#include <string>

#include <CLI11.hpp>

#include "floodlens/errors.hpp"
#include "floodlens/wiki_mock.hpp"

namespace {
std::binary_semaphore g_shutdown{0};
void handle_signal(int) { g_shutdown.release(); }
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mock wiki API server for floodlens"};
  std::string pages_file;
  app.add_option("--pages", pages_file, "JSON file: {\"pages\": {title: extract}}")->required();
  CLI11_PARSE(app, argc, argv);

  try {
    floodlens::MockWikiServer server(floodlens::load_pages_json(pages_file));
    server.start();
    std::cout << "serving " << pages_file << " at " << server.base_url() << "\n"
              << "export FLOODLENS_WIKI_BASE=" << server.base_url() << "\n"
              << std::flush;
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    g_shutdown.acquire();
    server.stop();
  } catch (const floodlens::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.exit_class());
  }
  return 0;
}
