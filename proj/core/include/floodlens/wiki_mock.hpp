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

#ifndef FLOODLENS_WIKI_MOCK_HPP
#define FLOODLENS_WIKI_MOCK_HPP

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <string>

namespace floodlens {

/// Local stand-in for the wiki API, serving fixture pages over the same
/// `/w/api.php` route the client uses (prop=extracts and list=search). The
/// test suite and the bundled synthetic demo run against it; the live API is
/// never required.
class MockWikiServer {
 public:
  /// pages: title -> plaintext extract ("== Heading ==" markers included).
  explicit MockWikiServer(std::map<std::string, std::string> pages);
  ~MockWikiServer();
  MockWikiServer(const MockWikiServer&) = delete;
  MockWikiServer& operator=(const MockWikiServer&) = delete;

  /// Binds 127.0.0.1 on an ephemeral port and serves in a background thread.
  void start();
  void stop();

  int port() const;
  std::string base_url() const;
  std::size_t request_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Loads a fixture file: {"pages": {"Title": "extract", ...}}.
std::map<std::string, std::string> load_pages_json(const std::filesystem::path& path);

}  // namespace floodlens

#endif  // FLOODLENS_WIKI_MOCK_HPP
