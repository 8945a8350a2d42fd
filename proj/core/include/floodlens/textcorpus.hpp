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

#ifndef FLOODLENS_TEXTCORPUS_HPP
#define FLOODLENS_TEXTCORPUS_HPP

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "floodlens/events.hpp"
#include "floodlens/geogrid.hpp"

namespace floodlens {

enum class TextSource { geography_section, summary_section, missing };

std::string_view to_string(TextSource source);
std::optional<TextSource> parse_text_source(std::string_view s);

/// Geography paragraph for one grid. `source == missing` implies the literal
/// text "missing", which still gets embedded downstream.
struct LocationText {
  GridId grid;
  std::string location_name;
  std::string text;
  TextSource source = TextSource::missing;
  std::string fetched_at;  // ISO 8601 UTC

  bool operator==(const LocationText&) const = default;
};

/// The most frequent location name among the grid's events; ties break
/// lexicographically. Throws LookupError when the grid has no events.
std::string resolve_location(const EventTable& table, GridId grid);

/// Base URL: FLOODLENS_WIKI_BASE when set, otherwise the public endpoint.
std::string default_wiki_base();

struct WikiClientConfig {
  std::string base_url;  // empty -> default_wiki_base()
  double rate_limit_rps = 2.0;
  int max_retries = 3;
  double backoff_initial_seconds = 0.5;
  int timeout_seconds = 20;
  /// When set, "<name> (<region>)" joins the synonym candidate list.
  std::optional<std::string> admin_region;
};

struct FetchAttempt {
  std::string title;
  bool found = false;
};

struct FetchTrace {
  std::vector<FetchAttempt> attempts;
  std::size_t requests = 0;
};

/// Wiki API client. Fallback chain per location name: exact page Geography
/// section, synonym Geography, exact Summary, synonym Summary, "missing".
/// Synonyms: optional "(region)" variant plus the top search hit.
class WikiClient {
 public:
  explicit WikiClient(WikiClientConfig config);
  ~WikiClient();
  WikiClient(const WikiClient&) = delete;
  WikiClient& operator=(const WikiClient&) = delete;

  /// Grid and fetched_at are filled by the caller.
  LocationText fetch_text(const std::string& name, FetchTrace* trace = nullptr);

  const WikiClientConfig& config() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Pure text helpers, exposed for direct testing.

/// First paragraph block of the Geography section of a plaintext extract
/// with "== Heading ==" markers, or nullopt when the page has none.
std::optional<std::string> extract_geography_paragraph(const std::string& extract);

/// Lead text before the first heading.
std::string extract_summary(const std::string& extract);

/// Strips residual markup characters and collapses whitespace; preserves case.
std::string normalize_plaintext(std::string_view raw);

std::vector<std::string> synonym_candidates(const std::string& name,
                                            const std::optional<std::string>& region);

/// On-disk JSONL cache, one LocationText per line, keyed by grid.
class CorpusCache {
 public:
  const std::map<GridId, LocationText>& entries() const { return entries_; }
  bool contains(GridId grid) const { return entries_.count(grid) > 0; }
  const LocationText& at(GridId grid) const;
  void insert(LocationText entry);
  std::size_t size() const { return entries_.size(); }

  std::string to_jsonl() const;
  void save(const std::filesystem::path& path) const;
  static CorpusCache load(const std::filesystem::path& path);
  /// Empty cache when the file does not exist yet.
  static CorpusCache load_or_empty(const std::filesystem::path& path);

  bool operator==(const CorpusCache&) const = default;

 private:
  std::map<GridId, LocationText> entries_;
};

struct CorpusBuildStats {
  std::size_t requested = 0;
  std::size_t fetched = 0;
  std::size_t cache_hits = 0;
  std::size_t missing = 0;
};

/// One LocationText per requested grid. Resumable: grids already in the
/// cache file are never re-fetched. Appends a run record to the manifest.
CorpusCache build_corpus(const EventTable& table, const std::set<GridId>& grids, WikiClient& client,
                         const std::filesystem::path& cache_path,
                         const std::filesystem::path& manifest_path,
                         CorpusBuildStats* stats_out = nullptr);

}  // namespace floodlens

#endif  // FLOODLENS_TEXTCORPUS_HPP
