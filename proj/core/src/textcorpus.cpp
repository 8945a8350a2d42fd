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

#ifdef FLOODLENS_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include "floodlens/textcorpus.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "floodlens/errors.hpp"
#include "floodlens/io.hpp"
#include "floodlens/strings.hpp"

namespace floodlens {

std::string_view to_string(TextSource source) {
  switch (source) {
    case TextSource::geography_section: return "geography_section";
    case TextSource::summary_section: return "summary_section";
    case TextSource::missing: return "missing";
  }
  return "missing";
}

std::optional<TextSource> parse_text_source(std::string_view s) {
  if (s == "geography_section") return TextSource::geography_section;
  if (s == "summary_section") return TextSource::summary_section;
  if (s == "missing") return TextSource::missing;
  return std::nullopt;
}

std::string resolve_location(const EventTable& table, GridId grid) {
  const auto events = table.at_grid(grid);
  if (events.empty()) {
    throw LookupError("grid " + std::to_string(grid.value()) + " has no events");
  }
  std::map<std::string, std::size_t> counts;
  for (const GeoEvent& e : events) ++counts[e.location_name];
  // std::map iterates names in lexicographic order, so on count ties the
  // first name seen wins the tie-break.
  auto best = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return best->first;
}

std::string default_wiki_base() {
  if (const char* env = std::getenv("FLOODLENS_WIKI_BASE"); env && *env) return env;
  return "https://en.wikipedia.org";
}

// --- plaintext helpers -------------------------------------------------------

std::string normalize_plaintext(std::string_view raw) {
  std::string cleaned;
  cleaned.reserve(raw.size());
  for (char c : raw) {
    // TextExtracts plaintext occasionally leaks wiki quote markup.
    if (c == '\'' && !cleaned.empty() && cleaned.back() == '\'') continue;
    cleaned += c;
  }
  return collapse_whitespace(cleaned);
}

namespace {

struct Section {
  std::string heading;  // empty for the lead
  std::string body;
};

std::vector<Section> split_sections(const std::string& extract) {
  std::vector<Section> sections{{"", ""}};
  std::istringstream in(extract);
  std::string line;
  while (std::getline(in, line)) {
    std::string_view t = trim(line);
    if (t.size() >= 5 && t.front() == '=' && t.back() == '=') {
      std::size_t level = 0;
      while (level < t.size() && t[level] == '=') ++level;
      std::string_view heading = t;
      heading.remove_prefix(level);
      std::size_t tail = 0;
      while (tail < heading.size() && heading[heading.size() - 1 - tail] == '=') ++tail;
      heading.remove_suffix(tail);
      sections.push_back({std::string(trim(heading)), ""});
    } else {
      sections.back().body += line;
      sections.back().body += '\n';
    }
  }
  return sections;
}

std::string first_paragraph(const std::string& body) {
  // Paragraphs are separated by blank lines.
  std::istringstream in(body);
  std::string line, para;
  bool seen_text = false;
  while (std::getline(in, line)) {
    if (trim(line).empty()) {
      if (seen_text) break;
      continue;
    }
    seen_text = true;
    para += line;
    para += ' ';
  }
  return normalize_plaintext(para);
}

bool is_geography_heading(const std::string& heading) {
  const std::string lower = to_lower(trim(heading));
  return lower == "geography" || lower.rfind("geography ", 0) == 0;
}

}  // namespace

std::optional<std::string> extract_geography_paragraph(const std::string& extract) {
  for (const Section& s : split_sections(extract)) {
    if (!s.heading.empty() && is_geography_heading(s.heading)) {
      const std::string para = first_paragraph(s.body);
      if (!para.empty()) return para;
    }
  }
  return std::nullopt;
}

std::string extract_summary(const std::string& extract) {
  const auto sections = split_sections(extract);
  return normalize_plaintext(sections.front().body);
}

std::vector<std::string> synonym_candidates(const std::string& name,
                                            const std::optional<std::string>& region) {
  std::vector<std::string> out{name};
  if (region && !region->empty()) {
    const std::string variant = name + " (" + *region + ")";
    if (variant != name) out.push_back(variant);
  }
  return out;
}

// --- HTTP client -------------------------------------------------------------

namespace {

std::string url_encode(std::string_view s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else if (c == ' ') {
      out += "%20";
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 0xF];
    }
  }
  return out;
}

}  // namespace

struct WikiClient::Impl {
  WikiClientConfig config;
  httplib::Client http;
  std::chrono::steady_clock::time_point last_request{};
  bool any_request = false;

  explicit Impl(WikiClientConfig cfg)
      : config(std::move(cfg)), http(config.base_url.empty() ? default_wiki_base() : config.base_url) {
    http.set_connection_timeout(config.timeout_seconds, 0);
    http.set_read_timeout(config.timeout_seconds, 0);
    http.set_follow_location(true);
  }

  void throttle() {
    if (config.rate_limit_rps <= 0.0) return;
    const auto min_gap = std::chrono::duration<double>(1.0 / config.rate_limit_rps);
    if (any_request) {
      const auto elapsed = std::chrono::steady_clock::now() - last_request;
      if (elapsed < min_gap) {
        std::this_thread::sleep_for(min_gap - elapsed);
      }
    }
    last_request = std::chrono::steady_clock::now();
    any_request = true;
  }

  nlohmann::json get_json(const std::string& path_and_query, std::size_t* requests) {
    std::string last_error;
    for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(std::chrono::duration<double>(
            config.backoff_initial_seconds * std::pow(2.0, attempt - 1)));
      }
      throttle();
      if (requests) ++*requests;
      auto res = http.Get(path_and_query);
      if (!res) {
        last_error = "transport error " + httplib::to_string(res.error());
        continue;
      }
      if (res->status != 200) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      try {
        return nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::exception& e) {
        throw ProtocolError(std::string("malformed API response: ") + e.what());
      }
    }
    throw TransientError("wiki request failed after " + std::to_string(config.max_retries + 1) +
                         " attempts (" + last_error + "): " + path_and_query);
  }

  /// Plaintext extract of a page, or nullopt when the page does not exist.
  std::optional<std::string> get_extract(const std::string& title, std::size_t* requests) {
    const std::string query = "/w/api.php?action=query&format=json&prop=extracts&explaintext=1"
                              "&redirects=1&titles=" +
                              url_encode(title);
    const nlohmann::json j = get_json(query, requests);
    if (!j.contains("query") || !j["query"].contains("pages")) {
      throw ProtocolError("API response lacks query.pages");
    }
    for (const auto& [key, page] : j["query"]["pages"].items()) {
      if (page.contains("missing") || key == "-1") return std::nullopt;
      if (page.contains("extract")) return page["extract"].get<std::string>();
    }
    return std::nullopt;
  }

  std::optional<std::string> search_top_title(const std::string& text, std::size_t* requests) {
    const std::string query =
        "/w/api.php?action=query&format=json&list=search&srlimit=1&srsearch=" + url_encode(text);
    const nlohmann::json j = get_json(query, requests);
    if (!j.contains("query") || !j["query"].contains("search")) {
      throw ProtocolError("API response lacks query.search");
    }
    const auto& hits = j["query"]["search"];
    if (hits.empty()) return std::nullopt;
    return hits[0].at("title").get<std::string>();
  }
};

WikiClient::WikiClient(WikiClientConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}
WikiClient::~WikiClient() = default;

const WikiClientConfig& WikiClient::config() const { return impl_->config; }

LocationText WikiClient::fetch_text(const std::string& name, FetchTrace* trace) {
  LocationText result;
  result.location_name = name;

  std::size_t requests = 0;
  std::map<std::string, std::optional<std::string>> extracts;  // title -> page text
  auto fetch_extract = [&](const std::string& title) -> const std::optional<std::string>& {
    auto it = extracts.find(title);
    if (it == extracts.end()) {
      it = extracts.emplace(title, impl_->get_extract(title, &requests)).first;
      if (trace) trace->attempts.push_back({title, it->second.has_value()});
    }
    return it->second;
  };

  std::vector<std::string> candidates = synonym_candidates(name, impl_->config.admin_region);
  bool searched = false;
  auto add_search_hit = [&] {
    searched = true;
    const auto hit = impl_->search_top_title(name, &requests);
    if (hit && std::find(candidates.begin(), candidates.end(), *hit) == candidates.end()) {
      candidates.push_back(*hit);
    }
  };

  // Geography pass: exact name, then each synonym, extending with the
  // search hit once the fixed candidates miss.
  for (std::size_t i = 0; i <= candidates.size(); ++i) {
    if (i == candidates.size()) {
      if (searched) break;
      add_search_hit();
      if (i == candidates.size()) break;  // no new candidate
    }
    const auto& extract = fetch_extract(candidates[i]);
    if (!extract) continue;
    if (auto geo = extract_geography_paragraph(*extract)) {
      result.text = std::move(*geo);
      result.source = TextSource::geography_section;
      if (trace) trace->requests += requests;
      return result;
    }
  }

  // Summary pass over everything tried (extracts are memoized).
  for (const std::string& title : candidates) {
    const auto& extract = fetch_extract(title);
    if (!extract) continue;
    const std::string summary = extract_summary(*extract);
    if (!summary.empty()) {
      result.text = summary;
      result.source = TextSource::summary_section;
      if (trace) trace->requests += requests;
      return result;
    }
  }

  result.text = "missing";
  result.source = TextSource::missing;
  if (trace) trace->requests += requests;
  return result;
}

// --- cache -------------------------------------------------------------------

const LocationText& CorpusCache::at(GridId grid) const {
  auto it = entries_.find(grid);
  if (it == entries_.end()) {
    throw LookupError("no corpus entry for grid " + std::to_string(grid.value()));
  }
  return it->second;
}

void CorpusCache::insert(LocationText entry) {
  const GridId grid = entry.grid;
  entries_[grid] = std::move(entry);
}

std::string CorpusCache::to_jsonl() const {
  std::string out;
  for (const auto& [grid, entry] : entries_) {
    nlohmann::json j;
    j["grid"] = grid.value();
    j["location_name"] = entry.location_name;
    j["text"] = entry.text;
    j["source"] = std::string(to_string(entry.source));
    j["fetched_at"] = entry.fetched_at;
    out += j.dump();
    out += '\n';
  }
  return out;
}

void CorpusCache::save(const std::filesystem::path& path) const {
  write_file_atomic(path, to_jsonl());
}

CorpusCache CorpusCache::load(const std::filesystem::path& path) {
  CorpusCache cache;
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError("bad corpus cache line " + std::to_string(line_no) + ": " + e.what());
    }
    LocationText entry;
    entry.grid = GridId(j.at("grid").get<int>());
    entry.location_name = j.at("location_name").get<std::string>();
    entry.text = j.at("text").get<std::string>();
    const auto source = parse_text_source(j.at("source").get<std::string>());
    if (!source) throw SchemaError("bad corpus source at line " + std::to_string(line_no));
    entry.source = *source;
    entry.fetched_at = j.value("fetched_at", "");
    cache.insert(std::move(entry));
  }
  return cache;
}

CorpusCache CorpusCache::load_or_empty(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return CorpusCache{};
  return load(path);
}

CorpusCache build_corpus(const EventTable& table, const std::set<GridId>& grids, WikiClient& client,
                         const std::filesystem::path& cache_path,
                         const std::filesystem::path& manifest_path, CorpusBuildStats* stats_out) {
  if (grids.empty()) throw ConfigError("build_corpus requires a non-empty grid set");

  CorpusCache cache = CorpusCache::load_or_empty(cache_path);
  CorpusBuildStats stats;
  stats.requested = grids.size();

  nlohmann::json run;
  run["started_at"] = iso8601_utc_now();
  nlohmann::json fetch_log = nlohmann::json::array();

  for (GridId grid : grids) {
    if (cache.contains(grid)) {
      ++stats.cache_hits;
      continue;
    }
    const std::string name = resolve_location(table, grid);
    FetchTrace trace;
    LocationText entry = client.fetch_text(name, &trace);
    entry.grid = grid;
    entry.fetched_at = iso8601_utc_now();
    if (entry.source == TextSource::missing) ++stats.missing;
    ++stats.fetched;

    nlohmann::json rec;
    rec["grid"] = grid.value();
    rec["name"] = name;
    rec["source"] = std::string(to_string(entry.source));
    rec["requests"] = trace.requests;
    nlohmann::json tried = nlohmann::json::array();
    for (const FetchAttempt& a : trace.attempts) tried.push_back({{"title", a.title}, {"found", a.found}});
    rec["tried"] = std::move(tried);
    fetch_log.push_back(std::move(rec));

    cache.insert(std::move(entry));
    cache.save(cache_path);  // resumable: persist after every fetch
  }

  cache.save(cache_path);

  run["requested"] = stats.requested;
  run["fetched"] = stats.fetched;
  run["cache_hits"] = stats.cache_hits;
  run["missing"] = stats.missing;
  run["fetch_log"] = std::move(fetch_log);

  nlohmann::json manifest;
  if (std::filesystem::exists(manifest_path)) {
    try {
      manifest = nlohmann::json::parse(read_file(manifest_path));
    } catch (const nlohmann::json::exception&) {
      manifest = nlohmann::json::object();
    }
  }
  if (!manifest.contains("runs")) manifest["runs"] = nlohmann::json::array();
  manifest["runs"].push_back(std::move(run));
  write_file_atomic(manifest_path, manifest.dump(2) + "\n");

  if (stats_out) *stats_out = stats;
  return cache;
}

}  // namespace floodlens
