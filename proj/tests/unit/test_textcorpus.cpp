#include <doctest.h>

#include <cstdlib>

#include "floodlens/errors.hpp"
#include "floodlens/textcorpus.hpp"
#include "floodlens/wiki_mock.hpp"
#include "support/fixtures.hpp"

using namespace floodlens;
using namespace floodlens::testing;

namespace {

const char* kBostonExtract =
    "Boston is the capital of Massachusetts.\n"
    "\n"
    "== History ==\n"
    "Founded in 1630.\n"
    "\n"
    "== Geography ==\n"
    "Boston has an area of 89.6 square miles and sits beside a large harbor.\n"
    "The Charles River separates it from Cambridge.\n"
    "\n"
    "Further geography details in a second paragraph.\n"
    "\n"
    "== Climate ==\n"
    "Humid continental.\n";

std::map<std::string, std::string> fixture_pages() {
  return {
      {"Boston", kBostonExtract},
      {"Plainville", "Plainville is a small town.\n\n== History ==\nOld.\n"},
      {"Riverside City",
       "Riverside City stands on a river.\n\n== Geography and climate ==\nLow plains flood often.\n"},
  };
}

EventTable named_table() {
  return EventTable::from_events({
      make_event("A", DisasterType::flood, 2000, 10.5, 20.5, "Boston"),
      make_event("B", DisasterType::flood, 2001, 10.6, 20.6, "Boston"),
      make_event("C", DisasterType::storm, 2002, 10.7, 20.7, "Suffolk"),
      make_event("D", DisasterType::flood, 2000, 11.5, 20.5, "A"),
      make_event("E", DisasterType::storm, 2001, 11.6, 20.6, "B"),
      make_event("F", DisasterType::flood, 2003, 12.5, 20.5, "Sindh"),
  });
}

}  // namespace

TEST_SUITE("textcorpus") {

TEST_CASE("resolve_location majority and tie-breaks") {
  const auto table = named_table();
  CHECK(resolve_location(table, grid_id(cell_of(10.5, 20.5))) == "Boston");
  CHECK(resolve_location(table, grid_id(cell_of(11.5, 20.5))) == "A");  // lexicographic tie
  CHECK(resolve_location(table, grid_id(cell_of(12.5, 20.5))) == "Sindh");
  CHECK_THROWS_AS(resolve_location(table, GridId(0)), LookupError);
}

TEST_CASE("geography extraction finds the first paragraph of the section") {
  const auto para = extract_geography_paragraph(kBostonExtract);
  REQUIRE(para.has_value());
  CHECK(*para ==
        "Boston has an area of 89.6 square miles and sits beside a large harbor. "
        "The Charles River separates it from Cambridge.");
  CHECK(!extract_geography_paragraph("No sections at all.\n").has_value());
  CHECK(extract_geography_paragraph("Lead.\n\n== Geography and climate ==\nFlat.\n").value() ==
        "Flat.");
}

TEST_CASE("summary extraction returns the lead text") {
  CHECK(extract_summary(kBostonExtract) == "Boston is the capital of Massachusetts.");
  CHECK(extract_summary("== Geography ==\nBody only.\n").empty());
}

TEST_CASE("normalization collapses whitespace and strips doubled quotes") {
  CHECK(normalize_plaintext("  a\t\tb\n c  ") == "a b c");
  CHECK(normalize_plaintext("''italic'' text") == "'italic' text");
}

TEST_CASE("synonym candidates") {
  CHECK(synonym_candidates("Boston", std::nullopt) == std::vector<std::string>{"Boston"});
  CHECK(synonym_candidates("Boston", std::string("Lincolnshire")) ==
        std::vector<std::string>{"Boston", "Boston (Lincolnshire)"});
}

TEST_CASE("wiki base url resolution honors the environment") {
  ::setenv("FLOODLENS_WIKI_BASE", "http://localhost:9", 1);
  CHECK(default_wiki_base() == "http://localhost:9");
  ::unsetenv("FLOODLENS_WIKI_BASE");
  CHECK(default_wiki_base() == "https://en.wikipedia.org");
}

TEST_CASE("client walks the fallback chain against the mock server") {
  MockWikiServer server(fixture_pages());
  server.start();
  WikiClientConfig config;
  config.base_url = server.base_url();
  config.rate_limit_rps = 0.0;  // no throttling in tests
  config.max_retries = 0;
  WikiClient client(config);

  SUBCASE("geography section straight from the exact page") {
    const LocationText t = client.fetch_text("Boston");
    CHECK(t.source == TextSource::geography_section);
    CHECK(t.text.find("89.6 square miles") != std::string::npos);
    CHECK(t.location_name == "Boston");
  }
  SUBCASE("summary fallback when the page has no geography section") {
    const LocationText t = client.fetch_text("Plainville");
    CHECK(t.source == TextSource::summary_section);
    CHECK(t.text == "Plainville is a small town.");
  }
  SUBCASE("search synonym rescues a partial name") {
    const LocationText t = client.fetch_text("Riverside");
    CHECK(t.source == TextSource::geography_section);
    CHECK(t.text == "Low plains flood often.");
  }
  SUBCASE("terminal fallback is the literal missing text") {
    const LocationText t = client.fetch_text("Atlantis");
    CHECK(t.source == TextSource::missing);
    CHECK(t.text == "missing");
  }
  server.stop();
}

TEST_CASE("unreachable endpoint surfaces a transient error after retries") {
  WikiClientConfig config;
  config.base_url = "http://127.0.0.1:9";  // nothing listens there
  config.rate_limit_rps = 0.0;
  config.max_retries = 1;
  config.backoff_initial_seconds = 0.01;
  config.timeout_seconds = 1;
  WikiClient client(config);
  CHECK_THROWS_AS(client.fetch_text("Boston"), TransientError);
}

TEST_CASE("cache round-trips through its JSONL form") {
  TempDir dir("corpus_cache");
  CorpusCache cache;
  cache.insert({GridId(5), "Boston", "text one", TextSource::geography_section, "2026-01-01T00:00:00Z"});
  cache.insert({GridId(64799), "Nowhere", "missing", TextSource::missing, "2026-01-01T00:00:01Z"});
  cache.save(dir / "cache.jsonl");
  const CorpusCache loaded = CorpusCache::load(dir / "cache.jsonl");
  CHECK(loaded == cache);
  CHECK(CorpusCache::load_or_empty(dir / "nothing.jsonl").size() == 0);
  CHECK_THROWS_AS(cache.at(GridId(7)), LookupError);
}

TEST_CASE("build_corpus covers every grid, resumes from cache, logs fetches") {
  TempDir dir("corpus_build");
  MockWikiServer server(fixture_pages());
  server.start();
  WikiClientConfig config;
  config.base_url = server.base_url();
  config.rate_limit_rps = 0.0;
  config.max_retries = 0;
  WikiClient client(config);

  // three grids: Boston (geography), Suffolk (missing page), Sindh (missing page)
  const auto table = named_table();
  std::set<GridId> grids{grid_id(cell_of(10.5, 20.5)), grid_id(cell_of(12.5, 20.5))};
  // resolve_location("Suffolk") never wins its grid, so add the third grid explicitly
  grids.insert(grid_id(cell_of(11.5, 20.5)));

  CorpusBuildStats stats;
  const CorpusCache first = build_corpus(table, grids, client, dir / "cache.jsonl",
                                         dir / "manifest.json", &stats);
  CHECK(first.size() == 3);
  CHECK(stats.requested == 3);
  CHECK(stats.fetched == 3);
  CHECK(stats.cache_hits == 0);
  // "Boston" resolves directly, "A" lands on Plainville through search,
  // "Sindh" matches nothing.
  CHECK(stats.missing == 1);
  CHECK(first.at(grid_id(cell_of(10.5, 20.5))).source == TextSource::geography_section);
  CHECK(first.at(grid_id(cell_of(11.5, 20.5))).source == TextSource::summary_section);
  CHECK(first.at(grid_id(cell_of(12.5, 20.5))).source == TextSource::missing);
  for (GridId g : grids) {
    CHECK(first.contains(g));
    const LocationText& entry = first.at(g);
    CHECK((entry.source == TextSource::missing) == (entry.text == "missing"));
    CHECK(!entry.text.empty());
  }

  const std::size_t requests_after_first = server.request_count();
  CorpusBuildStats rerun_stats;
  const CorpusCache second = build_corpus(table, grids, client, dir / "cache.jsonl",
                                          dir / "manifest.json", &rerun_stats);
  CHECK(rerun_stats.fetched == 0);
  CHECK(rerun_stats.cache_hits == 3);
  CHECK(server.request_count() == requests_after_first);  // zero network calls
  CHECK(second == first);
  server.stop();
}

TEST_CASE("empty grid set is rejected") {
  WikiClientConfig config;
  config.base_url = "http://127.0.0.1:9";
  WikiClient client(config);
  TempDir dir("corpus_empty");
  CHECK_THROWS_AS(build_corpus(EventTable{}, {}, client, dir / "c.jsonl", dir / "m.json", nullptr),
                  ConfigError);
}

}  // TEST_SUITE
