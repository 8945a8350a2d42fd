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

#include "floodlens/wiki_mock.hpp"

#include <atomic>
#include <thread>

#include <nlohmann/json.hpp>

#include "floodlens/errors.hpp"
#include "floodlens/io.hpp"
#include "floodlens/strings.hpp"

namespace floodlens {

struct MockWikiServer::Impl {
  std::map<std::string, std::string> pages;
  httplib::Server server;
  std::thread worker;
  int port = 0;
  std::atomic<std::size_t> requests{0};

  const std::string* find_page(const std::string& title) const {
    for (const auto& [name, text] : pages) {
      if (to_lower(name) == to_lower(title)) return &text;
    }
    return nullptr;
  }

  void handle(const httplib::Request& req, httplib::Response& res) {
    ++requests;
    nlohmann::json out;
    if (req.get_param_value("action") != "query") {
      res.status = 400;
      res.set_content("{\"error\":\"unsupported action\"}", "application/json");
      return;
    }
    if (req.has_param("titles")) {
      const std::string title = req.get_param_value("titles");
      const std::string* text = find_page(title);
      nlohmann::json pages_json;
      if (text) {
        pages_json["1"] = {{"pageid", 1}, {"title", title}, {"extract", *text}};
      } else {
        pages_json["-1"] = {{"title", title}, {"missing", ""}};
      }
      out["query"]["pages"] = std::move(pages_json);
    } else if (req.get_param_value("list") == "search") {
      const std::string query = to_lower(req.get_param_value("srsearch"));
      nlohmann::json hits = nlohmann::json::array();
      // Deterministic ranking: lexicographically first title containing the
      // query as a substring.
      for (const auto& [name, text] : pages) {
        if (to_lower(name).find(query) != std::string::npos) {
          hits.push_back({{"title", name}});
          break;
        }
      }
      out["query"]["search"] = std::move(hits);
    } else {
      res.status = 400;
      res.set_content("{\"error\":\"unsupported query\"}", "application/json");
      return;
    }
    res.set_content(out.dump(), "application/json");
  }
};

MockWikiServer::MockWikiServer(std::map<std::string, std::string> pages)
    : impl_(std::make_unique<Impl>()) {
  impl_->pages = std::move(pages);
}

MockWikiServer::~MockWikiServer() { stop(); }

void MockWikiServer::start() {
  impl_->server.Get("/w/api.php", [this](const httplib::Request& req, httplib::Response& res) {
    impl_->handle(req, res);
  });
  impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
  if (impl_->port <= 0) throw EnvironmentError("mock wiki server failed to bind a port");
  impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void MockWikiServer::stop() {
  if (impl_->worker.joinable()) {
    impl_->server.stop();
    impl_->worker.join();
  }
}

int MockWikiServer::port() const { return impl_->port; }

std::string MockWikiServer::base_url() const {
  return "http://127.0.0.1:" + std::to_string(impl_->port);
}

std::size_t MockWikiServer::request_count() const { return impl_->requests.load(); }

std::map<std::string, std::string> load_pages_json(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("bad pages file " + path.string() + ": " + e.what());
  }
  std::map<std::string, std::string> pages;
  for (const auto& [title, text] : j.at("pages").items()) {
    pages[title] = text.get<std::string>();
  }
  return pages;
}

}  // namespace floodlens
