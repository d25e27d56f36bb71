// Copyright 2026 The Curator Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "openai_client.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <memory>
#include <thread>

#include "curator/errors.hpp"

namespace curator::internal {

ParsedUrl parse_url(const std::string& url) {
  ParsedUrl out;
  std::string rest;
  if (url.rfind("https://", 0) == 0) {
    out.tls = true;
    out.port = 443;
    rest = url.substr(8);
  } else if (url.rfind("http://", 0) == 0) {
    out.tls = false;
    out.port = 80;
    rest = url.substr(7);
  } else {
    throw ConfigError("endpoint must be an http(s) URL: " + url);
  }
  auto slash = rest.find('/');
  std::string authority = slash == std::string::npos ? rest : rest.substr(0, slash);
  out.path = slash == std::string::npos ? "/" : rest.substr(slash);
  if (authority.empty()) {
    throw ConfigError("endpoint URL has no host: " + url);
  }
  auto colon = authority.rfind(':');
  if (colon != std::string::npos) {
    out.host = authority.substr(0, colon);
    try {
      out.port = std::stoi(authority.substr(colon + 1));
    } catch (const std::exception&) {
      throw ConfigError("bad port in endpoint URL: " + url);
    }
  } else {
    out.host = authority;
  }
  return out;
}

OpenAiClient::OpenAiClient(Options options) : options_(std::move(options)) {
  url_ = parse_url(options_.endpoint);
  if (!options_.api_key_env.empty()) {
    if (const char* key = std::getenv(options_.api_key_env.c_str())) {
      bearer_ = key;
    }
  }
}

namespace {

bool retriable_status(int status) {
  return status == 429 || (status >= 500 && status < 600);
}

std::unique_ptr<httplib::Client> make_client(const ParsedUrl& url) {
  auto cli = std::make_unique<httplib::Client>(
      (url.tls ? "https://" : "http://") + url.host + ":" + std::to_string(url.port));
  cli->set_connection_timeout(10, 0);
  cli->set_read_timeout(120, 0);
  cli->set_write_timeout(30, 0);
  return cli;
}

}  // namespace

nlohmann::json OpenAiClient::post_json(const nlohmann::json& body) const {
  const std::string payload = body.dump();
  httplib::Headers headers;
  if (!bearer_.empty()) {
    headers.emplace("Authorization", "Bearer " + bearer_);
  }
  std::string last_error;
  const int attempts = std::max(1, options_.max_retries);
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    if (attempt > 1) {
      const int delay = options_.backoff_base_ms * (1 << (attempt - 2));
      std::this_thread::sleep_for(std::chrono::milliseconds(std::min(delay, 5000)));
    }
    auto cli = make_client(url_);
    auto res = cli->Post(url_.path, headers, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) {
      try {
        return nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::parse_error& e) {
        last_error = std::string("response is not JSON: ") + e.what();
        continue;
      }
    }
    if (retriable_status(res->status)) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    throw ConfigError("endpoint " + options_.endpoint + " rejected request: HTTP " +
                      std::to_string(res->status) + " " + res->body);
  }
  throw ProviderError("request to " + options_.endpoint + " failed after " +
                          std::to_string(attempts) + " attempt(s): " + last_error,
                      attempts);
}

}  // namespace curator::internal
