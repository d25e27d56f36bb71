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

// Internal transport for OpenAI-compatible endpoints. Not installed.

#ifndef CURATOR_SRC_OPENAI_CLIENT_HPP_
#define CURATOR_SRC_OPENAI_CLIENT_HPP_

#include <string>

#include <json.hpp>

namespace curator::internal {

struct ParsedUrl {
  bool tls = false;
  std::string host;
  int port = 80;
  std::string path = "/";
};

/// Accepts http:// and https:// URLs. Throws ConfigError otherwise.
ParsedUrl parse_url(const std::string& url);

class OpenAiClient {
 public:
  struct Options {
    std::string endpoint;     // full URL including path
    std::string api_key_env;  // env var holding the bearer token; may be empty
    int max_retries = 3;      // total attempts
    int backoff_base_ms = 100;
  };

  explicit OpenAiClient(Options options);

  /// POSTs the JSON body; retries transport failures and 429/5xx with
  /// exponential backoff. Throws ProviderError (with attempt count) on
  /// exhaustion, ConfigError on non-retriable 4xx.
  nlohmann::json post_json(const nlohmann::json& body) const;

  const Options& options() const { return options_; }

 private:
  Options options_;
  ParsedUrl url_;
  std::string bearer_;
};

}  // namespace curator::internal

#endif  // CURATOR_SRC_OPENAI_CLIENT_HPP_
