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

#include "curator/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "curator/errors.hpp"
#include "curator/hashing.hpp"
#include "jsonl_cache.hpp"
#include "openai_client.hpp"

namespace curator {

void ScorerConfig::validate() const {
  if (kind == ScorerKind::RemoteLLM) {
    if (endpoint.empty()) throw ConfigError("remote scorer requires an endpoint URL");
    if (model.empty()) throw ConfigError("remote scorer requires a model name");
  }
  if (template_id.empty()) throw ConfigError("scorer template_id must be set");
}

void LogprobConfig::validate() const {
  if (kind == LogprobProviderKind::Remote) {
    if (endpoint.empty()) throw ConfigError("logprob provider requires an endpoint URL");
    if (model.empty()) throw ConfigError("logprob provider requires a model name");
  }
}

double log2_from_natural(double natural_log_prob) {
  return natural_log_prob / std::log(2.0);
}

double compute_perplexity(std::span<const double> token_log2_probs) {
  if (token_log2_probs.empty()) {
    throw ArgumentError("perplexity of an empty sequence is undefined");
  }
  double sum = 0.0;
  for (double lp : token_log2_probs) {
    if (lp > 0.0) {
      throw ArgumentError("token log2 probabilities must be <= 0, got " +
                          std::to_string(lp));
    }
    sum += lp;
  }
  const double mean = sum / static_cast<double>(token_log2_probs.size());
  return std::exp2(-mean);
}

namespace {

std::vector<std::string> whitespace_tokens(const std::string& text) {
  std::vector<std::string> tokens;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

std::string record_full_text(const InstructionRecord& record) {
  return record.instruction + "\n" + record.input + "\n" + record.output;
}

// Bounded in [0, 5]. The length term stays near-linear for realistic
// record sizes, so a synthesis covering two records scores close to the
// sum of its parents; type-token ratio and a seeded jitter add small
// per-record texture without dominating.
class DeterministicMockScorer final : public Scorer {
 public:
  explicit DeterministicMockScorer(ScorerConfig config)
      : config_(std::move(config)) {}

  QualityScore score_record(const InstructionRecord& record) override {
    const std::string text = record_full_text(record);
    const auto tokens = whitespace_tokens(text);
    const auto words = static_cast<double>(tokens.size());
    const double saturation = words / (words + 400.0);
    double ttr = 0.0;
    if (!tokens.empty()) {
      std::unordered_set<std::string> distinct(tokens.begin(), tokens.end());
      ttr = static_cast<double>(distinct.size()) / words;
    }
    const double jitter = unit_double(hash_bytes(text, config_.seed));
    const double value = 5.0 * saturation * (0.75 + 0.15 * ttr + 0.10 * jitter);
    return {value};
  }

  std::string scorer_id() const override {
    return "mock/" + std::to_string(config_.seed);
  }

 private:
  ScorerConfig config_;
};

constexpr std::string_view kScorePromptPrefix =
    "Rate the overall quality of the following instruction-tuning sample "
    "on a scale from 0 to 5, considering clarity, usefulness, and the "
    "depth of the response. Reply with a single decimal number and "
    "nothing else.\n\n";

// First decimal literal in the response, if any.
std::optional<double> parse_score_literal(const std::string& text) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (std::isdigit(static_cast<unsigned char>(text[i])) == 0) continue;
    std::size_t start = i;
    if (start > 0 && (text[start - 1] == '-' || text[start - 1] == '+')) --start;
    std::size_t end = i;
    while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
    if (end < text.size() && text[end] == '.') {
      std::size_t frac = end + 1;
      while (frac < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[frac]))) {
        ++frac;
      }
      if (frac > end + 1) end = frac;
    }
    try {
      return std::stod(text.substr(start, end - start));
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

class RemoteLlmScorer final : public Scorer {
 public:
  explicit RemoteLlmScorer(ScorerConfig config)
      : config_(std::move(config)),
        cache_(config_.cache_path),
        client_({config_.endpoint, config_.api_key_env, config_.max_retries,
                 /*backoff_base_ms=*/100}) {}

  QualityScore score_record(const InstructionRecord& record) override {
    const std::string key = content_key(
        {scorer_id(), record.instruction, record.input, record.output});
    if (auto hit = cache_.get(key)) {
      return {(*hit).at("score").get<double>()};
    }

    const std::string prompt = build_prompt(record);
    const nlohmann::json body{
        {"model", config_.model},
        {"temperature", 0.0},
        {"messages", nlohmann::json::array(
                         {{{"role", "user"}, {"content", prompt}}})}};

    std::string last_response;
    for (int attempt = 1; attempt <= std::max(1, config_.max_retries); ++attempt) {
      const nlohmann::json response = client_.post_json(body);
      last_response = extract_content(response);
      if (auto score = parse_score_literal(last_response)) {
        if (*score >= 0.0 && std::isfinite(*score)) {
          cache_.put(key, nlohmann::json{{"scorer_id", scorer_id()},
                                         {"score", *score}});
          return {*score};
        }
      }
    }
    throw ProviderError("scorer returned no parseable score after " +
                            std::to_string(config_.max_retries) +
                            " attempt(s); last response: " + last_response,
                        config_.max_retries);
  }

  std::string scorer_id() const override {
    return "llm/" + config_.model + "/" + config_.template_id;
  }

 private:
  std::string build_prompt(const InstructionRecord& record) const {
    std::string prompt(kScorePromptPrefix);
    prompt += "Instruction:\n" + record.instruction + "\n\n";
    prompt += "Input:\n" + (record.input.empty() ? "(empty)" : record.input) + "\n\n";
    prompt += "Response:\n" + record.output + "\n";
    return prompt;
  }

  static std::string extract_content(const nlohmann::json& response) {
    if (!response.contains("choices") || response.at("choices").empty()) {
      throw ProviderError("chat response carries no choices");
    }
    const auto& message = response.at("choices").at(0).at("message");
    return message.at("content").get<std::string>();
  }

  ScorerConfig config_;
  internal::JsonlCache cache_;
  internal::OpenAiClient client_;
};

class DeterministicMockLogprobs final : public LogprobProvider {
 public:
  explicit DeterministicMockLogprobs(LogprobConfig config)
      : config_(std::move(config)) {}

  std::vector<double> token_log2_probs(const std::string& text) override {
    if (text.empty()) throw ArgumentError("cannot fetch logprobs for empty text");
    const auto tokens = whitespace_tokens(text);
    std::vector<double> out;
    out.reserve(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const std::uint64_t h = hash_bytes(tokens[i], config_.seed + i);
      out.push_back(-8.0 * unit_double(h));  // in (-8, 0]
    }
    if (out.empty()) {  // whitespace-only text still yields one token slot
      out.push_back(-8.0 * unit_double(hash_bytes(text, config_.seed)));
    }
    return out;
  }

 private:
  LogprobConfig config_;
};

class RemoteLogprobs final : public LogprobProvider {
 public:
  explicit RemoteLogprobs(LogprobConfig config)
      : config_(std::move(config)),
        cache_(config_.cache_path),
        client_({config_.endpoint, config_.api_key_env, config_.max_retries,
                 /*backoff_base_ms=*/100}) {}

  std::vector<double> token_log2_probs(const std::string& text) override {
    if (text.empty()) throw ArgumentError("cannot fetch logprobs for empty text");
    const std::string key = content_key({"logprobs", config_.model, text});
    if (auto hit = cache_.get(key)) {
      return (*hit).at("log2_probs").get<std::vector<double>>();
    }
    const nlohmann::json body{{"model", config_.model},
                              {"prompt", text},
                              {"max_tokens", 0},
                              {"echo", true},
                              {"logprobs", 0}};
    const nlohmann::json response = client_.post_json(body);
    if (!response.contains("choices") || response.at("choices").empty() ||
        !response.at("choices").at(0).contains("logprobs")) {
      throw ProviderError(
          "endpoint does not support per-token logprobs: " + config_.endpoint);
    }
    const auto& lp = response.at("choices").at(0).at("logprobs");
    if (!lp.contains("token_logprobs")) {
      throw ProviderError("logprobs block lacks token_logprobs");
    }
    std::vector<double> out;
    for (const auto& v : lp.at("token_logprobs")) {
      if (v.is_null()) continue;  // first token has no conditioning context
      out.push_back(log2_from_natural(v.get<double>()));
    }
    if (out.empty()) {
      throw ProviderError("endpoint returned no usable token logprobs");
    }
    for (double& v : out) v = std::min(v, 0.0);  // clamp rounding overshoot
    cache_.put(key, nlohmann::json{{"model", config_.model}, {"log2_probs", out}});
    return out;
  }

 private:
  LogprobConfig config_;
  internal::JsonlCache cache_;
  internal::OpenAiClient client_;
};

}  // namespace

std::unique_ptr<Scorer> make_scorer(const ScorerConfig& config) {
  config.validate();
  if (config.kind == ScorerKind::DeterministicMock) {
    return std::make_unique<DeterministicMockScorer>(config);
  }
  return std::make_unique<RemoteLlmScorer>(config);
}

QualityScore score_record(const ScorerConfig& config,
                          const InstructionRecord& record) {
  return make_scorer(config)->score_record(record);
}

std::unique_ptr<LogprobProvider> make_logprob_provider(const LogprobConfig& config) {
  config.validate();
  if (config.kind == LogprobProviderKind::DeterministicMock) {
    return std::make_unique<DeterministicMockLogprobs>(config);
  }
  return std::make_unique<RemoteLogprobs>(config);
}

std::vector<double> fetch_token_logprobs(const LogprobConfig& config,
                                         const std::string& text) {
  return make_logprob_provider(config)->token_log2_probs(text);
}

}  // namespace curator
