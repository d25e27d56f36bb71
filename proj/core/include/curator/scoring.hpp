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

#ifndef CURATOR_SCORING_HPP_
#define CURATOR_SCORING_HPP_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "curator/corpus.hpp"

namespace curator {

/// Scalar quality judgment for one record. Finite and non-negative.
struct QualityScore {
  double value = 0.0;
};

enum class ScorerKind { RemoteLLM, DeterministicMock };

struct ScorerConfig {
  ScorerKind kind = ScorerKind::DeterministicMock;
  std::string endpoint;    // RemoteLLM: OpenAI-compatible chat completions URL
  std::string model;
  std::string template_id = "score-v1";  // versioned prompt template
  std::string api_key_env;
  std::string cache_path;  // optional JSONL score cache
  int max_retries = 3;
  std::uint64_t seed = 0;  // DeterministicMock

  void validate() const;
};

class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual QualityScore score_record(const InstructionRecord& record) = 0;
  /// Stable identity used in cache keys and run reports.
  virtual std::string scorer_id() const = 0;
};

std::unique_ptr<Scorer> make_scorer(const ScorerConfig& config);

QualityScore score_record(const ScorerConfig& config,
                          const InstructionRecord& record);

/// Converts a natural-log probability to base 2.
double log2_from_natural(double natural_log_prob);

/// 2^(-(1/N) * sum of per-token base-2 log probabilities). Requires a
/// non-empty sequence of entries <= 0; returns a value >= 1.
double compute_perplexity(std::span<const double> token_log2_probs);

enum class LogprobProviderKind { Remote, DeterministicMock };

struct LogprobConfig {
  LogprobProviderKind kind = LogprobProviderKind::DeterministicMock;
  std::string endpoint;  // Remote: completions URL with logprob support
  std::string model;
  std::string api_key_env;
  std::string cache_path;
  int max_retries = 3;
  std::uint64_t seed = 0;  // DeterministicMock

  void validate() const;
};

class LogprobProvider {
 public:
  virtual ~LogprobProvider() = default;
  /// One base-2 log probability per token of `text`, order preserved.
  /// Rejects empty text before any call.
  virtual std::vector<double> token_log2_probs(const std::string& text) = 0;
};

std::unique_ptr<LogprobProvider> make_logprob_provider(const LogprobConfig& config);

/// Convenience: fetch then return the per-token base-2 log probabilities.
std::vector<double> fetch_token_logprobs(const LogprobConfig& config,
                                         const std::string& text);

}  // namespace curator

#endif  // CURATOR_SCORING_HPP_
