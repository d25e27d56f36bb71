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

#ifndef CURATOR_MERGING_HPP_
#define CURATOR_MERGING_HPP_

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "curator/corpus.hpp"
#include "curator/pairing.hpp"
#include "curator/scoring.hpp"

namespace curator {

/// The concatenated two-record context a synthesizer works from. Both
/// records come from the same cluster of the pre-merge corpus.
struct MergeContext {
  InstructionRecord a;
  InstructionRecord b;
  int cluster = 0;

  /// Resolves both pair ids; throws ArgumentError when either is absent.
  static MergeContext from_pair(const CandidatePair& pair, const Corpus& corpus);
};

enum class MergeVerdict { Accepted, RejectedByGate, ParseFailed, ProviderFailed };
enum class MergeDisposition { UseMerged, KeepBothOriginals };

std::string to_string(MergeVerdict verdict);
std::string to_string(MergeDisposition disposition);

/// Result of one merge attempt chain for a pair.
struct MergeOutcome {
  CandidatePair pair;
  std::optional<InstructionRecord> merged;  // present iff Accepted
  double pre_score_a = 0.0;
  double pre_score_b = 0.0;
  std::optional<double> post_score;
  MergeVerdict verdict = MergeVerdict::ProviderFailed;
  MergeDisposition disposition = MergeDisposition::KeepBothOriginals;
  int attempts = 0;
  std::string raw_response;  // kept for audit on parse failure
};

enum class GateAggregation { SumOfParents, MeanOfParents };

std::string to_string(GateAggregation aggregation);
GateAggregation gate_aggregation_from_string(const std::string& name);

struct GateConfig {
  double alpha = 0.75;
  GateAggregation aggregation = GateAggregation::SumOfParents;

  void validate() const;  // alpha must lie in (0, 1)
};

/// Strict-inequality quality preservation check. Sum form: pass iff
/// post > alpha * (pre_a + pre_b); mean form divides the sum by two.
bool quality_gate(double post_score, double pre_score_a, double pre_score_b,
                  const GateConfig& config);

inline constexpr std::string_view kMergePromptTemplateId = "merge-v1";

/// Fixed prompt (template kMergePromptTemplateId): both source records
/// verbatim, empty inputs marked explicitly, and the exact delimited
/// response block the parser expects.
std::string build_merge_prompt(const MergeContext& ctx);

struct MergedFields {
  std::string instruction;
  std::string input;
  std::string output;
};

/// Extracts the delimited triple from a synthesizer response. Tolerates
/// surrounding prose; returns nullopt when a delimiter is missing or the
/// instruction or output comes back empty.
std::optional<MergedFields> parse_merge_response(const std::string& response);

enum class MergerKind { RemoteLLM, DeterministicMock };

struct MergerConfig {
  MergerKind kind = MergerKind::DeterministicMock;
  std::string endpoint;  // RemoteLLM: OpenAI-compatible chat completions URL
  std::string model;
  double temperature = 0.0;
  std::string api_key_env;
  int max_retries = 3;      // transport retries per synthesis call
  int max_attempts = 2;     // re-synthesis attempts on parse/gate failure
  int max_in_flight = 4;

  void validate() const;
};

class Merger {
 public:
  virtual ~Merger() = default;
  /// Returns the raw response text; both providers flow through
  /// parse_merge_response. Throws ProviderError on exhaustion.
  virtual std::string synthesize(const MergeContext& ctx) = 0;
};

/// The deterministic mock joins instructions with " and " and
/// concatenates inputs and outputs — plain concatenation synthesis,
/// useful as an offline baseline and for exercising the parse path.
std::unique_ptr<Merger> make_merger(const MergerConfig& config);

/// Full per-pair flow: score parents (cached upstream), synthesize,
/// parse, score the merged record, gate. Non-accepted outcomes keep
/// both originals; provider exhaustion yields ProviderFailed rather
/// than aborting the run.
MergeOutcome merge_pair(const CandidatePair& pair, const Corpus& corpus,
                        Merger& merger, Scorer& scorer, const GateConfig& gate,
                        int max_attempts);

/// Builds the post-merge corpus: accepted outcomes contribute their
/// merged record (fresh id, parents recorded in provenance), all others
/// contribute both parents, singletons append per flag. Output order is
/// cluster, then pair rank, then singletons in corpus order.
Corpus assemble_merged_corpus(const Corpus& corpus,
                              const std::vector<MergeOutcome>& outcomes,
                              const std::vector<std::pair<int, std::string>>& singletons,
                              bool keep_singletons);

}  // namespace curator

#endif  // CURATOR_MERGING_HPP_
