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

#include "curator/merging.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "curator/errors.hpp"
#include "openai_client.hpp"

namespace curator {

namespace {

constexpr std::string_view kInstructionMarker = "<<<INSTRUCTION";
constexpr std::string_view kInputMarker = "<<<INPUT";
constexpr std::string_view kOutputMarker = "<<<OUTPUT";
constexpr std::string_view kEndMarker = "<<<END";

std::string trim(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  return std::string(text.substr(begin, end - begin));
}

std::string join_nonempty(const std::string& a, const std::string& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return a + "\n" + b;
}

}  // namespace

MergeContext MergeContext::from_pair(const CandidatePair& pair,
                                     const Corpus& corpus) {
  const InstructionRecord* a = corpus.find(pair.id_a);
  const InstructionRecord* b = corpus.find(pair.id_b);
  if (a == nullptr || b == nullptr) {
    throw ArgumentError("merge pair references unknown record id: " +
                        (a == nullptr ? pair.id_a : pair.id_b));
  }
  return {*a, *b, pair.cluster};
}

std::string to_string(MergeVerdict verdict) {
  switch (verdict) {
    case MergeVerdict::Accepted: return "accepted";
    case MergeVerdict::RejectedByGate: return "rejected_by_gate";
    case MergeVerdict::ParseFailed: return "parse_failed";
    case MergeVerdict::ProviderFailed: return "provider_failed";
  }
  return "provider_failed";
}

std::string to_string(MergeDisposition disposition) {
  return disposition == MergeDisposition::UseMerged ? "use_merged"
                                                    : "keep_both_originals";
}

std::string to_string(GateAggregation aggregation) {
  return aggregation == GateAggregation::SumOfParents ? "sum" : "mean";
}

GateAggregation gate_aggregation_from_string(const std::string& name) {
  if (name == "sum") return GateAggregation::SumOfParents;
  if (name == "mean") return GateAggregation::MeanOfParents;
  throw ConfigError("unknown gate aggregation: " + name);
}

void GateConfig::validate() const {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw ConfigError("gate alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
}

bool quality_gate(double post_score, double pre_score_a, double pre_score_b,
                  const GateConfig& config) {
  config.validate();
  double threshold = config.alpha * (pre_score_a + pre_score_b);
  if (config.aggregation == GateAggregation::MeanOfParents) threshold /= 2.0;
  return post_score > threshold;  // strict, as specified
}

std::string build_merge_prompt(const MergeContext& ctx) {
  auto field = [](const std::string& v) {
    return v.empty() ? std::string("(empty)") : v;
  };
  std::ostringstream out;
  out << "You are given two related instruction-tuning samples. Synthesize "
         "ONE sample that covers both tasks without losing information: a "
         "single instruction, a single input (may be empty), and a single "
         "output answering everything the sources answer.\n"
         "Respond with exactly this block and nothing else inside it:\n\n"
      << kInstructionMarker << "\n(merged instruction)\n"
      << kInputMarker << "\n(merged input, or blank)\n"
      << kOutputMarker << "\n(merged output)\n"
      << kEndMarker << "\n\n"
      << "--- Source A ---\n"
      << "Instruction: " << ctx.a.instruction << "\n"
      << "Input: " << field(ctx.a.input) << "\n"
      << "Output: " << ctx.a.output << "\n\n"
      << "--- Source B ---\n"
      << "Instruction: " << ctx.b.instruction << "\n"
      << "Input: " << field(ctx.b.input) << "\n"
      << "Output: " << ctx.b.output << "\n";
  return out.str();
}

std::optional<MergedFields> parse_merge_response(const std::string& response) {
  const auto pos_instruction = response.find(kInstructionMarker);
  if (pos_instruction == std::string::npos) return std::nullopt;
  const auto pos_input = response.find(kInputMarker, pos_instruction + kInstructionMarker.size());
  if (pos_input == std::string::npos) return std::nullopt;
  const auto pos_output = response.find(kOutputMarker, pos_input + kInputMarker.size());
  if (pos_output == std::string::npos) return std::nullopt;
  const auto pos_end = response.find(kEndMarker, pos_output + kOutputMarker.size());
  if (pos_end == std::string::npos) return std::nullopt;

  auto section = [&](std::size_t from, std::size_t to) {
    return trim(std::string_view(response).substr(from, to - from));
  };
  MergedFields fields;
  fields.instruction = section(pos_instruction + kInstructionMarker.size(), pos_input);
  fields.input = section(pos_input + kInputMarker.size(), pos_output);
  fields.output = section(pos_output + kOutputMarker.size(), pos_end);
  if (!has_content(fields.instruction) || !has_content(fields.output)) {
    return std::nullopt;  // fail closed
  }
  return fields;
}

void MergerConfig::validate() const {
  if (kind == MergerKind::RemoteLLM) {
    if (endpoint.empty()) throw ConfigError("remote merger requires an endpoint URL");
    if (model.empty()) throw ConfigError("remote merger requires a model name");
  }
  if (max_attempts < 1) throw ConfigError("merger max_attempts must be >= 1");
}

namespace {

class DeterministicMockMerger final : public Merger {
 public:
  std::string synthesize(const MergeContext& ctx) override {
    std::ostringstream out;
    out << kInstructionMarker << "\n"
        << ctx.a.instruction << " and " << ctx.b.instruction << "\n"
        << kInputMarker << "\n"
        << join_nonempty(ctx.a.input, ctx.b.input) << "\n"
        << kOutputMarker << "\n"
        << join_nonempty(ctx.a.output, ctx.b.output) << "\n"
        << kEndMarker << "\n";
    return out.str();
  }
};

class RemoteLlmMerger final : public Merger {
 public:
  explicit RemoteLlmMerger(MergerConfig config)
      : config_(std::move(config)),
        client_({config_.endpoint, config_.api_key_env, config_.max_retries,
                 /*backoff_base_ms=*/100}) {}

  std::string synthesize(const MergeContext& ctx) override {
    const nlohmann::json body{
        {"model", config_.model},
        {"temperature", config_.temperature},
        {"messages",
         nlohmann::json::array(
             {{{"role", "user"}, {"content", build_merge_prompt(ctx)}}})}};
    const nlohmann::json response = client_.post_json(body);
    if (!response.contains("choices") || response.at("choices").empty()) {
      throw ProviderError("merge response carries no choices");
    }
    return response.at("choices").at(0).at("message").at("content")
        .get<std::string>();
  }

 private:
  MergerConfig config_;
  internal::OpenAiClient client_;
};

}  // namespace

std::unique_ptr<Merger> make_merger(const MergerConfig& config) {
  config.validate();
  if (config.kind == MergerKind::DeterministicMock) {
    return std::make_unique<DeterministicMockMerger>();
  }
  return std::make_unique<RemoteLlmMerger>(config);
}

MergeOutcome merge_pair(const CandidatePair& pair, const Corpus& corpus,
                        Merger& merger, Scorer& scorer, const GateConfig& gate,
                        int max_attempts) {
  const MergeContext ctx = MergeContext::from_pair(pair, corpus);
  MergeOutcome outcome;
  outcome.pair = pair;
  outcome.pre_score_a = scorer.score_record(ctx.a).value;
  outcome.pre_score_b = scorer.score_record(ctx.b).value;

  for (int attempt = 1; attempt <= std::max(1, max_attempts); ++attempt) {
    outcome.attempts = attempt;
    std::string response;
    try {
      response = merger.synthesize(ctx);
    } catch (const ProviderError&) {
      outcome.verdict = MergeVerdict::ProviderFailed;
      outcome.disposition = MergeDisposition::KeepBothOriginals;
      return outcome;
    }
    const auto fields = parse_merge_response(response);
    if (!fields.has_value()) {
      outcome.verdict = MergeVerdict::ParseFailed;
      outcome.raw_response = response;
      continue;  // re-synthesize if attempts remain
    }
    InstructionRecord merged;
    merged.instruction = fields->instruction;
    merged.input = fields->input;
    merged.output = fields->output;
    merged.provenance = Provenance::merged(pair.id_a, pair.id_b);
    const double post = scorer.score_record(merged).value;
    outcome.post_score = post;
    if (quality_gate(post, outcome.pre_score_a, outcome.pre_score_b, gate)) {
      outcome.merged = std::move(merged);
      outcome.verdict = MergeVerdict::Accepted;
      outcome.disposition = MergeDisposition::UseMerged;
      outcome.raw_response.clear();
      return outcome;
    }
    outcome.verdict = MergeVerdict::RejectedByGate;
  }
  outcome.disposition = MergeDisposition::KeepBothOriginals;
  if (outcome.verdict != MergeVerdict::ParseFailed) outcome.raw_response.clear();
  return outcome;
}

Corpus assemble_merged_corpus(
    const Corpus& corpus, const std::vector<MergeOutcome>& outcomes,
    const std::vector<std::pair<int, std::string>>& singletons,
    bool keep_singletons) {
  // Guard the disjoint-cover contract: no id may enter the output twice.
  std::unordered_set<std::string> seen;
  auto claim = [&seen](const std::string& id) {
    if (!seen.insert(id).second) {
      throw ConsistencyError("record " + id +
                             " appears in more than one pair or singleton");
    }
  };

  struct ClusterBucket {
    std::vector<const MergeOutcome*> outcomes;
    std::vector<std::string> singletons;
  };
  std::map<int, ClusterBucket> clusters;
  for (const MergeOutcome& outcome : outcomes) {
    claim(outcome.pair.id_a);
    claim(outcome.pair.id_b);
    if (outcome.verdict == MergeVerdict::Accepted && !outcome.merged.has_value()) {
      throw ConsistencyError("accepted outcome without a merged record");
    }
    clusters[outcome.pair.cluster].outcomes.push_back(&outcome);
  }
  for (const auto& [cluster, id] : singletons) {
    claim(id);
    clusters[cluster].singletons.push_back(id);
  }

  std::vector<InstructionRecord> records;
  std::size_t merged_seq = 0;
  auto fresh_id = [&]() {
    for (;;) {
      std::ostringstream out;
      out << 'm';
      out.width(6);
      out.fill('0');
      out << merged_seq++;
      if (!corpus.contains(out.str())) return out.str();
    }
  };

  for (auto& [cluster, bucket] : clusters) {
    (void)cluster;
    for (const MergeOutcome* outcome : bucket.outcomes) {
      if (outcome->verdict == MergeVerdict::Accepted) {
        InstructionRecord rec = *outcome->merged;
        rec.id = fresh_id();
        records.push_back(std::move(rec));
      } else {
        records.push_back(*corpus.find(outcome->pair.id_a));
        records.push_back(*corpus.find(outcome->pair.id_b));
      }
    }
    if (keep_singletons) {
      std::sort(bucket.singletons.begin(), bucket.singletons.end(),
                [&corpus](const std::string& a, const std::string& b) {
                  return corpus.position_of(a) < corpus.position_of(b);
                });
      for (const std::string& id : bucket.singletons) {
        records.push_back(*corpus.find(id));
      }
    }
  }
  return Corpus(std::move(records));
}

}  // namespace curator
