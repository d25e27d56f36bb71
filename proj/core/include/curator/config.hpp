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

#ifndef CURATOR_CONFIG_HPP_
#define CURATOR_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "curator/clustering.hpp"
#include "curator/embedding.hpp"
#include "curator/merging.hpp"
#include "curator/scoring.hpp"
#include "curator/selection.hpp"

namespace curator {

struct PairingConfig {
  double tau = 0.5;
  /// When set, tau is auto-tuned so the expected post-merge size hits
  /// this target; the tuned value is logged in the run report.
  std::optional<std::size_t> auto_tune_target;
  bool keep_singletons = true;
};

struct OutputsConfig {
  std::string filtered_corpus = "filtered.json";  // relative to output_dir
  std::string merged_corpus = "merged.json";
  std::string report = "report.json";
  std::string projection_csv;  // empty: skip the 2-D projection export
  bool write_metadata = true;  // emit _meta ids/provenance in saved corpora
};

/// The full, serializable run configuration. The resolved snapshot (all
/// defaults filled in) is embedded in every run report.
struct PipelineConfig {
  std::string corpus_path;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  unsigned workers = 4;

  EmbeddingProviderConfig embedding;
  EmbeddingTextMode embedding_text_mode = EmbeddingTextMode::InstructionOnly;
  KMeansParams clustering;
  SelectionBudget selection;  // total_target 0 resolves to ceil(0.2 * n)
  PairingConfig pairing;
  ScorerConfig scorer;
  MergerConfig merger;
  GateConfig gate;
  LogprobConfig logprobs;
  OutputsConfig outputs;

  void validate() const;  // throws ConfigError

  std::filesystem::path checkpoints_dir() const {
    return std::filesystem::path(output_dir) / "checkpoints";
  }
  std::filesystem::path resolve_output(const std::string& name) const {
    return std::filesystem::path(output_dir) / name;
  }
};

PipelineConfig config_from_json_string(const std::string& json_text);
std::string config_to_json_string(const PipelineConfig& config, bool pretty = true);
PipelineConfig load_config(const std::filesystem::path& path);

/// SHA-256 of the canonical JSON serialization.
std::string config_hash(const PipelineConfig& config);

/// Forces every provider to its deterministic offline variant.
void apply_mock_mode(PipelineConfig& config);

}  // namespace curator

#endif  // CURATOR_CONFIG_HPP_
