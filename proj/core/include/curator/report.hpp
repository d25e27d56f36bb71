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

#ifndef CURATOR_REPORT_HPP_
#define CURATOR_REPORT_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "curator/selection.hpp"

namespace curator {

struct StageTimings {
  double embed_s = 0.0;
  double cluster_s = 0.0;
  double select_s = 0.0;
  double pair_s = 0.0;
  double merge_s = 0.0;
  double assemble_s = 0.0;
  double total_s = 0.0;
};

struct GateReport {
  double alpha = 0.75;
  std::string aggregation = "sum";
  std::size_t passed = 0;
  std::size_t rejected_by_gate = 0;
  std::size_t parse_failed = 0;
  std::size_t provider_failed = 0;
  /// Rejected merges that nevertheless outscored both parents — the
  /// sum-form gate demands post > alpha * (pre_a + pre_b), which is
  /// stricter than beating either parent.
  std::size_t rejected_despite_parent_improvement = 0;
  std::string note;
};

struct ClusterQualityDelta {
  int cluster = 0;
  std::size_t accepted = 0;
  double mean_pre = 0.0;
  double mean_post = 0.0;
  double percent_change = 0.0;
};

struct QualityDeltaReport {
  double mean_pre_pair = 0.0;    // mean parent score over attempted pairs
  double mean_post_merge = 0.0;  // mean accepted post-merge score
  double percent_change = 0.0;
  bool no_merges_accepted = false;
  std::vector<ClusterQualityDelta> per_cluster;
};

/// Everything a finished (or partial) run reports. The resolved config
/// snapshot and its hash make the run reproducible; timings live apart
/// from the deterministic payload.
struct RunReport {
  std::string config_hash;
  std::string config_json;  // resolved snapshot, canonical form
  std::vector<std::string> stages_completed;

  std::size_t initial_records = 0;
  std::size_t filtered_records = 0;
  std::size_t pairs = 0;
  std::size_t singletons = 0;
  std::size_t merged_records = 0;
  std::size_t accepted = 0;
  std::size_t fallback_pairs = 0;
  std::size_t kept_singletons = 0;
  bool keep_singletons = true;

  std::vector<ClusterSelectionStats> selection;
  double tau = 0.0;
  bool tau_auto_tuned = false;
  double pairing_rate = 0.0;
  std::size_t expected_post_merge = 0;

  GateReport gate;
  QualityDeltaReport quality;
  StageTimings timings;
  std::map<std::string, std::string> artifacts;  // name -> sha256
  std::vector<std::string> warnings;
};

/// Checks the conservation identities for the completed stages. Throws
/// ConsistencyError when counts do not add up.
void validate_report(const RunReport& report);

/// JSON serialization (validates first). Timings sit under their own
/// key so byte comparisons can strip them.
std::string report_to_json(const RunReport& report);
RunReport report_from_json(const std::string& json_text);

/// Validates, writes JSON, prints the human-readable summary to `out`.
void emit_report(const RunReport& report, const std::filesystem::path& path,
                 std::ostream& out);

void print_summary(const RunReport& report, std::ostream& out);

}  // namespace curator

#endif  // CURATOR_REPORT_HPP_
