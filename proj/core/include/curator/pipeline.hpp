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

#ifndef CURATOR_PIPELINE_HPP_
#define CURATOR_PIPELINE_HPP_

#include <iosfwd>

#include "curator/config.hpp"
#include "curator/corpus.hpp"
#include "curator/report.hpp"

namespace curator {

enum class PipelineStage { Embed, Cluster, Select, Pair, Merge, Assemble };

struct PipelineResult {
  Corpus filtered;  // populated from the select stage onward
  Corpus merged;    // populated when the run reaches assemble
  RunReport report;
};

/// Runs stages in order up to and including `last`, checkpointing each
/// stage under <output_dir>/checkpoints. A stage whose recorded input
/// hash and artifact hash still match is loaded instead of recomputed;
/// a killed merge stage resumes from its partial outcome log. Output
/// files (filtered/merged corpus, report, optional projection CSV) are
/// written as their stages complete. `log`, when non-null, receives
/// progress lines and the final summary.
PipelineResult run_pipeline_until(const PipelineConfig& config,
                                  PipelineStage last, std::ostream* log = nullptr);

PipelineResult run_pipeline(const PipelineConfig& config,
                            std::ostream* log = nullptr);

}  // namespace curator

#endif  // CURATOR_PIPELINE_HPP_
