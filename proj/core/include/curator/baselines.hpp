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

#ifndef CURATOR_BASELINES_HPP_
#define CURATOR_BASELINES_HPP_

#include <cstdint>
#include <vector>

#include "curator/clustering.hpp"
#include "curator/corpus.hpp"
#include "curator/scoring.hpp"

namespace curator {

/// Uniform sample of n records without replacement; original corpus
/// order preserved. Same seed, same subset.
Corpus baseline_random(const Corpus& corpus, std::size_t n, std::uint64_t seed);

/// Scores every record's full text by perplexity and keeps the n records
/// in the configured direction (lowest perplexity by default). Records
/// whose provider call fails are skipped with a warning. Ties break
/// toward the lower id.
Corpus baseline_perplexity(const Corpus& corpus, std::size_t n,
                           LogprobProvider& provider, bool lowest_first = true,
                           std::vector<std::string>* warnings = nullptr);

/// Fits k-means, then takes members by descending distance to their
/// centroid, round-robin across clusters, until n are collected.
/// Requires groups <= n <= |corpus|.
Corpus baseline_kmeans_distant(const Corpus& corpus,
                               const std::vector<EmbeddingVector>& vectors,
                               int groups, std::size_t n, std::uint64_t seed,
                               unsigned workers = 1);

}  // namespace curator

#endif  // CURATOR_BASELINES_HPP_
