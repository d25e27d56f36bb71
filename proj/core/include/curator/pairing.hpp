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

#ifndef CURATOR_PAIRING_HPP_
#define CURATOR_PAIRING_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "curator/selection.hpp"

namespace curator {

/// Two same-cluster records whose embedding similarity met the run's
/// threshold. id_a precedes id_b in the cluster's canonical (corpus)
/// order.
struct CandidatePair {
  std::string id_a;
  std::string id_b;
  double similarity = 0.0;
  int cluster = 0;
};

/// Vertex-disjoint pairs plus the ids left unmatched. Together they
/// cover the cluster subset exactly once: 2*|pairs| + |singletons| == n.
struct PairingResult {
  std::vector<CandidatePair> pairs;      // in acceptance (rank) order
  std::vector<std::string> singletons;   // in canonical member order
};

/// Greedy maximum-weight matching over edges with similarity >= tau:
/// edges sorted by similarity descending (ties by member index pair
/// ascending), accepted iff both endpoints are still unmatched. tau must
/// lie in (-1, 1].
PairingResult mine_pairs(const SimilarityBlock& block, double tau);

struct PairingStats {
  std::size_t records = 0;
  std::size_t pairs = 0;
  std::size_t singletons = 0;
  double pairing_rate = 0.0;  // 2*pairs / records
  std::size_t expected_post_merge = 0;
};

PairingStats pairing_stats(const std::vector<PairingResult>& results,
                           bool keep_singletons);

/// Binary-searches tau so the expected post-merge size (pairs +
/// singletons when kept, pairs otherwise) lands as close to `target` as
/// possible. Returns the best tau evaluated; ties prefer the larger tau
/// (less merging).
double auto_tune_tau(const std::vector<SimilarityBlock>& blocks,
                     std::size_t target, bool keep_singletons);

}  // namespace curator

#endif  // CURATOR_PAIRING_HPP_
