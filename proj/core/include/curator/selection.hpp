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

#ifndef CURATOR_SELECTION_HPP_
#define CURATOR_SELECTION_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "curator/clustering.hpp"
#include "curator/corpus.hpp"
#include "curator/embedding.hpp"

namespace curator {

/// Dense symmetric cosine-similarity matrix for one cluster's members.
/// Similarity is only ever materialized per cluster block; no global
/// n x n matrix exists anywhere in the pipeline.
class SimilarityBlock {
 public:
  SimilarityBlock() = default;

  /// `vectors[i]` is the unit embedding of `member_ids[i]`. Each entry is
  /// computed once and mirrored, so sim(i,j) == sim(j,i) exactly.
  static SimilarityBlock build(int cluster, std::vector<std::string> member_ids,
                               std::span<const EmbeddingVector* const> vectors);

  /// Variant for tests and tools that already hold a similarity matrix.
  static SimilarityBlock from_matrix(int cluster,
                                     std::vector<std::string> member_ids,
                                     std::vector<double> row_major_sims);

  int cluster() const { return cluster_; }
  std::size_t size() const { return member_ids_.size(); }
  const std::vector<std::string>& member_ids() const { return member_ids_; }
  double sim(std::size_t i, std::size_t j) const {
    return sims_[i * member_ids_.size() + j];
  }

 private:
  int cluster_ = 0;
  std::vector<std::string> member_ids_;
  std::vector<double> sims_;  // row-major, symmetric, unit diagonal
};

/// F(S) = sum over members i of max over s in S of sim(i, s).
/// Empty subset is 0 by convention. Monotone and submodular.
double facility_location_value(const SimilarityBlock& block,
                               std::span<const std::size_t> subset);

struct GreedyResult {
  std::vector<std::size_t> picks;  // member indices, in pick order
  double value = 0.0;              // realized F of the picks
};

/// Lazy greedy maximization of the facility-location value under a
/// cardinality budget. Members failing the optional quality floor are
/// excluded up front. Ties on marginal gain break toward the lower
/// member index; the result is identical to naive re-evaluation greedy.
/// A budget beyond the eligible members returns all of them.
GreedyResult greedy_select(const SimilarityBlock& block, std::size_t budget,
                           std::optional<double> quality_floor = std::nullopt,
                           std::span<const double> member_scores = {});

enum class BudgetAllocation { UniformK, ProportionalToClusterSize };

struct SelectionBudget {
  BudgetAllocation allocation = BudgetAllocation::ProportionalToClusterSize;
  std::size_t uniform_k = 0;      // UniformK: per-cluster cap
  std::size_t total_target = 0;   // ProportionalToClusterSize: global size
  std::optional<double> quality_floor;  // optional pre-filter on Q(x,y)
};

/// Splits `total_target` across clusters proportionally to size, summing
/// exactly to the target, with every non-empty cluster receiving at
/// least 1 where feasible and no cluster exceeding its size.
std::vector<std::size_t> allocate_budgets(
    const std::vector<std::size_t>& cluster_sizes, std::size_t total_target);

struct ClusterSelectionStats {
  int cluster = 0;
  std::size_t size = 0;
  std::size_t budget = 0;
  std::size_t selected = 0;
  double value = 0.0;           // realized F
  double coverage_ratio = 0.0;  // F / size
};

struct SelectionResult {
  std::vector<std::size_t> selected_positions;  // ascending corpus order
  std::vector<ClusterSelectionStats> clusters;  // by cluster index
  std::size_t total_selected = 0;
};

/// Runs greedy selection inside every cluster and returns the union in
/// original corpus order. Clusters are processed independently (and in
/// parallel when workers > 1); the result never depends on worker count.
/// `quality_scores`, when present, holds one score per corpus position
/// and feeds the budget's quality floor.
SelectionResult filter_corpus(const Corpus& corpus, const ClusterModel& model,
                              const std::vector<EmbeddingVector>& vectors,
                              const SelectionBudget& budget,
                              const std::vector<double>* quality_scores = nullptr,
                              unsigned workers = 1);

}  // namespace curator

#endif  // CURATOR_SELECTION_HPP_
