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

#include "curator/selection.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "curator/errors.hpp"
#include "curator/parallel.hpp"

namespace curator {

SimilarityBlock SimilarityBlock::build(
    int cluster, std::vector<std::string> member_ids,
    std::span<const EmbeddingVector* const> vectors) {
  if (member_ids.size() != vectors.size()) {
    throw ArgumentError("similarity block: ids and vectors disagree");
  }
  SimilarityBlock block;
  block.cluster_ = cluster;
  block.member_ids_ = std::move(member_ids);
  const std::size_t n = block.member_ids_.size();
  block.sims_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    block.sims_[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = cosine_similarity(*vectors[i], *vectors[j]);
      block.sims_[i * n + j] = s;
      block.sims_[j * n + i] = s;
    }
  }
  return block;
}

SimilarityBlock SimilarityBlock::from_matrix(int cluster,
                                             std::vector<std::string> member_ids,
                                             std::vector<double> row_major_sims) {
  const std::size_t n = member_ids.size();
  if (row_major_sims.size() != n * n) {
    throw ArgumentError("similarity block: matrix size mismatch");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (row_major_sims[i * n + j] != row_major_sims[j * n + i]) {
        throw ArgumentError("similarity block: matrix is not symmetric");
      }
    }
  }
  SimilarityBlock block;
  block.cluster_ = cluster;
  block.member_ids_ = std::move(member_ids);
  block.sims_ = std::move(row_major_sims);
  return block;
}

double facility_location_value(const SimilarityBlock& block,
                               std::span<const std::size_t> subset) {
  const std::size_t n = block.size();
  for (std::size_t s : subset) {
    if (s >= n) throw ArgumentError("facility_location_value: index out of range");
  }
  if (subset.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double best = -1.0;
    for (std::size_t s : subset) best = std::max(best, block.sim(i, s));
    total += best;
  }
  return total;
}

namespace {

struct HeapEntry {
  double gain;
  std::size_t member;
  std::size_t evaluated_at;  // selection size the gain was computed for
};

// Max-heap on gain; ties prefer the lower member index so lazy greedy
// reproduces naive greedy exactly.
struct HeapLess {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    if (a.gain != b.gain) return a.gain < b.gain;
    return a.member > b.member;
  }
};

}  // namespace

GreedyResult greedy_select(const SimilarityBlock& block, std::size_t budget,
                           std::optional<double> quality_floor,
                           std::span<const double> member_scores) {
  const std::size_t n = block.size();
  if (quality_floor.has_value() && member_scores.size() != n) {
    throw ArgumentError("greedy_select: quality floor requires one score per member");
  }

  std::vector<std::size_t> eligible;
  eligible.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (quality_floor.has_value() && member_scores[i] < *quality_floor) continue;
    eligible.push_back(i);
  }

  GreedyResult result;
  if (budget == 0 || eligible.empty()) return result;

  // coverage[i]: best similarity from i to the current picks. Gains are
  // computed against it exactly as the naive re-evaluation greedy would,
  // so lazy and naive selections agree bit for bit.
  std::vector<double> coverage(n, -1.0);
  auto marginal_gain = [&](std::size_t cand) {
    double gain = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = block.sim(i, cand);
      if (s > coverage[i]) gain += s - coverage[i];
    }
    return gain;
  };

  // First pick gains F({cand}) - F(empty) = sum of the candidate's row.
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapLess> queue;
  for (std::size_t cand : eligible) {
    double gain = 0.0;
    for (std::size_t i = 0; i < n; ++i) gain += block.sim(i, cand);
    queue.push({gain, cand, 0});
  }

  const std::size_t want = std::min(budget, eligible.size());
  while (result.picks.size() < want && !queue.empty()) {
    HeapEntry top = queue.top();
    queue.pop();
    if (top.evaluated_at != result.picks.size()) {
      top.gain = marginal_gain(top.member);
      top.evaluated_at = result.picks.size();
      queue.push(top);
      continue;
    }
    result.picks.push_back(top.member);
    for (std::size_t i = 0; i < n; ++i) {
      coverage[i] = std::max(coverage[i], block.sim(i, top.member));
    }
  }
  result.value = facility_location_value(block, result.picks);
  return result;
}

std::vector<std::size_t> allocate_budgets(
    const std::vector<std::size_t>& cluster_sizes, std::size_t total_target) {
  const std::size_t population =
      std::accumulate(cluster_sizes.begin(), cluster_sizes.end(), std::size_t{0});
  if (total_target > population) {
    throw ArgumentError("allocation target " + std::to_string(total_target) +
                        " exceeds population " + std::to_string(population));
  }
  const std::size_t m = cluster_sizes.size();
  std::vector<std::size_t> alloc(m, 0);
  if (total_target == 0 || population == 0) return alloc;

  std::vector<double> quota(m, 0.0);
  std::size_t assigned = 0;
  for (std::size_t j = 0; j < m; ++j) {
    if (cluster_sizes[j] == 0) continue;
    quota[j] = static_cast<double>(total_target) *
               static_cast<double>(cluster_sizes[j]) / static_cast<double>(population);
    alloc[j] = std::clamp<std::size_t>(static_cast<std::size_t>(quota[j]), 1,
                                       cluster_sizes[j]);
    assigned += alloc[j];
  }

  // Largest-remainder corrections until the allocations sum exactly.
  auto order = [&](bool ascending) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < m; ++j) {
      if (cluster_sizes[j] > 0) idx.push_back(j);
    }
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      const double ra = quota[a] - static_cast<double>(alloc[a]);
      const double rb = quota[b] - static_cast<double>(alloc[b]);
      if (ra != rb) return ascending ? ra < rb : ra > rb;
      return a < b;
    });
    return idx;
  };

  while (assigned < total_target) {
    bool changed = false;
    for (std::size_t j : order(false)) {
      if (assigned == total_target) break;
      if (alloc[j] < cluster_sizes[j]) {
        ++alloc[j];
        ++assigned;
        changed = true;
      }
    }
    if (!changed) break;  // every cluster saturated; cannot happen given the guard
  }
  while (assigned > total_target) {
    bool changed = false;
    for (std::size_t j : order(true)) {
      if (assigned == total_target) break;
      if (alloc[j] > 1) {
        --alloc[j];
        --assigned;
        changed = true;
      }
    }
    if (changed) continue;
    // Target smaller than the number of non-empty clusters: drop the
    // floor for the smallest clusters, largest clusters keep their 1.
    for (std::size_t j : order(true)) {
      if (assigned == total_target) break;
      if (alloc[j] > 0) {
        --alloc[j];
        --assigned;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return alloc;
}

SelectionResult filter_corpus(const Corpus& corpus, const ClusterModel& model,
                              const std::vector<EmbeddingVector>& vectors,
                              const SelectionBudget& budget,
                              const std::vector<double>* quality_scores,
                              unsigned workers) {
  if (corpus.size() != vectors.size() ||
      corpus.size() != model.assignments.size()) {
    throw ArgumentError("filter_corpus: corpus, vectors, and model disagree");
  }
  if (budget.quality_floor.has_value() &&
      (quality_scores == nullptr || quality_scores->size() != corpus.size())) {
    throw ArgumentError("filter_corpus: quality floor requires per-record scores");
  }

  const auto members = model.members();
  std::vector<std::size_t> sizes(members.size());
  for (std::size_t j = 0; j < members.size(); ++j) sizes[j] = members[j].size();

  std::vector<std::size_t> budgets(members.size(), 0);
  if (budget.allocation == BudgetAllocation::UniformK) {
    if (budget.uniform_k == 0) {
      throw ArgumentError("filter_corpus: uniform budget K must be positive");
    }
    for (std::size_t j = 0; j < members.size(); ++j) {
      budgets[j] = std::min(budget.uniform_k, sizes[j]);
    }
  } else {
    budgets = allocate_budgets(sizes, budget.total_target);
  }

  SelectionResult result;
  result.clusters.resize(members.size());
  std::vector<std::vector<std::size_t>> picked(members.size());

  parallel_chunks(members.size(), 1, workers,
                  [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      const auto& positions = members[j];
      ClusterSelectionStats& stats = result.clusters[j];
      stats.cluster = static_cast<int>(j);
      stats.size = positions.size();
      stats.budget = budgets[j];
      if (positions.empty() || budgets[j] == 0) continue;

      std::vector<std::string> ids;
      std::vector<const EmbeddingVector*> vecs;
      ids.reserve(positions.size());
      vecs.reserve(positions.size());
      for (std::size_t pos : positions) {
        ids.push_back(corpus.at(pos).id);
        vecs.push_back(&vectors[pos]);
      }
      const SimilarityBlock block =
          SimilarityBlock::build(static_cast<int>(j), std::move(ids), vecs);

      std::vector<double> scores;
      if (budget.quality_floor.has_value()) {
        scores.reserve(positions.size());
        for (std::size_t pos : positions) scores.push_back((*quality_scores)[pos]);
      }
      const GreedyResult greedy =
          greedy_select(block, budgets[j], budget.quality_floor, scores);

      stats.selected = greedy.picks.size();
      stats.value = greedy.value;
      stats.coverage_ratio =
          stats.size == 0 ? 0.0 : greedy.value / static_cast<double>(stats.size);
      for (std::size_t pick : greedy.picks) picked[j].push_back(positions[pick]);
    }
  });

  for (auto& positions : picked) {
    result.selected_positions.insert(result.selected_positions.end(),
                                     positions.begin(), positions.end());
  }
  std::sort(result.selected_positions.begin(), result.selected_positions.end());
  result.total_selected = result.selected_positions.size();
  return result;
}

}  // namespace curator
