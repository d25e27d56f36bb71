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

#include "curator/pairing.hpp"

#include <algorithm>
#include <cmath>

#include "curator/errors.hpp"

namespace curator {

namespace {

struct Edge {
  double sim;
  std::size_t a;  // a < b, member indices
  std::size_t b;
};

// Similarity descending, then index pair ascending.
bool edge_before(const Edge& x, const Edge& y) {
  if (x.sim != y.sim) return x.sim > y.sim;
  if (x.a != y.a) return x.a < y.a;
  return x.b < y.b;
}

std::vector<Edge> sorted_edges(const SimilarityBlock& block) {
  const std::size_t n = block.size();
  std::vector<Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      edges.push_back({block.sim(i, j), i, j});
    }
  }
  std::sort(edges.begin(), edges.end(), edge_before);
  return edges;
}

PairingResult match_edges(const SimilarityBlock& block,
                          const std::vector<Edge>& edges, double tau) {
  const std::size_t n = block.size();
  PairingResult result;
  std::vector<bool> matched(n, false);
  for (const Edge& e : edges) {
    if (e.sim < tau) break;  // edges are sorted; the rest are ineligible
    if (matched[e.a] || matched[e.b]) continue;
    matched[e.a] = true;
    matched[e.b] = true;
    result.pairs.push_back({block.member_ids()[e.a], block.member_ids()[e.b],
                            e.sim, block.cluster()});
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!matched[i]) result.singletons.push_back(block.member_ids()[i]);
  }
  return result;
}

}  // namespace

PairingResult mine_pairs(const SimilarityBlock& block, double tau) {
  if (!(tau > -1.0) || !(tau <= 1.0)) {
    throw ArgumentError("pairing threshold tau must lie in (-1, 1]");
  }
  if (block.size() == 0) return {};
  return match_edges(block, sorted_edges(block), tau);
}

PairingStats pairing_stats(const std::vector<PairingResult>& results,
                           bool keep_singletons) {
  PairingStats stats;
  for (const auto& r : results) {
    stats.pairs += r.pairs.size();
    stats.singletons += r.singletons.size();
  }
  stats.records = 2 * stats.pairs + stats.singletons;
  stats.pairing_rate =
      stats.records == 0
          ? 0.0
          : static_cast<double>(2 * stats.pairs) / static_cast<double>(stats.records);
  stats.expected_post_merge =
      keep_singletons ? stats.pairs + stats.singletons : stats.pairs;
  return stats;
}

double auto_tune_tau(const std::vector<SimilarityBlock>& blocks,
                     std::size_t target, bool keep_singletons) {
  std::vector<std::vector<Edge>> edges;
  edges.reserve(blocks.size());
  for (const auto& block : blocks) {
    edges.push_back(block.size() == 0 ? std::vector<Edge>{} : sorted_edges(block));
  }

  auto expected_at = [&](double tau) {
    std::vector<PairingResult> results;
    results.reserve(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      results.push_back(match_edges(blocks[b], edges[b], tau));
    }
    return pairing_stats(results, keep_singletons).expected_post_merge;
  };

  double lo = std::nextafter(-1.0, 1.0);
  double hi = 1.0;
  double best_tau = hi;
  auto best_gap = static_cast<double>(target);
  auto consider = [&](double tau, std::size_t expected) {
    const double gap = std::abs(static_cast<double>(expected) -
                                static_cast<double>(target));
    if (gap < best_gap || (gap == best_gap && tau > best_tau)) {
      best_gap = gap;
      best_tau = tau;
    }
  };
  consider(hi, expected_at(hi));
  consider(lo, expected_at(lo));

  // Expected size grows with tau (fewer eligible edges, fewer merges).
  for (int iter = 0; iter < 48 && best_gap > 0.0; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const std::size_t expected = expected_at(mid);
    consider(mid, expected);
    if (expected > target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return best_tau;
}

}  // namespace curator
