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

#include "curator/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "curator/errors.hpp"

namespace curator {

Corpus baseline_random(const Corpus& corpus, std::size_t n, std::uint64_t seed) {
  if (n > corpus.size()) {
    throw ArgumentError("baseline_random: n (" + std::to_string(n) +
                        ") exceeds corpus size (" + std::to_string(corpus.size()) +
                        ")");
  }
  std::vector<std::size_t> positions(corpus.size());
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates with engine-native indexing, so the draw is
  // identical across standard libraries.
  for (std::size_t i = 0; i < n && i + 1 < positions.size(); ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (positions.size() - i));
    std::swap(positions[i], positions[j]);
  }
  positions.resize(n);
  std::sort(positions.begin(), positions.end());
  return subset_corpus(corpus, positions);
}

Corpus baseline_perplexity(const Corpus& corpus, std::size_t n,
                           LogprobProvider& provider, bool lowest_first,
                           std::vector<std::string>* warnings) {
  if (n > corpus.size()) {
    throw ArgumentError("baseline_perplexity: n exceeds corpus size");
  }
  struct Scored {
    std::size_t position;
    double perplexity;
  };
  std::vector<Scored> scored;
  scored.reserve(corpus.size());
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const std::string text =
        record_text_for_embedding(corpus.at(i), EmbeddingTextMode::Full);
    try {
      const auto log2_probs = provider.token_log2_probs(text);
      scored.push_back({i, compute_perplexity(log2_probs)});
    } catch (const Error& e) {
      ++skipped;
      if (warnings != nullptr) {
        warnings->push_back("perplexity skipped record " + corpus.at(i).id + ": " +
                            e.what());
      }
    }
  }
  if (scored.size() < n) {
    throw ProviderError("perplexity baseline: only " +
                        std::to_string(scored.size()) + " of " +
                        std::to_string(corpus.size()) +
                        " records scored; cannot select " + std::to_string(n));
  }
  if (warnings != nullptr && skipped > 0) {
    warnings->push_back("perplexity baseline skipped " + std::to_string(skipped) +
                        " record(s)");
  }
  std::sort(scored.begin(), scored.end(), [&](const Scored& a, const Scored& b) {
    if (a.perplexity != b.perplexity) {
      return lowest_first ? a.perplexity < b.perplexity
                          : a.perplexity > b.perplexity;
    }
    return corpus.at(a.position).id < corpus.at(b.position).id;
  });
  std::vector<std::size_t> positions;
  positions.reserve(n);
  for (std::size_t i = 0; i < n; ++i) positions.push_back(scored[i].position);
  std::sort(positions.begin(), positions.end());
  return subset_corpus(corpus, positions);
}

Corpus baseline_kmeans_distant(const Corpus& corpus,
                               const std::vector<EmbeddingVector>& vectors,
                               int groups, std::size_t n, std::uint64_t seed,
                               unsigned workers) {
  if (corpus.size() != vectors.size()) {
    throw ArgumentError("baseline_kmeans_distant: corpus and vectors disagree");
  }
  if (n < static_cast<std::size_t>(groups)) {
    throw ArgumentError("baseline_kmeans_distant: n must be >= groups");
  }
  if (n > corpus.size()) {
    throw ArgumentError("baseline_kmeans_distant: n exceeds corpus size");
  }
  KMeansParams params;
  params.clusters = groups;
  params.seed = seed;
  const ClusterModel model = kmeans_fit(vectors, params, workers);

  auto members = model.members();
  // Farthest-first within each cluster; ties toward the earlier record.
  for (std::size_t j = 0; j < members.size(); ++j) {
    const EmbeddingVector& mu = model.centroids[j];
    std::stable_sort(members[j].begin(), members[j].end(),
                     [&](std::size_t a, std::size_t b) {
                       double da = 0.0;
                       double db = 0.0;
                       for (std::size_t d = 0; d < mu.size(); ++d) {
                         const double xa = vectors[a][d] - mu[d];
                         const double xb = vectors[b][d] - mu[d];
                         da += xa * xa;
                         db += xb * xb;
                       }
                       return da > db;
                     });
  }

  std::vector<std::size_t> positions;
  positions.reserve(n);
  std::vector<std::size_t> cursor(members.size(), 0);
  while (positions.size() < n) {
    bool any = false;
    for (std::size_t j = 0; j < members.size() && positions.size() < n; ++j) {
      if (cursor[j] < members[j].size()) {
        positions.push_back(members[j][cursor[j]++]);
        any = true;
      }
    }
    if (!any) break;  // n <= corpus size, so this cannot trigger
  }
  std::sort(positions.begin(), positions.end());
  return subset_corpus(corpus, positions);
}

}  // namespace curator
