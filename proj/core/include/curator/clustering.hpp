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

#ifndef CURATOR_CLUSTERING_HPP_
#define CURATOR_CLUSTERING_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "curator/corpus.hpp"
#include "curator/embedding.hpp"

namespace curator {

/// A fitted topic partition: m centroids plus one cluster index per
/// input vector. Immutable after fit.
struct ClusterModel {
  std::vector<EmbeddingVector> centroids;
  std::vector<int> assignments;  // input position -> cluster in [0, m)
  int m = 0;
  double objective = 0.0;  // final within-cluster SSE
  int iterations_run = 0;
  bool converged = false;  // assignments reached a fixed point
  /// SSE recorded after every assignment pass; non-increasing.
  std::vector<double> objective_trace;

  /// Per-cluster member positions, each ascending. Always m entries.
  std::vector<std::vector<std::size_t>> members() const;
};

struct KMeansParams {
  int clusters = 120;
  std::uint64_t seed = 0;
  int max_iters = 300;
  double tol = 1e-4;  // max centroid displacement below which we stop
};

/// Lloyd's iterations from k-means++ seeding, both driven by `seed`.
/// Ties in the assignment step break toward the lowest cluster index.
/// An emptied cluster is reseeded to the point farthest from its stale
/// centroid. Stops on a fixed point, on displacement < tol, or at
/// max_iters; the returned centroids always equal the member means of
/// the returned assignments. Throws ArgumentError when m == 0 or
/// m > |vectors| or dimensions disagree.
ClusterModel kmeans_fit(const std::vector<EmbeddingVector>& vectors,
                        const KMeansParams& params, unsigned workers = 1);

/// Index of the nearest centroid by squared Euclidean distance; ties
/// break toward the lowest index.
int assign(const ClusterModel& model, const EmbeddingVector& v);

/// PCA projection onto the top-2 principal components of the
/// mean-centered data. Output order matches input order. Each axis sign
/// is fixed by forcing its largest-magnitude loading positive, so the
/// projection is fully deterministic. Rank-deficient data projects to
/// zeros on the missing axes.
std::vector<std::array<double, 2>> project_2d(
    const std::vector<EmbeddingVector>& vectors);

/// CSV with header record_id,cluster,px,py — one row per record.
void write_projection_csv(const std::filesystem::path& path,
                          const Corpus& corpus, const ClusterModel& model,
                          const std::vector<std::array<double, 2>>& points);

}  // namespace curator

#endif  // CURATOR_CLUSTERING_HPP_
