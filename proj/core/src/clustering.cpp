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

#include "curator/clustering.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include "curator/errors.hpp"
#include "curator/parallel.hpp"

namespace curator {

namespace {

double squared_distance(const EmbeddingVector& a, const EmbeddingVector& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

// Uniform double in [0, 1) from the engine's raw 64 bits. Avoids
// std::uniform_real_distribution, whose output is stdlib-specific.
double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// k-means++: first centroid uniform, the rest sampled proportional to
// the squared distance to the nearest chosen centroid.
std::vector<EmbeddingVector> kmeanspp_init(
    const std::vector<EmbeddingVector>& vectors, int m, std::mt19937_64& rng) {
  const std::size_t n = vectors.size();
  std::vector<EmbeddingVector> centroids;
  centroids.reserve(static_cast<std::size_t>(m));

  const std::size_t first = static_cast<std::size_t>(next_unit(rng) * static_cast<double>(n));
  centroids.push_back(vectors[std::min(first, n - 1)]);

  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(vectors[i], centroids[0]);

  while (centroids.size() < static_cast<std::size_t>(m)) {
    double total = 0.0;
    for (double w : d2) total += w;
    std::size_t chosen = n;
    if (total > 0.0) {
      const double target = next_unit(rng) * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target) {
          chosen = i;
          break;
        }
      }
      if (chosen == n) {  // rounding spill: last positive-weight point
        for (std::size_t i = n; i-- > 0;) {
          if (d2[i] > 0.0) {
            chosen = i;
            break;
          }
        }
      }
    }
    if (chosen == n) {
      // All remaining points coincide with a centroid; take the lowest
      // index not yet used so the fit stays deterministic.
      chosen = centroids.size() % n;
    }
    centroids.push_back(vectors[chosen]);
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(vectors[i], centroids.back()));
    }
  }
  return centroids;
}

struct AssignPass {
  std::vector<int> assignments;
  double sse = 0.0;
};

AssignPass assign_all(const std::vector<EmbeddingVector>& vectors,
                      const std::vector<EmbeddingVector>& centroids,
                      unsigned workers) {
  const std::size_t n = vectors.size();
  AssignPass pass;
  pass.assignments.assign(n, 0);
  std::vector<double> best(n, 0.0);
  parallel_chunks(n, 1024, workers, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      int arg = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < centroids.size(); ++j) {
        const double d = squared_distance(vectors[i], centroids[j]);
        if (d < best_d) {  // strict: ties keep the lowest index
          best_d = d;
          arg = static_cast<int>(j);
        }
      }
      pass.assignments[i] = arg;
      best[i] = best_d;
    }
  });
  for (double d : best) pass.sse += d;
  return pass;
}

std::vector<EmbeddingVector> compute_means(
    const std::vector<EmbeddingVector>& vectors,
    const std::vector<int>& assignments,
    const std::vector<EmbeddingVector>& previous, int m,
    std::vector<std::size_t>& counts) {
  const std::size_t dim = vectors.empty() ? 0 : vectors[0].size();
  std::vector<EmbeddingVector> means(static_cast<std::size_t>(m),
                                     EmbeddingVector(dim, 0.0));
  counts.assign(static_cast<std::size_t>(m), 0);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const auto j = static_cast<std::size_t>(assignments[i]);
    ++counts[j];
    EmbeddingVector& mean = means[j];
    const EmbeddingVector& v = vectors[i];
    for (std::size_t d = 0; d < dim; ++d) mean[d] += v[d];
  }
  for (std::size_t j = 0; j < means.size(); ++j) {
    if (counts[j] == 0) {
      means[j] = previous[j];  // repaired by the caller
      continue;
    }
    const double inv = 1.0 / static_cast<double>(counts[j]);
    for (double& x : means[j]) x *= inv;
  }
  return means;
}

}  // namespace

std::vector<std::vector<std::size_t>> ClusterModel::members() const {
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(m));
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    out[static_cast<std::size_t>(assignments[i])].push_back(i);
  }
  return out;
}

ClusterModel kmeans_fit(const std::vector<EmbeddingVector>& vectors,
                        const KMeansParams& params, unsigned workers) {
  const std::size_t n = vectors.size();
  if (params.clusters <= 0) throw ArgumentError("kmeans: clusters must be positive");
  if (static_cast<std::size_t>(params.clusters) > n) {
    throw ArgumentError("kmeans: clusters (" + std::to_string(params.clusters) +
                        ") exceeds number of vectors (" + std::to_string(n) + ")");
  }
  if (params.max_iters <= 0) throw ArgumentError("kmeans: max_iters must be positive");
  if (!(params.tol > 0.0)) throw ArgumentError("kmeans: tol must be positive");
  const std::size_t dim = vectors[0].size();
  for (const auto& v : vectors) {
    if (v.size() != dim) throw ArgumentError("kmeans: mixed vector dimensions");
  }

  std::mt19937_64 rng(params.seed);
  ClusterModel model;
  model.m = params.clusters;
  model.centroids = kmeanspp_init(vectors, params.clusters, rng);

  std::vector<int> prev_assignments;
  std::vector<std::size_t> counts;
  for (int iter = 0; iter < params.max_iters; ++iter) {
    AssignPass pass = assign_all(vectors, model.centroids, workers);
    model.objective_trace.push_back(pass.sse);
    model.iterations_run = iter + 1;

    if (pass.assignments == prev_assignments) {
      // Fixed point: centroids are already the means of these
      // assignments, bit for bit.
      model.assignments = std::move(pass.assignments);
      model.objective = pass.sse;
      model.converged = true;
      return model;
    }

    auto means = compute_means(vectors, pass.assignments, model.centroids,
                               params.clusters, counts);
    // Reseed each emptied cluster to the point farthest from its stale
    // centroid, then re-derive the means so downstream invariants hold.
    bool repaired = false;
    for (std::size_t j = 0; j < means.size(); ++j) {
      if (counts[j] != 0) continue;
      std::size_t farthest = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = squared_distance(vectors[i], model.centroids[j]);
        if (d > far_d) {
          far_d = d;
          farthest = i;
        }
      }
      means[j] = vectors[farthest];
      repaired = true;
    }

    double movement = 0.0;
    for (std::size_t j = 0; j < means.size(); ++j) {
      movement = std::max(movement,
                          std::sqrt(squared_distance(means[j], model.centroids[j])));
    }
    prev_assignments = std::move(pass.assignments);
    model.centroids = std::move(means);

    if (movement < params.tol && !repaired) break;
  }

  // Stopped by tol or max_iters. Take one more assignment pass against
  // the final centroids, then pin centroids to the member means so the
  // model is internally consistent.
  AssignPass last = assign_all(vectors, model.centroids, workers);
  model.objective_trace.push_back(last.sse);
  model.converged = last.assignments == prev_assignments;
  model.centroids = compute_means(vectors, last.assignments, model.centroids,
                                  params.clusters, counts);
  model.assignments = std::move(last.assignments);
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sse += squared_distance(vectors[i],
                            model.centroids[static_cast<std::size_t>(model.assignments[i])]);
  }
  model.objective = sse;
  model.objective_trace.push_back(sse);
  return model;
}

int assign(const ClusterModel& model, const EmbeddingVector& v) {
  if (model.centroids.empty()) throw ArgumentError("assign: empty model");
  if (v.size() != model.centroids[0].size()) {
    throw ArgumentError("assign: vector dimension does not match centroids");
  }
  int arg = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < model.centroids.size(); ++j) {
    const double d = squared_distance(v, model.centroids[j]);
    if (d < best) {
      best = d;
      arg = static_cast<int>(j);
    }
  }
  return arg;
}

std::vector<std::array<double, 2>> project_2d(
    const std::vector<EmbeddingVector>& vectors) {
  const std::size_t n = vectors.size();
  if (n < 2) throw ArgumentError("project_2d requires at least 2 vectors");
  const auto dim = static_cast<Eigen::Index>(vectors[0].size());

  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), dim);
  for (std::size_t i = 0; i < n; ++i) {
    if (vectors[i].size() != static_cast<std::size_t>(dim)) {
      throw ArgumentError("project_2d: mixed vector dimensions");
    }
    for (Eigen::Index d = 0; d < dim; ++d) {
      x(static_cast<Eigen::Index>(i), d) = vectors[i][static_cast<std::size_t>(d)];
    }
  }
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;

  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  // Eigenvalues ascend; the top two components sit at the end.
  std::vector<std::array<double, 2>> out(n, {0.0, 0.0});
  for (int c = 0; c < 2; ++c) {
    const Eigen::Index col = dim - 1 - c;
    if (col < 0) break;
    if (solver.eigenvalues()(col) <= 1e-12) continue;  // rank-deficient axis
    Eigen::VectorXd axis = solver.eigenvectors().col(col);
    Eigen::Index largest = 0;
    axis.cwiseAbs().maxCoeff(&largest);
    if (axis(largest) < 0.0) axis = -axis;
    const Eigen::VectorXd proj = x * axis;
    for (std::size_t i = 0; i < n; ++i) {
      out[i][static_cast<std::size_t>(c)] = proj(static_cast<Eigen::Index>(i));
    }
  }
  return out;
}

void write_projection_csv(const std::filesystem::path& path,
                          const Corpus& corpus, const ClusterModel& model,
                          const std::vector<std::array<double, 2>>& points) {
  if (corpus.size() != points.size() ||
      corpus.size() != model.assignments.size()) {
    throw ArgumentError("projection CSV inputs disagree on record count");
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write projection CSV: " + path.string());
  out << "record_id,cluster,px,py\n";
  out.precision(17);
  for (std::size_t i = 0; i < points.size(); ++i) {
    out << corpus.at(i).id << ',' << model.assignments[i] << ',' << points[i][0]
        << ',' << points[i][1] << '\n';
  }
}

}  // namespace curator
