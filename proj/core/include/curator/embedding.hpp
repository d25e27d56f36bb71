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

#ifndef CURATOR_EMBEDDING_HPP_
#define CURATOR_EMBEDDING_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "curator/corpus.hpp"

namespace curator {

/// Fixed-dimension real vector. Every vector produced by a provider is
/// L2-normalized on creation, so cosine similarity reduces to a dot
/// product downstream.
using EmbeddingVector = std::vector<double>;

double dot(const EmbeddingVector& u, const EmbeddingVector& v);
double l2_norm(const EmbeddingVector& v);

/// In-place L2 normalization. Throws ArgumentError on the zero vector.
void l2_normalize(EmbeddingVector& v);

/// dot(u, v) / (|u| * |v|), clamped to [-1, 1] against rounding overshoot.
/// Symmetric. Throws ArgumentError on dimension mismatch or zero vectors.
double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v);

/// Which record fields feed the embedder.
enum class EmbeddingTextMode { InstructionOnly, InstructionPlusInput, Full };

std::string to_string(EmbeddingTextMode mode);
EmbeddingTextMode embedding_text_mode_from_string(const std::string& name);

/// Joins the selected fields with single newlines; empty components are
/// elided rather than leaving blank lines.
std::string record_text_for_embedding(const InstructionRecord& record,
                                      EmbeddingTextMode mode);

enum class EmbeddingProviderKind { RemoteApi, DeterministicTest };

struct EmbeddingProviderConfig {
  EmbeddingProviderKind kind = EmbeddingProviderKind::DeterministicTest;
  std::string endpoint;      // RemoteApi: OpenAI-compatible embeddings URL
  std::string model_name = "deterministic-test";
  int dim = 384;
  int batch_size = 32;
  std::uint64_t seed = 0;    // DeterministicTest
  std::string api_key_env;   // env var holding the bearer token, if any
  std::string cache_path;    // optional append-only JSONL cache
  int max_retries = 3;
  int max_in_flight = 4;

  void validate() const;  // throws ConfigError
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  /// One unit vector per text, in input order, each of dimension
  /// config().dim. All texts must be non-empty (ArgumentError).
  virtual std::vector<EmbeddingVector> embed_batch(
      const std::vector<std::string>& texts) = 0;

  virtual const EmbeddingProviderConfig& config() const = 0;
};

std::unique_ptr<EmbeddingProvider> make_embedding_provider(
    const EmbeddingProviderConfig& config);

/// One-shot convenience over make_embedding_provider.
std::vector<EmbeddingVector> embed_batch(const EmbeddingProviderConfig& config,
                                         const std::vector<std::string>& texts);

}  // namespace curator

#endif  // CURATOR_EMBEDDING_HPP_
