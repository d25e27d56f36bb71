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

#include "curator/embedding.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "curator/errors.hpp"
#include "curator/hashing.hpp"
#include "curator/parallel.hpp"
#include "jsonl_cache.hpp"
#include "openai_client.hpp"

namespace curator {

double dot(const EmbeddingVector& u, const EmbeddingVector& v) {
  if (u.size() != v.size()) {
    throw ArgumentError("vector dimension mismatch: " + std::to_string(u.size()) +
                        " vs " + std::to_string(v.size()));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * v[i];
  return acc;
}

double l2_norm(const EmbeddingVector& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

void l2_normalize(EmbeddingVector& v) {
  const double norm = l2_norm(v);
  if (norm == 0.0) {
    throw ArgumentError("cannot normalize the zero vector");
  }
  for (double& x : v) x /= norm;
}

double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v) {
  const double nu = l2_norm(u);
  const double nv = l2_norm(v);
  if (nu == 0.0 || nv == 0.0) {
    throw ArgumentError("cosine similarity is undefined for the zero vector");
  }
  const double s = dot(u, v) / (nu * nv);
  return std::clamp(s, -1.0, 1.0);
}

std::string to_string(EmbeddingTextMode mode) {
  switch (mode) {
    case EmbeddingTextMode::InstructionOnly:
      return "instruction_only";
    case EmbeddingTextMode::InstructionPlusInput:
      return "instruction_plus_input";
    case EmbeddingTextMode::Full:
      return "full";
  }
  return "instruction_only";
}

EmbeddingTextMode embedding_text_mode_from_string(const std::string& name) {
  if (name == "instruction_only") return EmbeddingTextMode::InstructionOnly;
  if (name == "instruction_plus_input") return EmbeddingTextMode::InstructionPlusInput;
  if (name == "full") return EmbeddingTextMode::Full;
  throw ConfigError("unknown embedding text mode: " + name);
}

std::string record_text_for_embedding(const InstructionRecord& record,
                                      EmbeddingTextMode mode) {
  std::string text = record.instruction;
  auto append = [&text](const std::string& part) {
    if (part.empty()) return;
    text += '\n';
    text += part;
  };
  switch (mode) {
    case EmbeddingTextMode::InstructionOnly:
      break;
    case EmbeddingTextMode::InstructionPlusInput:
      append(record.input);
      break;
    case EmbeddingTextMode::Full:
      append(record.input);
      append(record.output);
      break;
  }
  return text;
}

void EmbeddingProviderConfig::validate() const {
  if (dim < 2) throw ConfigError("embedding dim must be >= 2");
  if (batch_size < 1) throw ConfigError("embedding batch_size must be >= 1");
  if (kind == EmbeddingProviderKind::RemoteApi && endpoint.empty()) {
    throw ConfigError("remote embedding provider requires an endpoint URL");
  }
}

namespace {

void check_texts(const std::vector<std::string>& texts) {
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (texts[i].empty()) {
      throw ArgumentError("embed_batch: text at index " + std::to_string(i) +
                          " is empty");
    }
  }
}

// Hashed character-trigram bag projected through a seeded sign matrix.
// Pure function of (text, seed, dim): order-sensitive, overlapping
// trigrams keep similar strings nearby, and no state survives a call.
EmbeddingVector trigram_sign_embed(const std::string& text, std::uint64_t seed,
                                   int dim) {
  EmbeddingVector v(static_cast<std::size_t>(dim), 0.0);
  std::string padded;
  padded.reserve(text.size() + 2);
  padded.push_back('\x02');
  padded += text;
  padded.push_back('\x03');

  const std::size_t gram = 3;
  const std::size_t count = padded.size() >= gram ? padded.size() - gram + 1 : 1;
  for (std::size_t i = 0; i < count; ++i) {
    const std::string_view g(padded.data() + i, std::min(gram, padded.size() - i));
    const std::uint64_t gh = hash_bytes(g, seed);
    for (int j = 0; j < dim; j += 64) {
      std::uint64_t bits = mix64(gh + static_cast<std::uint64_t>(j / 64) + 1);
      const int upper = std::min(dim, j + 64);
      for (int k = j; k < upper; ++k) {
        v[static_cast<std::size_t>(k)] += (bits & 1) ? 1.0 : -1.0;
        bits >>= 1;
      }
    }
  }
  if (l2_norm(v) == 0.0) v[0] = 1.0;  // unreachable in practice
  l2_normalize(v);
  return v;
}

class DeterministicTestProvider final : public EmbeddingProvider {
 public:
  explicit DeterministicTestProvider(EmbeddingProviderConfig config)
      : config_(std::move(config)) {}

  std::vector<EmbeddingVector> embed_batch(
      const std::vector<std::string>& texts) override {
    check_texts(texts);
    std::vector<EmbeddingVector> out(texts.size());
    parallel_chunks(texts.size(), 256,
                    static_cast<unsigned>(std::max(1, config_.max_in_flight)),
                    [&](std::size_t, std::size_t begin, std::size_t end) {
                      for (std::size_t i = begin; i < end; ++i) {
                        out[i] = trigram_sign_embed(texts[i], config_.seed,
                                                    config_.dim);
                      }
                    });
    return out;
  }

  const EmbeddingProviderConfig& config() const override { return config_; }

 private:
  EmbeddingProviderConfig config_;
};

class RemoteApiProvider final : public EmbeddingProvider {
 public:
  explicit RemoteApiProvider(EmbeddingProviderConfig config)
      : config_(std::move(config)),
        cache_(config_.cache_path),
        client_({config_.endpoint, config_.api_key_env, config_.max_retries,
                 /*backoff_base_ms=*/100}) {}

  std::vector<EmbeddingVector> embed_batch(
      const std::vector<std::string>& texts) override {
    check_texts(texts);
    std::vector<EmbeddingVector> out(texts.size());
    std::vector<std::string> keys(texts.size());
    std::vector<std::size_t> misses;
    for (std::size_t i = 0; i < texts.size(); ++i) {
      keys[i] = cache_key(texts[i]);
      if (auto hit = cache_.get(keys[i])) {
        out[i] = (*hit).at("vector").get<EmbeddingVector>();
      } else {
        misses.push_back(i);
      }
    }

    // Batch the misses; batches run with bounded parallelism.
    const std::size_t batch = static_cast<std::size_t>(config_.batch_size);
    parallel_chunks(misses.size(), batch,
                    static_cast<unsigned>(std::max(1, config_.max_in_flight)),
                    [&](std::size_t, std::size_t begin, std::size_t end) {
                      fetch_span(texts, keys, misses, begin, end, out);
                    });
    return out;
  }

  const EmbeddingProviderConfig& config() const override { return config_; }

 private:
  std::string cache_key(const std::string& text) const {
    return content_key({config_.model_name, std::to_string(config_.dim), text});
  }

  void fetch_span(const std::vector<std::string>& texts,
                  const std::vector<std::string>& keys,
                  const std::vector<std::size_t>& misses, std::size_t begin,
                  std::size_t end, std::vector<EmbeddingVector>& out) {
    nlohmann::json input = nlohmann::json::array();
    for (std::size_t k = begin; k < end; ++k) {
      input.push_back(texts[misses[k]]);
    }
    const nlohmann::json body{{"model", config_.model_name}, {"input", input}};
    const nlohmann::json response = client_.post_json(body);
    if (!response.contains("data") || !response.at("data").is_array() ||
        response.at("data").size() != end - begin) {
      throw ProviderError("embeddings response item count mismatch");
    }
    std::vector<EmbeddingVector> vectors(end - begin);
    for (const auto& item : response.at("data")) {
      const std::size_t index = item.value("index", vectors.size());
      if (index >= vectors.size()) {
        throw ProviderError("embeddings response carries a bad index");
      }
      vectors[index] = item.at("embedding").get<EmbeddingVector>();
    }
    for (std::size_t k = begin; k < end; ++k) {
      EmbeddingVector& v = vectors[k - begin];
      if (static_cast<int>(v.size()) != config_.dim) {
        throw ConfigError("remote embedding dimension " + std::to_string(v.size()) +
                          " does not match configured dim " +
                          std::to_string(config_.dim));
      }
      l2_normalize(v);
      cache_.put(keys[misses[k]], nlohmann::json{{"model", config_.model_name},
                                                 {"dim", config_.dim},
                                                 {"vector", v}});
      out[misses[k]] = std::move(v);
    }
  }

  EmbeddingProviderConfig config_;
  internal::JsonlCache cache_;
  internal::OpenAiClient client_;
};

}  // namespace

std::unique_ptr<EmbeddingProvider> make_embedding_provider(
    const EmbeddingProviderConfig& config) {
  config.validate();
  if (config.kind == EmbeddingProviderKind::DeterministicTest) {
    return std::make_unique<DeterministicTestProvider>(config);
  }
  return std::make_unique<RemoteApiProvider>(config);
}

std::vector<EmbeddingVector> embed_batch(const EmbeddingProviderConfig& config,
                                         const std::vector<std::string>& texts) {
  return make_embedding_provider(config)->embed_batch(texts);
}

}  // namespace curator
