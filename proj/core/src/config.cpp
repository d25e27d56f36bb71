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

#include "curator/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "curator/errors.hpp"
#include "curator/hashing.hpp"

namespace curator {

using nlohmann::json;

namespace {

std::string kind_name(EmbeddingProviderKind kind) {
  return kind == EmbeddingProviderKind::RemoteApi ? "remote_api"
                                                  : "deterministic_test";
}
EmbeddingProviderKind embedding_kind(const std::string& name) {
  if (name == "remote_api") return EmbeddingProviderKind::RemoteApi;
  if (name == "deterministic_test") return EmbeddingProviderKind::DeterministicTest;
  throw ConfigError("unknown embedding provider kind: " + name);
}

std::string kind_name(ScorerKind kind) {
  return kind == ScorerKind::RemoteLLM ? "remote_llm" : "deterministic_mock";
}
ScorerKind scorer_kind(const std::string& name) {
  if (name == "remote_llm") return ScorerKind::RemoteLLM;
  if (name == "deterministic_mock") return ScorerKind::DeterministicMock;
  throw ConfigError("unknown scorer kind: " + name);
}

std::string kind_name(MergerKind kind) {
  return kind == MergerKind::RemoteLLM ? "remote_llm" : "deterministic_mock";
}
MergerKind merger_kind(const std::string& name) {
  if (name == "remote_llm") return MergerKind::RemoteLLM;
  if (name == "deterministic_mock") return MergerKind::DeterministicMock;
  throw ConfigError("unknown merger kind: " + name);
}

std::string kind_name(LogprobProviderKind kind) {
  return kind == LogprobProviderKind::Remote ? "remote" : "deterministic_mock";
}
LogprobProviderKind logprob_kind(const std::string& name) {
  if (name == "remote") return LogprobProviderKind::Remote;
  if (name == "deterministic_mock") return LogprobProviderKind::DeterministicMock;
  throw ConfigError("unknown logprob provider kind: " + name);
}

std::string allocation_name(BudgetAllocation a) {
  return a == BudgetAllocation::UniformK ? "uniform" : "proportional";
}
BudgetAllocation allocation_kind(const std::string& name) {
  if (name == "uniform") return BudgetAllocation::UniformK;
  if (name == "proportional") return BudgetAllocation::ProportionalToClusterSize;
  throw ConfigError("unknown budget allocation: " + name);
}

template <typename T>
void read_if(const json& obj, const char* field, T& out) {
  if (obj.contains(field)) out = obj.at(field).get<T>();
}

json embedding_to_json(const EmbeddingProviderConfig& c) {
  return json{{"kind", kind_name(c.kind)},       {"endpoint", c.endpoint},
              {"model_name", c.model_name},      {"dim", c.dim},
              {"batch_size", c.batch_size},      {"seed", c.seed},
              {"api_key_env", c.api_key_env},    {"cache_path", c.cache_path},
              {"max_retries", c.max_retries},    {"max_in_flight", c.max_in_flight}};
}

void embedding_from_json(const json& obj, EmbeddingProviderConfig& c) {
  if (obj.contains("kind")) c.kind = embedding_kind(obj.at("kind").get<std::string>());
  read_if(obj, "endpoint", c.endpoint);
  read_if(obj, "model_name", c.model_name);
  read_if(obj, "dim", c.dim);
  read_if(obj, "batch_size", c.batch_size);
  read_if(obj, "seed", c.seed);
  read_if(obj, "api_key_env", c.api_key_env);
  read_if(obj, "cache_path", c.cache_path);
  read_if(obj, "max_retries", c.max_retries);
  read_if(obj, "max_in_flight", c.max_in_flight);
}

json scorer_to_json(const ScorerConfig& c) {
  return json{{"kind", kind_name(c.kind)},     {"endpoint", c.endpoint},
              {"model", c.model},              {"template_id", c.template_id},
              {"api_key_env", c.api_key_env},  {"cache_path", c.cache_path},
              {"max_retries", c.max_retries},  {"seed", c.seed}};
}

void scorer_from_json(const json& obj, ScorerConfig& c) {
  if (obj.contains("kind")) c.kind = scorer_kind(obj.at("kind").get<std::string>());
  read_if(obj, "endpoint", c.endpoint);
  read_if(obj, "model", c.model);
  read_if(obj, "template_id", c.template_id);
  read_if(obj, "api_key_env", c.api_key_env);
  read_if(obj, "cache_path", c.cache_path);
  read_if(obj, "max_retries", c.max_retries);
  read_if(obj, "seed", c.seed);
}

json merger_to_json(const MergerConfig& c) {
  return json{{"kind", kind_name(c.kind)},       {"endpoint", c.endpoint},
              {"model", c.model},                {"temperature", c.temperature},
              {"api_key_env", c.api_key_env},    {"max_retries", c.max_retries},
              {"max_attempts", c.max_attempts},  {"max_in_flight", c.max_in_flight}};
}

void merger_from_json(const json& obj, MergerConfig& c) {
  if (obj.contains("kind")) c.kind = merger_kind(obj.at("kind").get<std::string>());
  read_if(obj, "endpoint", c.endpoint);
  read_if(obj, "model", c.model);
  read_if(obj, "temperature", c.temperature);
  read_if(obj, "api_key_env", c.api_key_env);
  read_if(obj, "max_retries", c.max_retries);
  read_if(obj, "max_attempts", c.max_attempts);
  read_if(obj, "max_in_flight", c.max_in_flight);
}

json logprobs_to_json(const LogprobConfig& c) {
  return json{{"kind", kind_name(c.kind)},      {"endpoint", c.endpoint},
              {"model", c.model},               {"api_key_env", c.api_key_env},
              {"cache_path", c.cache_path},     {"max_retries", c.max_retries},
              {"seed", c.seed}};
}

void logprobs_from_json(const json& obj, LogprobConfig& c) {
  if (obj.contains("kind")) c.kind = logprob_kind(obj.at("kind").get<std::string>());
  read_if(obj, "endpoint", c.endpoint);
  read_if(obj, "model", c.model);
  read_if(obj, "api_key_env", c.api_key_env);
  read_if(obj, "cache_path", c.cache_path);
  read_if(obj, "max_retries", c.max_retries);
  read_if(obj, "seed", c.seed);
}

}  // namespace

void PipelineConfig::validate() const {
  if (corpus_path.empty()) throw ConfigError("corpus_path must be set");
  if (output_dir.empty()) throw ConfigError("output_dir must be set");
  embedding.validate();
  scorer.validate();
  merger.validate();
  gate.validate();
  logprobs.validate();
  if (clustering.clusters <= 0) throw ConfigError("clustering.clusters must be positive");
  if (!(clustering.tol > 0.0)) throw ConfigError("clustering.tol must be positive");
  if (clustering.max_iters <= 0) throw ConfigError("clustering.max_iters must be positive");
  if (!(pairing.tau > -1.0) || !(pairing.tau <= 1.0)) {
    throw ConfigError("pairing.tau must lie in (-1, 1]");
  }
  if (selection.allocation == BudgetAllocation::UniformK && selection.uniform_k == 0) {
    throw ConfigError("selection.uniform_k must be positive under uniform allocation");
  }
  if (workers == 0) throw ConfigError("workers must be >= 1");
}

PipelineConfig config_from_json_string(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  PipelineConfig c;
  read_if(doc, "corpus_path", c.corpus_path);
  read_if(doc, "output_dir", c.output_dir);
  read_if(doc, "seed", c.seed);
  read_if(doc, "workers", c.workers);

  bool embedding_seed_set = false;
  bool scorer_seed_set = false;
  bool logprobs_seed_set = false;
  bool clustering_seed_set = false;

  if (doc.contains("embedding")) {
    const json& e = doc.at("embedding");
    embedding_from_json(e, c.embedding);
    embedding_seed_set = e.contains("seed");
    if (e.contains("text_mode")) {
      c.embedding_text_mode =
          embedding_text_mode_from_string(e.at("text_mode").get<std::string>());
    }
  }
  if (doc.contains("clustering")) {
    const json& k = doc.at("clustering");
    read_if(k, "clusters", c.clustering.clusters);
    read_if(k, "max_iters", c.clustering.max_iters);
    read_if(k, "tol", c.clustering.tol);
    read_if(k, "seed", c.clustering.seed);
    clustering_seed_set = k.contains("seed");
  }
  if (doc.contains("selection")) {
    const json& s = doc.at("selection");
    if (s.contains("allocation")) {
      c.selection.allocation = allocation_kind(s.at("allocation").get<std::string>());
    }
    read_if(s, "uniform_k", c.selection.uniform_k);
    read_if(s, "total_target", c.selection.total_target);
    if (s.contains("quality_floor") && !s.at("quality_floor").is_null()) {
      c.selection.quality_floor = s.at("quality_floor").get<double>();
    }
  }
  if (doc.contains("pairing")) {
    const json& p = doc.at("pairing");
    read_if(p, "tau", c.pairing.tau);
    if (p.contains("auto_tune_target") && !p.at("auto_tune_target").is_null()) {
      c.pairing.auto_tune_target = p.at("auto_tune_target").get<std::size_t>();
    }
    read_if(p, "keep_singletons", c.pairing.keep_singletons);
  }
  if (doc.contains("scorer")) {
    scorer_from_json(doc.at("scorer"), c.scorer);
    scorer_seed_set = doc.at("scorer").contains("seed");
  }
  if (doc.contains("merger")) merger_from_json(doc.at("merger"), c.merger);
  if (doc.contains("gate")) {
    const json& g = doc.at("gate");
    read_if(g, "alpha", c.gate.alpha);
    if (g.contains("aggregation")) {
      c.gate.aggregation =
          gate_aggregation_from_string(g.at("aggregation").get<std::string>());
    }
  }
  if (doc.contains("logprobs")) {
    logprobs_from_json(doc.at("logprobs"), c.logprobs);
    logprobs_seed_set = doc.at("logprobs").contains("seed");
  }
  if (doc.contains("outputs")) {
    const json& o = doc.at("outputs");
    read_if(o, "filtered_corpus", c.outputs.filtered_corpus);
    read_if(o, "merged_corpus", c.outputs.merged_corpus);
    read_if(o, "report", c.outputs.report);
    read_if(o, "projection_csv", c.outputs.projection_csv);
    read_if(o, "write_metadata", c.outputs.write_metadata);
  }

  // Sub-seeds follow the run seed unless pinned explicitly.
  if (!embedding_seed_set) c.embedding.seed = c.seed;
  if (!scorer_seed_set) c.scorer.seed = c.seed;
  if (!logprobs_seed_set) c.logprobs.seed = c.seed;
  if (!clustering_seed_set) c.clustering.seed = c.seed;
  return c;
}

std::string config_to_json_string(const PipelineConfig& c, bool pretty) {
  json e = embedding_to_json(c.embedding);
  e["text_mode"] = to_string(c.embedding_text_mode);

  json doc{
      {"corpus_path", c.corpus_path},
      {"output_dir", c.output_dir},
      {"seed", c.seed},
      {"workers", c.workers},
      {"embedding", std::move(e)},
      {"clustering",
       {{"clusters", c.clustering.clusters},
        {"max_iters", c.clustering.max_iters},
        {"tol", c.clustering.tol},
        {"seed", c.clustering.seed}}},
      {"selection",
       {{"allocation", allocation_name(c.selection.allocation)},
        {"uniform_k", c.selection.uniform_k},
        {"total_target", c.selection.total_target},
        {"quality_floor", c.selection.quality_floor.has_value()
                              ? json(*c.selection.quality_floor)
                              : json(nullptr)}}},
      {"pairing",
       {{"tau", c.pairing.tau},
        {"auto_tune_target", c.pairing.auto_tune_target.has_value()
                                 ? json(*c.pairing.auto_tune_target)
                                 : json(nullptr)},
        {"keep_singletons", c.pairing.keep_singletons}}},
      {"scorer", scorer_to_json(c.scorer)},
      {"merger", merger_to_json(c.merger)},
      {"gate",
       {{"alpha", c.gate.alpha}, {"aggregation", to_string(c.gate.aggregation)}}},
      {"logprobs", logprobs_to_json(c.logprobs)},
      {"outputs",
       {{"filtered_corpus", c.outputs.filtered_corpus},
        {"merged_corpus", c.outputs.merged_corpus},
        {"report", c.outputs.report},
        {"projection_csv", c.outputs.projection_csv},
        {"write_metadata", c.outputs.write_metadata}}}};
  return pretty ? doc.dump(2) : doc.dump();
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json_string(buf.str());
}

std::string config_hash(const PipelineConfig& config) {
  return sha256_hex(config_to_json_string(config, /*pretty=*/false));
}

void apply_mock_mode(PipelineConfig& config) {
  config.embedding.kind = EmbeddingProviderKind::DeterministicTest;
  config.scorer.kind = ScorerKind::DeterministicMock;
  config.merger.kind = MergerKind::DeterministicMock;
  config.logprobs.kind = LogprobProviderKind::DeterministicMock;
}

}  // namespace curator
