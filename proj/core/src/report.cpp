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

#include "curator/report.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "curator/errors.hpp"

namespace curator {

using nlohmann::json;

namespace {

bool completed(const RunReport& r, const std::string& stage) {
  return std::find(r.stages_completed.begin(), r.stages_completed.end(), stage) !=
         r.stages_completed.end();
}

}  // namespace

void validate_report(const RunReport& r) {
  if (completed(r, "select")) {
    std::size_t sum = 0;
    for (const auto& c : r.selection) sum += c.selected;
    if (sum != r.filtered_records) {
      throw ConsistencyError(
          "selection counts do not add up: per-cluster sum " + std::to_string(sum) +
          " vs filtered_records " + std::to_string(r.filtered_records));
    }
  }
  if (completed(r, "pair")) {
    if (2 * r.pairs + r.singletons != r.filtered_records) {
      throw ConsistencyError(
          "pairing does not cover the filtered set: 2*" + std::to_string(r.pairs) +
          " + " + std::to_string(r.singletons) + " != " +
          std::to_string(r.filtered_records));
    }
  }
  if (completed(r, "merge")) {
    const std::size_t attempted = r.gate.passed + r.gate.rejected_by_gate +
                                  r.gate.parse_failed + r.gate.provider_failed;
    if (attempted != r.pairs) {
      throw ConsistencyError("merge outcomes (" + std::to_string(attempted) +
                             ") do not cover the mined pairs (" +
                             std::to_string(r.pairs) + ")");
    }
    if (r.accepted != r.gate.passed || r.fallback_pairs != r.pairs - r.accepted) {
      throw ConsistencyError("gate tallies disagree with merge counts");
    }
  }
  if (completed(r, "assemble")) {
    const std::size_t expect_kept = r.keep_singletons ? r.singletons : 0;
    if (r.kept_singletons != expect_kept) {
      throw ConsistencyError("kept_singletons does not match the singleton flag");
    }
    const std::size_t expected =
        r.accepted + 2 * r.fallback_pairs + r.kept_singletons;
    if (r.merged_records != expected) {
      throw ConsistencyError(
          "merged corpus size violates conservation: " +
          std::to_string(r.merged_records) + " != accepted " +
          std::to_string(r.accepted) + " + 2*fallback " +
          std::to_string(r.fallback_pairs) + " + kept singletons " +
          std::to_string(r.kept_singletons));
    }
  }
}

std::string report_to_json(const RunReport& r) {
  validate_report(r);
  json selection = json::array();
  for (const auto& c : r.selection) {
    selection.push_back(json{{"cluster", c.cluster},
                             {"size", c.size},
                             {"budget", c.budget},
                             {"selected", c.selected},
                             {"F", c.value},
                             {"coverage_ratio", c.coverage_ratio}});
  }
  json per_cluster = json::array();
  for (const auto& c : r.quality.per_cluster) {
    per_cluster.push_back(json{{"cluster", c.cluster},
                               {"accepted", c.accepted},
                               {"mean_pre", c.mean_pre},
                               {"mean_post", c.mean_post},
                               {"percent_change", c.percent_change}});
  }

  json doc{
      {"config_hash", r.config_hash},
      {"config", json::parse(r.config_json.empty() ? "{}" : r.config_json)},
      {"stages_completed", r.stages_completed},
      {"counts",
       {{"initial", r.initial_records},
        {"filtered", r.filtered_records},
        {"pairs", r.pairs},
        {"singletons", r.singletons},
        {"merged", r.merged_records},
        {"accepted", r.accepted},
        {"fallback_pairs", r.fallback_pairs},
        {"kept_singletons", r.kept_singletons}}},
      {"selection", {{"clusters", std::move(selection)}}},
      {"pairing",
       {{"tau", r.tau},
        {"tau_auto_tuned", r.tau_auto_tuned},
        {"pairing_rate", r.pairing_rate},
        {"expected_post_merge", r.expected_post_merge},
        {"keep_singletons", r.keep_singletons}}},
      {"gate",
       {{"alpha", r.gate.alpha},
        {"aggregation", r.gate.aggregation},
        {"passed", r.gate.passed},
        {"rejected_by_gate", r.gate.rejected_by_gate},
        {"parse_failed", r.gate.parse_failed},
        {"provider_failed", r.gate.provider_failed},
        {"rejected_despite_parent_improvement",
         r.gate.rejected_despite_parent_improvement},
        {"note", r.gate.note}}},
      {"quality_delta",
       {{"mean_pre_pair", r.quality.mean_pre_pair},
        {"mean_post_merge", r.quality.mean_post_merge},
        {"percent_change", r.quality.percent_change},
        {"no_merges_accepted", r.quality.no_merges_accepted},
        {"per_cluster", std::move(per_cluster)}}},
      {"artifacts", r.artifacts},
      {"warnings", r.warnings},
      {"timings",
       {{"embed_s", r.timings.embed_s},
        {"cluster_s", r.timings.cluster_s},
        {"select_s", r.timings.select_s},
        {"pair_s", r.timings.pair_s},
        {"merge_s", r.timings.merge_s},
        {"assemble_s", r.timings.assemble_s},
        {"total_s", r.timings.total_s}}}};
  return doc.dump(2);
}

RunReport report_from_json(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("report is not valid JSON: ") + e.what());
  }
  RunReport r;
  r.config_hash = doc.value("config_hash", "");
  if (doc.contains("config")) r.config_json = doc.at("config").dump();
  if (doc.contains("stages_completed")) {
    r.stages_completed = doc.at("stages_completed").get<std::vector<std::string>>();
  }
  const json& counts = doc.at("counts");
  r.initial_records = counts.value("initial", 0u);
  r.filtered_records = counts.value("filtered", 0u);
  r.pairs = counts.value("pairs", 0u);
  r.singletons = counts.value("singletons", 0u);
  r.merged_records = counts.value("merged", 0u);
  r.accepted = counts.value("accepted", 0u);
  r.fallback_pairs = counts.value("fallback_pairs", 0u);
  r.kept_singletons = counts.value("kept_singletons", 0u);
  if (doc.contains("selection")) {
    for (const auto& c : doc.at("selection").at("clusters")) {
      ClusterSelectionStats s;
      s.cluster = c.value("cluster", 0);
      s.size = c.value("size", 0u);
      s.budget = c.value("budget", 0u);
      s.selected = c.value("selected", 0u);
      s.value = c.value("F", 0.0);
      s.coverage_ratio = c.value("coverage_ratio", 0.0);
      r.selection.push_back(s);
    }
  }
  if (doc.contains("pairing")) {
    const json& p = doc.at("pairing");
    r.tau = p.value("tau", 0.0);
    r.tau_auto_tuned = p.value("tau_auto_tuned", false);
    r.pairing_rate = p.value("pairing_rate", 0.0);
    r.expected_post_merge = p.value("expected_post_merge", 0u);
    r.keep_singletons = p.value("keep_singletons", true);
  }
  if (doc.contains("gate")) {
    const json& g = doc.at("gate");
    r.gate.alpha = g.value("alpha", 0.75);
    r.gate.aggregation = g.value("aggregation", "sum");
    r.gate.passed = g.value("passed", 0u);
    r.gate.rejected_by_gate = g.value("rejected_by_gate", 0u);
    r.gate.parse_failed = g.value("parse_failed", 0u);
    r.gate.provider_failed = g.value("provider_failed", 0u);
    r.gate.rejected_despite_parent_improvement =
        g.value("rejected_despite_parent_improvement", 0u);
    r.gate.note = g.value("note", "");
  }
  if (doc.contains("quality_delta")) {
    const json& q = doc.at("quality_delta");
    r.quality.mean_pre_pair = q.value("mean_pre_pair", 0.0);
    r.quality.mean_post_merge = q.value("mean_post_merge", 0.0);
    r.quality.percent_change = q.value("percent_change", 0.0);
    r.quality.no_merges_accepted = q.value("no_merges_accepted", false);
    if (q.contains("per_cluster")) {
      for (const auto& c : q.at("per_cluster")) {
        ClusterQualityDelta d;
        d.cluster = c.value("cluster", 0);
        d.accepted = c.value("accepted", 0u);
        d.mean_pre = c.value("mean_pre", 0.0);
        d.mean_post = c.value("mean_post", 0.0);
        d.percent_change = c.value("percent_change", 0.0);
        r.quality.per_cluster.push_back(d);
      }
    }
  }
  if (doc.contains("artifacts")) {
    r.artifacts = doc.at("artifacts").get<std::map<std::string, std::string>>();
  }
  if (doc.contains("warnings")) {
    r.warnings = doc.at("warnings").get<std::vector<std::string>>();
  }
  if (doc.contains("timings")) {
    const json& t = doc.at("timings");
    r.timings.embed_s = t.value("embed_s", 0.0);
    r.timings.cluster_s = t.value("cluster_s", 0.0);
    r.timings.select_s = t.value("select_s", 0.0);
    r.timings.pair_s = t.value("pair_s", 0.0);
    r.timings.merge_s = t.value("merge_s", 0.0);
    r.timings.assemble_s = t.value("assemble_s", 0.0);
    r.timings.total_s = t.value("total_s", 0.0);
  }
  return r;
}

void emit_report(const RunReport& report, const std::filesystem::path& path,
                 std::ostream& out) {
  const std::string body = report_to_json(report);  // validates
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw ConfigError("cannot write report: " + path.string());
  file << body << '\n';
  print_summary(report, out);
}

void print_summary(const RunReport& r, std::ostream& out) {
  out << "run " << r.config_hash.substr(0, 12) << "\n";
  out << "  records: " << r.initial_records;
  if (completed(r, "select")) out << " -> filtered " << r.filtered_records;
  if (completed(r, "pair")) {
    out << " -> pairs " << r.pairs << " (+" << r.singletons << " singletons)";
  }
  if (completed(r, "assemble")) out << " -> merged " << r.merged_records;
  out << "\n";
  if (completed(r, "pair")) {
    out << "  tau " << r.tau << (r.tau_auto_tuned ? " (auto-tuned)" : "")
        << ", pairing rate " << std::fixed << std::setprecision(3)
        << r.pairing_rate << std::defaultfloat << ", expected post-merge "
        << r.expected_post_merge << "\n";
  }
  if (completed(r, "merge")) {
    out << "  gate(" << r.gate.aggregation << ", alpha=" << r.gate.alpha
        << "): " << r.gate.passed << " passed, " << r.gate.rejected_by_gate
        << " rejected, " << r.gate.parse_failed << " parse-failed, "
        << r.gate.provider_failed << " provider-failed\n";
    if (r.quality.no_merges_accepted) {
      out << "  quality delta: no merges accepted\n";
    } else {
      out << "  quality delta: mean pre-pair " << std::fixed << std::setprecision(3)
          << r.quality.mean_pre_pair << " -> mean post-merge "
          << r.quality.mean_post_merge << " (" << std::setprecision(1)
          << r.quality.percent_change << "% change)" << std::defaultfloat << "\n";
      for (const auto& c : r.quality.per_cluster) {
        if (c.accepted == 0) continue;
        out << "    cluster " << c.cluster << ": " << std::fixed
            << std::setprecision(3) << c.mean_pre << " -> " << c.mean_post << " ("
            << std::setprecision(1) << c.percent_change << "%, " << c.accepted
            << " merges)" << std::defaultfloat << "\n";
      }
    }
    if (!r.gate.note.empty()) out << "  note: " << r.gate.note << "\n";
  }
  for (const auto& w : r.warnings) out << "  warning: " << w << "\n";
}

}  // namespace curator
