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

#include "curator/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "curator/errors.hpp"

namespace curator {

using nlohmann::json;

bool has_content(std::string_view text) {
  return std::any_of(text.begin(), text.end(), [](unsigned char c) {
    return std::isspace(c) == 0;
  });
}

Corpus::Corpus(std::vector<InstructionRecord> records)
    : records_(std::move(records)) {
  index_.reserve(records_.size());
  std::vector<std::size_t> bad_instruction;
  std::vector<std::size_t> duplicate_ids;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (!has_content(records_[i].instruction)) bad_instruction.push_back(i);
    auto [it, inserted] = index_.emplace(records_[i].id, i);
    (void)it;
    if (!inserted) duplicate_ids.push_back(i);
  }
  if (!bad_instruction.empty() || !duplicate_ids.empty()) {
    std::ostringstream msg;
    msg << "corpus validation failed:";
    if (!bad_instruction.empty()) {
      msg << " empty instruction at indices [";
      for (std::size_t k = 0; k < bad_instruction.size(); ++k) {
        if (k) msg << ", ";
        if (k == 10) {
          msg << "...";
          break;
        }
        msg << bad_instruction[k];
      }
      msg << "]";
    }
    if (!duplicate_ids.empty()) {
      msg << " duplicate ids at indices [";
      for (std::size_t k = 0; k < duplicate_ids.size(); ++k) {
        if (k) msg << ", ";
        if (k == 10) {
          msg << "...";
          break;
        }
        msg << duplicate_ids[k] << " (" << records_[duplicate_ids[k]].id << ")";
      }
      msg << "]";
    }
    throw ValidationError(msg.str());
  }
}

const InstructionRecord* Corpus::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &records_[it->second];
}

std::size_t Corpus::position_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) {
    throw ArgumentError("unknown record id: " + std::string(id));
  }
  return it->second;
}

namespace {

std::string sequence_id(std::size_t pos, std::size_t total) {
  int width = 6;
  for (std::size_t v = total; v > 1000000; v /= 10) ++width;
  std::ostringstream out;
  out.width(width);
  out.fill('0');
  out << pos;
  return out.str();
}

Provenance provenance_from_meta(const json& meta) {
  if (!meta.contains("provenance")) return Provenance::original();
  const json& p = meta.at("provenance");
  if (p.is_string() && p.get<std::string>() == "original") {
    return Provenance::original();
  }
  if (p.is_object() && p.value("kind", "") == "merged") {
    const auto& parents = p.at("parents");
    if (!parents.is_array() || parents.size() != 2) {
      throw ValidationError("merged provenance must carry exactly two parents");
    }
    return Provenance::merged(parents[0].get<std::string>(),
                              parents[1].get<std::string>());
  }
  throw ValidationError("unrecognized provenance value: " + p.dump());
}

json provenance_to_meta(const Provenance& prov) {
  if (!prov.is_merged()) return json("original");
  return json{{"kind", "merged"},
              {"parents", json::array({prov.parent_a, prov.parent_b})}};
}

}  // namespace

Corpus corpus_from_json(std::string_view json_text,
                        std::vector<std::string>* warnings) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    std::ostringstream msg;
    msg << "malformed JSON at byte offset " << e.byte << ": " << e.what();
    throw ValidationError(msg.str());
  }
  if (!doc.is_array()) {
    throw ValidationError("corpus file must be a top-level JSON array");
  }

  std::vector<InstructionRecord> records;
  records.reserve(doc.size());
  std::vector<std::size_t> missing_instruction;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& obj = doc[i];
    if (!obj.is_object()) {
      throw ValidationError("corpus entry " + std::to_string(i) +
                            " is not a JSON object");
    }
    InstructionRecord rec;
    if (obj.contains("instruction") && obj.at("instruction").is_string()) {
      rec.instruction = obj.at("instruction").get<std::string>();
    }
    if (obj.contains("input") && obj.at("input").is_string()) {
      rec.input = obj.at("input").get<std::string>();
    }
    if (obj.contains("output") && obj.at("output").is_string()) {
      rec.output = obj.at("output").get<std::string>();
    }
    if (!has_content(rec.instruction)) {
      missing_instruction.push_back(i);
      continue;
    }
    if (obj.contains("id") && obj.at("id").is_string()) {
      rec.id = obj.at("id").get<std::string>();
    }
    if (obj.contains("_meta") && obj.at("_meta").is_object()) {
      const json& meta = obj.at("_meta");
      if (rec.id.empty() && meta.contains("id") && meta.at("id").is_string()) {
        rec.id = meta.at("id").get<std::string>();
      }
      rec.provenance = provenance_from_meta(meta);
    }
    if (rec.id.empty()) rec.id = sequence_id(i, doc.size());
    if (!has_content(rec.output) && warnings != nullptr) {
      warnings->push_back("record " + rec.id + " has an empty output");
    }
    records.push_back(std::move(rec));
  }
  if (!missing_instruction.empty()) {
    std::ostringstream msg;
    msg << "missing or empty instruction at indices [";
    for (std::size_t k = 0; k < missing_instruction.size(); ++k) {
      if (k) msg << ", ";
      if (k == 20) {
        msg << "... (" << missing_instruction.size() << " total)";
        break;
      }
      msg << missing_instruction[k];
    }
    msg << "]";
    throw ValidationError(msg.str());
  }
  return Corpus(std::move(records));
}

std::string corpus_to_json(const Corpus& corpus, const SaveOptions& opts) {
  json arr = json::array();
  for (const auto& rec : corpus.records()) {
    json obj{{"instruction", rec.instruction},
             {"input", rec.input},
             {"output", rec.output}};
    if (opts.with_metadata) {
      obj["_meta"] = json{{"id", rec.id},
                          {"provenance", provenance_to_meta(rec.provenance)}};
    }
    arr.push_back(std::move(obj));
  }
  return arr.dump(2);
}

Corpus load_corpus(const std::filesystem::path& path,
                   std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open corpus file: " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return corpus_from_json(buf.str(), warnings);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path,
                 const SaveOptions& opts) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw ConfigError("cannot open for writing: " + path.string());
  }
  out << corpus_to_json(corpus, opts) << '\n';
  if (!out) {
    throw ConfigError("write failed: " + path.string());
  }
}

Corpus subset_corpus(const Corpus& corpus,
                     const std::vector<std::size_t>& positions) {
  std::vector<InstructionRecord> records;
  records.reserve(positions.size());
  for (std::size_t pos : positions) records.push_back(corpus.at(pos));
  return Corpus(std::move(records));
}

}  // namespace curator
