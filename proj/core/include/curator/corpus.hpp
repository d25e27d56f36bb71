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

#ifndef CURATOR_CORPUS_HPP_
#define CURATOR_CORPUS_HPP_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace curator {

/// Lineage of a record: loaded as-is, or synthesized from two parents.
struct Provenance {
  enum class Kind { Original, Merged };
  Kind kind = Kind::Original;
  std::string parent_a;  // set when kind == Merged
  std::string parent_b;

  static Provenance original() { return {}; }
  static Provenance merged(std::string a, std::string b) {
    return {Kind::Merged, std::move(a), std::move(b)};
  }
  bool is_merged() const { return kind == Kind::Merged; }
};

/// One instruction/input/output triple. `instruction` is the directive,
/// `input` the (possibly empty) task context, `output` the response.
struct InstructionRecord {
  std::string id;
  std::string instruction;
  std::string input;
  std::string output;
  Provenance provenance;
};

/// An ordered, id-indexed sequence of records. Immutable after
/// construction; mutation means building a new Corpus.
class Corpus {
 public:
  Corpus() = default;

  /// Validates: unique ids, instruction non-empty after whitespace trim.
  /// Throws ValidationError listing offending positions.
  explicit Corpus(std::vector<InstructionRecord> records);

  const std::vector<InstructionRecord>& records() const { return records_; }
  const InstructionRecord& at(std::size_t pos) const { return records_.at(pos); }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  /// nullptr when the id is unknown.
  const InstructionRecord* find(std::string_view id) const;
  /// Throws ArgumentError when the id is unknown.
  std::size_t position_of(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id) != nullptr; }

 private:
  std::vector<InstructionRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct SaveOptions {
  /// Emit the reserved "_meta" key carrying id and provenance. Trainers
  /// that ignore unknown keys still consume the file.
  bool with_metadata = false;
};

/// Parses an Alpaca-format JSON array. Record ids come from an explicit
/// id (top-level "id" or "_meta".id) when present, else zero-padded
/// sequence numbers in file order. Malformed JSON raises ValidationError
/// with a byte offset; empty/missing instructions raise ValidationError
/// listing the offending indices. Non-fatal oddities (e.g. empty outputs)
/// are appended to `warnings` when provided.
Corpus corpus_from_json(std::string_view json_text,
                        std::vector<std::string>* warnings = nullptr);
std::string corpus_to_json(const Corpus& corpus, const SaveOptions& opts = {});

Corpus load_corpus(const std::filesystem::path& path,
                   std::vector<std::string>* warnings = nullptr);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path,
                 const SaveOptions& opts = {});

/// New corpus holding the records at `positions`, in the order given.
Corpus subset_corpus(const Corpus& corpus,
                     const std::vector<std::size_t>& positions);

/// True when the string contains a non-whitespace character.
bool has_content(std::string_view text);

}  // namespace curator

#endif  // CURATOR_CORPUS_HPP_
