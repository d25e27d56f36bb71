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

// Append-only JSONL cache keyed by a "key" field. Concurrent readers,
// serialized appends. A truncated trailing line (crash mid-write) is
// ignored on load. Not installed.

#ifndef CURATOR_SRC_JSONL_CACHE_HPP_
#define CURATOR_SRC_JSONL_CACHE_HPP_

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include <json.hpp>

namespace curator::internal {

class JsonlCache {
 public:
  /// Empty path means a purely in-memory cache.
  explicit JsonlCache(std::filesystem::path path);

  std::optional<nlohmann::json> get(const std::string& key) const;

  /// Stores under `key` and appends one line to the backing file.
  void put(const std::string& key, nlohmann::json value);

  std::size_t size() const;

 private:
  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, nlohmann::json> entries_;
};

}  // namespace curator::internal

#endif  // CURATOR_SRC_JSONL_CACHE_HPP_
