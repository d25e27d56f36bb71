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

#include "jsonl_cache.hpp"

#include <fstream>

#include "curator/errors.hpp"

namespace curator::internal {

JsonlCache::JsonlCache(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.empty() || !std::filesystem::exists(path_)) return;
  std::ifstream in(path_, std::ios::binary);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object() || !obj.contains("key")) {
      continue;  // truncated or foreign line
    }
    entries_[obj.at("key").get<std::string>()] = std::move(obj);
  }
}

std::optional<nlohmann::json> JsonlCache::get(const std::string& key) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void JsonlCache::put(const std::string& key, nlohmann::json value) {
  value["key"] = key;
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = entries_.emplace(key, value);
  (void)it;
  if (!inserted) return;  // first write wins; identical by construction
  if (path_.empty()) return;
  if (path_.has_parent_path()) {
    std::filesystem::create_directories(path_.parent_path());
  }
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) {
    throw ConfigError("cannot append to cache file: " + path_.string());
  }
  out << value.dump() << '\n';
}

std::size_t JsonlCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size();
}

}  // namespace curator::internal
