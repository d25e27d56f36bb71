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

#ifndef CURATOR_HASHING_HPP_
#define CURATOR_HASHING_HPP_

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>

namespace curator {

/// splitmix64 finalizer; a cheap, well-mixed 64-bit permutation.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// FNV-1a over bytes, mixed with a seed. Not cryptographic; used for the
/// deterministic test providers and tie-free jitter, never for identity.
std::uint64_t hash_bytes(std::string_view bytes, std::uint64_t seed = 0);

/// Maps a 64-bit hash to a double in [0, 1).
constexpr double unit_double(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// SHA-256 hex digest. Content addressing for caches and checkpoints.
std::string sha256_hex(std::string_view data);

/// SHA-256 over length-prefixed parts, so ("ab","c") != ("a","bc").
std::string content_key(std::initializer_list<std::string_view> parts);

/// SHA-256 of a file's bytes. Throws ConfigError if unreadable.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace curator

#endif  // CURATOR_HASHING_HPP_
