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

#ifndef CURATOR_ERRORS_HPP_
#define CURATOR_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace curator {

/// Base class for all curator errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad configuration or invalid input file (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Caller violated an operation precondition (CLI exit code 2).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Input data failed validation (CLI exit code 2).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A remote provider failed after retries (CLI exit code 3).
class ProviderError : public Error {
 public:
  ProviderError(const std::string& what, int attempts)
      : Error(what), attempts_(attempts) {}
  explicit ProviderError(const std::string& what) : Error(what) {}
  int attempts() const { return attempts_; }

 private:
  int attempts_ = 0;
};

/// Internal invariant violated, e.g. report counts that do not add up
/// (CLI exit code 4).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace curator

#endif  // CURATOR_ERRORS_HPP_
