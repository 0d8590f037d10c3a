// Copyright 2026 The Authors.
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

#ifndef PROXI_COMMON_H_
#define PROXI_COMMON_H_

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace proxi {

// Dense internal identifiers. External ids are remapped through IdDictionary.
using UserId = std::uint32_t;
using ActionId = std::uint32_t;
using CellId = std::uint32_t;
using PredicateId = std::uint32_t;

using Timestamp = std::int64_t;
using UserKey = std::int64_t;  // external user id as it appears in input files

inline constexpr std::uint32_t kInvalidId = std::numeric_limits<std::uint32_t>::max();

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input. Carries the source name and 1-based line when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), source_(source), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what) {}

  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }

 private:
  std::string source_;
  std::size_t line_ = 0;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

// A configured guard rail (combination budget, oracle size limits) was hit.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Bidirectional mapping between external keys and dense ids 0..size()-1.
template <class Key>
class IdDictionary {
 public:
  std::uint32_t intern(const Key& key) {
    auto [it, inserted] = index_.try_emplace(key, static_cast<std::uint32_t>(keys_.size()));
    if (inserted) keys_.push_back(key);
    return it->second;
  }

  std::optional<std::uint32_t> find(const Key& key) const {
    auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const Key& key(std::uint32_t id) const { return keys_.at(id); }
  std::size_t size() const { return keys_.size(); }
  const std::vector<Key>& keys() const { return keys_; }

 private:
  std::vector<Key> keys_;
  std::unordered_map<Key, std::uint32_t> index_;
};

}  // namespace proxi

#endif  // PROXI_COMMON_H_
