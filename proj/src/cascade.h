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

#ifndef PROXI_SRC_CASCADE_H_
#define PROXI_SRC_CASCADE_H_

#include <cstdint>
#include <vector>

#include "proxi/common.h"
#include "proxi/ingestion.h"

namespace proxi::internal {

// Performers of one action in time order, resolved to graph ids (kInvalidId
// for users absent from the social graph), with arcs as local indices. Every
// arc i -> j satisfies i < j.
struct LocalCascade {
  std::vector<UserId> users;
  std::vector<Timestamp> times;
  std::vector<std::vector<std::uint32_t>> out;

  std::size_t size() const { return users.size(); }
};

// Owns a UserId -> local index scratch table so repeated builds stay linear in
// the cascade size. Not thread-safe; use one per thread.
class CascadeBuilder {
 public:
  explicit CascadeBuilder(const SocialGraph& graph)
      : graph_(graph), local_of_(graph.user_count(), kInvalidId) {}

  void build(const ActionLog& log, ActionId action, const PropagationOptions& options,
             LocalCascade& cascade);

 private:
  const SocialGraph& graph_;
  std::vector<std::uint32_t> local_of_;
};

}  // namespace proxi::internal

#endif  // PROXI_SRC_CASCADE_H_
