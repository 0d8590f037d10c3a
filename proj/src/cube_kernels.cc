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

// Whole-cube aggregation. The parallel kernel carries ancestor bitsets through
// each action's DAG in topological (time) order; the serial reference runs a
// forward traversal from every performer.

#include <bit>
#include <cstdint>
#include <vector>

#include <omp.h>

#include "cascade.h"
#include "proxi/ingestion.h"

namespace proxi {
namespace {

CubeMass empty_mass(const SocialGraph& graph, const ActionLog& log) {
  CubeMass mass;
  mass.by_influencer.assign(graph.user_count(), 0);
  mass.by_follower.assign(graph.user_count(), 0);
  mass.by_action.assign(log.action_count(), 0);
  return mass;
}

// Adds one action's contribution. `ancestors` and `per_source` are scratch.
void accumulate_bitsets(const internal::LocalCascade& cascade, ActionId action, CubeMass& mass,
                        std::vector<std::uint64_t>& ancestors, std::vector<std::uint64_t>& per_source) {
  const std::size_t n = cascade.size();
  const std::size_t words = (n + 63) / 64;
  ancestors.assign(n * words, 0);
  per_source.assign(n, 0);

  // Push-style propagation: when j is reached in order every predecessor of j
  // has already contributed, because arcs always point forward.
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t* src = &ancestors[i * words];
    for (std::uint32_t j : cascade.out[i]) {
      std::uint64_t* dst = &ancestors[j * words];
      for (std::size_t w = 0; w < words; ++w) dst[w] |= src[w];
      dst[i / 64] |= std::uint64_t{1} << (i % 64);
    }
  }

  std::uint64_t total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::uint64_t* row = &ancestors[j * words];
    std::uint64_t count = 0;
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t bits = row[w];
      count += static_cast<std::uint64_t>(std::popcount(bits));
      while (bits) {
        int b = std::countr_zero(bits);
        ++per_source[w * 64 + static_cast<std::size_t>(b)];
        bits &= bits - 1;
      }
    }
    if (count > 0) mass.by_follower[cascade.users[j]] += count;
    total += count;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (per_source[i] > 0) mass.by_influencer[cascade.users[i]] += per_source[i];
  }
  mass.by_action[action] += total;
}

void merge_into(CubeMass& total, const CubeMass& part) {
  for (std::size_t i = 0; i < total.by_influencer.size(); ++i) {
    total.by_influencer[i] += part.by_influencer[i];
    total.by_follower[i] += part.by_follower[i];
  }
  for (std::size_t a = 0; a < total.by_action.size(); ++a) total.by_action[a] += part.by_action[a];
}

}  // namespace

CubeMass compute_cube_mass(const SocialGraph& graph, const ActionLog& log,
                           const PropagationOptions& options) {
  CubeMass mass = empty_mass(graph, log);
  const auto action_count = static_cast<std::int64_t>(log.action_count());

#pragma omp parallel
  {
    CubeMass local = empty_mass(graph, log);
    internal::CascadeBuilder builder(graph);
    internal::LocalCascade cascade;
    std::vector<std::uint64_t> ancestors;
    std::vector<std::uint64_t> per_source;

#pragma omp for schedule(dynamic, 16) nowait
    for (std::int64_t a = 0; a < action_count; ++a) {
      builder.build(log, static_cast<ActionId>(a), options, cascade);
      accumulate_bitsets(cascade, static_cast<ActionId>(a), local, ancestors, per_source);
    }

#pragma omp critical(proxi_cube_merge)
    merge_into(mass, local);
  }
  return mass;
}

CubeMass compute_cube_mass_serial(const SocialGraph& graph, const ActionLog& log,
                                  const PropagationOptions& options) {
  CubeMass mass = empty_mass(graph, log);
  internal::CascadeBuilder builder(graph);
  internal::LocalCascade cascade;
  std::vector<char> seen;
  std::vector<std::uint32_t> stack;
  for (ActionId a = 0; a < log.action_count(); ++a) {
    builder.build(log, a, options, cascade);
    for (std::uint32_t s = 0; s < cascade.size(); ++s) {
      if (cascade.out[s].empty()) continue;
      seen.assign(cascade.size(), 0);
      seen[s] = 1;
      stack.assign(1, s);
      while (!stack.empty()) {
        std::uint32_t i = stack.back();
        stack.pop_back();
        for (std::uint32_t j : cascade.out[i]) {
          if (seen[j]) continue;
          seen[j] = 1;
          stack.push_back(j);
          ++mass.by_influencer[cascade.users[s]];
          ++mass.by_follower[cascade.users[j]];
          ++mass.by_action[a];
        }
      }
    }
  }
  return mass;
}

}  // namespace proxi
