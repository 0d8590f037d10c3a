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

#include "proxi/baselines.h"

#include <algorithm>
#include <numeric>
#include <random>

namespace proxi {

std::string_view to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kRandom:
      return "random";
    case BaselineKind::kMostPopular:
      return "most-popular";
    case BaselineKind::kExhaustive:
      return "exhaustive";
  }
  return "unknown";
}

void BaselineConfig::validate() const {
  if (k == 0 || l == 0) throw ArgumentError("k and l must be at least 1");
  if (kind == BaselineKind::kRandom && !seed) throw ArgumentError("the random baseline needs a seed");
  if (kind != BaselineKind::kRandom && seed) {
    throw ArgumentError("a seed only applies to the random baseline");
  }
}

ExplanationSet random_baseline(const PredicateIndex& index, std::size_t k, std::size_t l, std::uint64_t seed) {
  if (k == 0 || l == 0) throw ArgumentError("k and l must be at least 1");
  if (index.predicate_count() < l) {
    throw ArgumentError("catalog has " + std::to_string(index.predicate_count()) + " predicates, fewer than l = " +
                        std::to_string(l));
  }
  std::mt19937_64 rng(seed);
  std::vector<std::vector<PredicateId>> explanations;
  std::vector<PredicateId> pool;
  for (std::size_t i = 0; i < k; ++i) {
    pool.resize(index.predicate_count());
    std::iota(pool.begin(), pool.end(), PredicateId{0});
    std::vector<PredicateId> drawn;
    while (drawn.size() < l) {
      std::uint64_t total = 0;
      for (PredicateId p : pool) total += index.postings(p).size();
      std::size_t pick = 0;
      if (total == 0) {
        pick = std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng);
      } else {
        std::uint64_t r = std::uniform_int_distribution<std::uint64_t>(0, total - 1)(rng);
        while (r >= index.postings(pool[pick]).size()) {
          r -= index.postings(pool[pick]).size();
          ++pick;
        }
      }
      drawn.push_back(pool[pick]);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    explanations.push_back(std::move(drawn));
  }
  return assemble_explanation_set(index, explanations);
}

ExplanationSet most_popular_baseline(const PredicateIndex& index, std::size_t k, std::size_t l) {
  if (k == 0 || l == 0) throw ArgumentError("k and l must be at least 1");
  auto ranked = predicate_popularity(index);
  std::vector<std::vector<PredicateId>> explanations;
  bool truncated = false;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t from = i * l;
    if (from >= ranked.size()) {
      truncated = true;
      break;
    }
    std::size_t to = std::min(from + l, ranked.size());
    if (to - from < l) truncated = true;
    std::vector<PredicateId> e;
    for (std::size_t r = from; r < to; ++r) e.push_back(ranked[r].first);
    explanations.push_back(std::move(e));
  }
  auto set = assemble_explanation_set(index, explanations);
  set.truncated = truncated;
  return set;
}

namespace {

using Bits = std::vector<std::uint64_t>;

std::size_t popcount(const Bits& bits) {
  std::size_t n = 0;
  for (auto w : bits) n += static_cast<std::size_t>(__builtin_popcountll(w));
  return n;
}

// Calls fn(indices) for every size-`r` subset of {0..n-1} in lex order.
template <class Fn>
void for_each_subset(std::size_t n, std::size_t r, Fn&& fn) {
  if (r > n) return;
  std::vector<std::size_t> idx(r);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (;;) {
    fn(idx);
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == n - r + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

OracleResult brute_force_oracle(const PredicateIndex& index, std::size_t k, std::size_t l,
                                const OracleLimits& limits) {
  if (k == 0 || l == 0) throw ArgumentError("k and l must be at least 1");
  if (index.predicate_count() > limits.max_predicates || k > limits.max_k || l > limits.max_l) {
    throw ResourceError("instance exceeds oracle limits (predicates <= " + std::to_string(limits.max_predicates) +
                        ", k <= " + std::to_string(limits.max_k) + ", l <= " + std::to_string(limits.max_l) + ")");
  }
  const std::size_t words = (index.cell_count() + 63) / 64;
  const std::size_t size = std::min(l, index.predicate_count());

  std::vector<std::vector<PredicateId>> tuples;
  std::vector<Bits> covers;
  if (size > 0) {
    for_each_subset(index.predicate_count(), size, [&](const std::vector<std::size_t>& idx) {
      std::vector<PredicateId> tuple(idx.begin(), idx.end());
      Bits bits(words, 0);
      for (CellId c : covered_cells(index, tuple)) bits[c / 64] |= std::uint64_t{1} << (c % 64);
      tuples.push_back(std::move(tuple));
      covers.push_back(std::move(bits));
    });
  }

  OracleResult result;
  const std::size_t picks = std::min(k, tuples.size());
  std::vector<std::size_t> best_pick;
  bool have = false;
  Bits acc(words);
  for_each_subset(tuples.size(), picks, [&](const std::vector<std::size_t>& idx) {
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t t : idx) {
      for (std::size_t w = 0; w < words; ++w) acc[w] |= covers[t][w];
    }
    std::size_t cov = popcount(acc);
    if (!have || cov > result.coverage) {
      have = true;
      result.coverage = cov;
      best_pick = idx;
    }
  });

  std::vector<std::vector<PredicateId>> witness;
  for (std::size_t t : best_pick) witness.push_back(tuples[t]);
  result.witness = assemble_explanation_set(index, witness);
  return result;
}

ExplanationSet run_baseline(const PredicateIndex& index, const BaselineConfig& config,
                            const ExhaustiveOptions& exhaustive) {
  config.validate();
  switch (config.kind) {
    case BaselineKind::kRandom:
      return random_baseline(index, config.k, config.l, *config.seed);
    case BaselineKind::kMostPopular:
      return most_popular_baseline(index, config.k, config.l);
    case BaselineKind::kExhaustive:
      return exhaustive_baseline(index, config.k, config.l, exhaustive);
  }
  throw ArgumentError("unknown baseline");
}

}  // namespace proxi
