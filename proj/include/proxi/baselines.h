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

// Comparison algorithms (random, most popular, exhaustive) and an exact
// optimum for tiny instances.

#ifndef PROXI_BASELINES_H_
#define PROXI_BASELINES_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "proxi/featurization.h"
#include "proxi/miner.h"

namespace proxi {

enum class BaselineKind { kRandom, kMostPopular, kExhaustive };

struct BaselineConfig {
  BaselineKind kind = BaselineKind::kMostPopular;
  std::size_t k = 1;
  std::size_t l = 1;
  std::optional<std::uint64_t> seed;  // required iff kind == kRandom

  void validate() const;  // throws ArgumentError
};

// Each explanation draws l distinct predicates without replacement with
// probability proportional to |M^p|. Throws ArgumentError when the catalog
// has fewer than l predicates.
ExplanationSet random_baseline(const PredicateIndex& index, std::size_t k, std::size_t l, std::uint64_t seed);

// Explanation i takes popularity ranks [i*l, (i+1)*l). Sets `truncated` when
// the catalog runs out before k*l predicates.
ExplanationSet most_popular_baseline(const PredicateIndex& index, std::size_t k, std::size_t l);

struct ExhaustiveOptions {
  std::uint64_t combination_budget = 200'000'000;  // per iteration
  bool parallel = true;
};

struct ExhaustiveStats {
  std::vector<std::uint64_t> combinations_per_iteration;  // subsets actually evaluated
  std::vector<std::size_t> candidates_per_iteration;      // predicates with unmarked cells
};

struct Combination {
  std::vector<PredicateId> predicates;  // ascending
  std::size_t marginal = 0;
};

// Best `size`-combination by coverage of unmarked cells, lexicographically
// least among ties. Partial combinations whose running intersection cannot
// beat the incumbent are pruned. Throws ResourceError past the budget.
Combination best_combination(const PredicateIndex& index, const std::vector<char>& marked, std::size_t size,
                             std::uint64_t budget, std::uint64_t* evaluated = nullptr);
Combination best_combination_parallel(const PredicateIndex& index, const std::vector<char>& marked,
                                      std::size_t size, std::uint64_t budget, std::uint64_t* evaluated = nullptr);

// One optimal l-combination per iteration against the cells still unmarked.
// Stops early when no combination covers a new cell.
ExplanationSet exhaustive_baseline(const PredicateIndex& index, std::size_t k, std::size_t l,
                                   const ExhaustiveOptions& options = {}, ExhaustiveStats* stats = nullptr);

struct OracleLimits {
  std::size_t max_predicates = 12;
  std::size_t max_k = 2;
  std::size_t max_l = 3;
};

struct OracleResult {
  std::size_t coverage = 0;
  ExplanationSet witness;
};

// Exact maximum union coverage over at most k conjunctions of l predicates.
// Among optima the witness is the lexicographically least list of sorted
// predicate tuples. Throws ResourceError outside `limits`.
OracleResult brute_force_oracle(const PredicateIndex& index, std::size_t k, std::size_t l,
                                const OracleLimits& limits = {});

ExplanationSet run_baseline(const PredicateIndex& index, const BaselineConfig& config,
                            const ExhaustiveOptions& exhaustive = {});

std::string_view to_string(BaselineKind kind);

}  // namespace proxi

#endif  // PROXI_BASELINES_H_
