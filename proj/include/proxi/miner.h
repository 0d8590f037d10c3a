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

// Coverage functions and the greedy explanation miners.
//
// An explanation E is a conjunction of predicates; it covers the cells in the
// intersection of its postings. A set of explanations covers the union of
// what its members cover. mine_explanations adds explanations one at a time,
// each grown one predicate at a time by maximum additional coverage, and
// avoids most recomputation with a lazily refreshed max-heap.

#ifndef PROXI_MINER_H_
#define PROXI_MINER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "proxi/common.h"
#include "proxi/featurization.h"
#include "proxi/ingestion.h"

namespace proxi {

struct Explanation {
  std::vector<PredicateId> predicates;  // in selection order
  std::vector<CellId> covered;          // sorted, includes cells covered earlier
  std::size_t raw_coverage = 0;
  std::size_t marginal_coverage = 0;    // cells newly covered when selected

  friend bool operator==(const Explanation&, const Explanation&) = default;
};

struct ExplanationSet {
  std::vector<Explanation> explanations;
  std::vector<CellId> marked;  // union of covered, sorted
  std::size_t total_followups = 0;
  std::size_t total_coverage = 0;
  // Set by baselines that could not fill every explanation.
  bool truncated = false;

  double relative_coverage() const {
    return total_followups == 0 ? 0.0 : static_cast<double>(total_coverage) / static_cast<double>(total_followups);
  }

  friend bool operator==(const ExplanationSet&, const ExplanationSet&) = default;
};

// Heap element: cached marginal coverage `cov` of adding `predicate`, valid
// as of stamp `flag`.
struct LazyHeapEntry {
  PredicateId predicate;
  std::size_t cov;
  std::size_t flag;
};

// Max-heap on cov; equal cov pops the lower predicate id first.
class LazyHeap {
 public:
  void push(LazyHeapEntry entry);
  LazyHeapEntry pop();
  const LazyHeapEntry& top() const { return entries_.front(); }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<LazyHeapEntry> entries_;
};

// Per-cell flag (number of predicates of the explanation under construction
// covering the cell, offset by iteration * l) and the covered mark.
struct CellState {
  explicit CellState(std::size_t cells = 0) : flag(cells, 0), marked(cells, 0) {}

  std::vector<std::size_t> flag;
  std::vector<char> marked;
};

struct MiningStats {
  std::uint64_t coverage_evaluations = 0;
};

// |intersection of postings|; the empty conjunction covers every cell.
// Throws ArgumentError on an unknown predicate id.
std::size_t coverage_of_explanation(const PredicateIndex& index, std::span<const PredicateId> predicates);
std::vector<CellId> covered_cells(const PredicateIndex& index, std::span<const PredicateId> predicates);

// |union over explanations of their covered cells|.
std::size_t coverage_of_set(const PredicateIndex& index, std::span<const std::vector<PredicateId>> explanations);

// Builds an ExplanationSet from explicit conjunctions, taking marginals in
// list order.
ExplanationSet assemble_explanation_set(const PredicateIndex& index,
                                        std::span<const std::vector<PredicateId>> explanations);

// Lazy greedy. Stops early once the next explanation would cover no new
// cell. Throws ArgumentError when k or l is 0.
ExplanationSet mine_explanations(const PredicateIndex& index, std::size_t k, std::size_t l,
                                 MiningStats* stats = nullptr);

// Builds explanation number `iteration` from a copy of the heap, updating
// cell flags and marking the cells it covers.
Explanation next_explanation(const PredicateIndex& index, LazyHeap heap, std::size_t l, std::size_t iteration,
                             CellState& cells, MiningStats* stats = nullptr);

// Same contract as mine_explanations, recomputing every marginal at every
// step. Reference for the lazy variant.
ExplanationSet eager_greedy(const PredicateIndex& index, std::size_t k, std::size_t l,
                            MiningStats* stats = nullptr);

struct Annotation {
  std::size_t action_count = 0;    // influencer's actions satisfying the action predicates
  std::size_t follower_count = 0;  // active followers satisfying the user predicates
  std::size_t followup_count = 0;  // raw coverage

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

// The index must come from build_predicate_index over `fset` and `catalog`.
Annotation annotate(const Explanation& explanation, const PredicateIndex& index, const FollowupSet& fset,
                    const FeatureCatalog& catalog,
                    UserPredicateTarget target = UserPredicateTarget::kFollower);

}  // namespace proxi

#endif  // PROXI_MINER_H_
