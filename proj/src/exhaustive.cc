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

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <exception>
#include <vector>

#include <omp.h>

#include "proxi/baselines.h"

namespace proxi {
namespace {

struct Candidate {
  PredicateId predicate;
  std::vector<std::uint64_t> bits;  // unmarked cells of the predicate
  std::size_t count = 0;
};

std::vector<Candidate> unmarked_candidates(const PredicateIndex& index, const std::vector<char>& marked) {
  const std::size_t words = (index.cell_count() + 63) / 64;
  std::vector<Candidate> out;
  for (PredicateId p = 0; p < index.predicate_count(); ++p) {
    Candidate c{p, {}, 0};
    for (CellId cell : index.postings(p)) {
      if (marked[cell]) continue;
      if (c.bits.empty()) c.bits.assign(words, 0);
      c.bits[cell / 64] |= std::uint64_t{1} << (cell % 64);
      ++c.count;
    }
    if (c.count > 0) out.push_back(std::move(c));
  }
  return out;
}

// Depth-first enumeration in lexicographic order of candidate indices.
// Without a shared incumbent, subtrees that cannot strictly beat the local
// incumbent are pruned. The shared incumbent of the parallel search only
// prunes strictly worse subtrees, so ties across roots survive to the merge.
class Enumerator {
 public:
  Enumerator(const std::vector<Candidate>& candidates, std::size_t size, std::uint64_t budget,
             std::atomic<std::uint64_t>& evaluated, const std::atomic<std::size_t>* shared_best)
      : candidates_(candidates), size_(size), budget_(budget), evaluated_(evaluated), shared_best_(shared_best) {
    levels_.resize(size);
    counts_.resize(size);
  }

  void run_from(std::size_t first) {
    chosen_.assign(1, first);
    const Candidate& root = candidates_[first];
    count();
    if (!worth_keeping(root.count)) return;
    if (size_ == 1) {
      record(root.count);
      return;
    }
    levels_[0] = root.bits;
    counts_[0] = root.count;
    descend(first + 1, 1);
  }

  std::size_t best() const { return best_; }
  const std::vector<std::size_t>& best_indices() const { return best_indices_; }
  bool found() const { return !best_indices_.empty(); }

 private:
  void count() {
    if (evaluated_.fetch_add(1, std::memory_order_relaxed) + 1 > budget_) {
      throw ResourceError("exhaustive search exceeded its combination budget of " + std::to_string(budget_));
    }
  }

  bool worth_keeping(std::size_t cov) const {
    if (cov == 0 || cov <= best_) return false;
    if (shared_best_ && cov < shared_best_->load(std::memory_order_relaxed)) return false;
    return true;
  }

  void record(std::size_t cov) {
    best_ = cov;
    best_indices_ = chosen_;
  }

  void descend(std::size_t start, std::size_t depth) {
    const auto& current = levels_[depth - 1];
    const std::size_t remaining = size_ - depth;
    auto& next = levels_[depth];
    next.resize(current.size());
    for (std::size_t i = start; i + remaining <= candidates_.size(); ++i) {
      // Running intersections only shrink, so nothing left at this level can
      // beat an incumbent that is already as large as the parent.
      if (counts_[depth - 1] <= best_) return;
      if (shared_best_ && counts_[depth - 1] < shared_best_->load(std::memory_order_relaxed)) return;
      const auto& bits = candidates_[i].bits;
      std::size_t cov = 0;
      for (std::size_t w = 0; w < current.size(); ++w) {
        next[w] = current[w] & bits[w];
        cov += static_cast<std::size_t>(std::popcount(next[w]));
      }
      count();
      if (!worth_keeping(cov)) continue;
      chosen_.push_back(i);
      if (depth + 1 == size_) {
        record(cov);
      } else {
        counts_[depth] = cov;
        descend(i + 1, depth + 1);
      }
      chosen_.pop_back();
    }
  }

  const std::vector<Candidate>& candidates_;
  std::size_t size_;
  std::uint64_t budget_;
  std::atomic<std::uint64_t>& evaluated_;
  const std::atomic<std::size_t>* shared_best_;
  std::vector<std::vector<std::uint64_t>> levels_;
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> chosen_;
  std::size_t best_ = 0;
  std::vector<std::size_t> best_indices_;
};

Combination to_combination(const std::vector<Candidate>& candidates, const std::vector<std::size_t>& indices,
                           std::size_t marginal) {
  Combination c;
  for (std::size_t i : indices) c.predicates.push_back(candidates[i].predicate);
  c.marginal = marginal;
  return c;
}

}  // namespace

Combination best_combination(const PredicateIndex& index, const std::vector<char>& marked, std::size_t size,
                             std::uint64_t budget, std::uint64_t* evaluated) {
  auto candidates = unmarked_candidates(index, marked);
  std::atomic<std::uint64_t> counter{0};
  Combination result;
  if (size == 0 || candidates.size() < size) {
    if (evaluated) *evaluated = 0;
    return result;
  }
  Enumerator search(candidates, size, budget, counter, nullptr);
  for (std::size_t first = 0; first + size <= candidates.size(); ++first) {
    // Postings only shrink under intersection, so a first predicate no
    // larger than the incumbent cannot lead anywhere.
    if (candidates[first].count <= search.best()) continue;
    search.run_from(first);
  }
  if (evaluated) *evaluated = counter.load();
  if (search.found()) result = to_combination(candidates, search.best_indices(), search.best());
  return result;
}

Combination best_combination_parallel(const PredicateIndex& index, const std::vector<char>& marked,
                                      std::size_t size, std::uint64_t budget, std::uint64_t* evaluated) {
  auto candidates = unmarked_candidates(index, marked);
  Combination result;
  if (size == 0 || candidates.size() < size) {
    if (evaluated) *evaluated = 0;
    return result;
  }
  std::atomic<std::uint64_t> counter{0};
  std::atomic<std::size_t> shared_best{0};
  const auto roots = static_cast<std::int64_t>(candidates.size() - size + 1);
  std::vector<std::size_t> root_best(static_cast<std::size_t>(roots), 0);
  std::vector<std::vector<std::size_t>> root_indices(static_cast<std::size_t>(roots));
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t first = 0; first < roots; ++first) {
    try {
      if (candidates[static_cast<std::size_t>(first)].count < shared_best.load()) continue;
      Enumerator search(candidates, size, budget, counter, &shared_best);
      search.run_from(static_cast<std::size_t>(first));
      if (search.found()) {
        root_best[static_cast<std::size_t>(first)] = search.best();
        root_indices[static_cast<std::size_t>(first)] = search.best_indices();
        std::size_t seen = shared_best.load();
        while (seen < search.best() && !shared_best.compare_exchange_weak(seen, search.best())) {
        }
      }
    } catch (...) {
#pragma omp critical(proxi_exhaustive_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  // Roots are in lexicographic order, so the first maximum is the least.
  std::size_t winner = root_best.size();
  for (std::size_t r = 0; r < root_best.size(); ++r) {
    if (root_best[r] > 0 && (winner == root_best.size() || root_best[r] > root_best[winner])) winner = r;
  }
  if (evaluated) *evaluated = counter.load();
  if (winner != root_best.size()) result = to_combination(candidates, root_indices[winner], root_best[winner]);
  return result;
}

ExplanationSet exhaustive_baseline(const PredicateIndex& index, std::size_t k, std::size_t l,
                                   const ExhaustiveOptions& options, ExhaustiveStats* stats) {
  if (k == 0 || l == 0) throw ArgumentError("k and l must be at least 1");
  const std::size_t size = std::min(l, index.predicate_count());
  std::vector<char> marked(index.cell_count(), 0);
  std::vector<std::vector<PredicateId>> chosen;
  while (chosen.size() < k) {
    std::uint64_t evaluated = 0;
    Combination best = options.parallel
                           ? best_combination_parallel(index, marked, size, options.combination_budget, &evaluated)
                           : best_combination(index, marked, size, options.combination_budget, &evaluated);
    if (stats) {
      stats->combinations_per_iteration.push_back(evaluated);
      std::size_t candidates = 0;
      for (PredicateId p = 0; p < index.predicate_count(); ++p) {
        auto list = index.postings(p);
        candidates += std::any_of(list.begin(), list.end(), [&](CellId c) { return marked[c] == 0; });
      }
      stats->candidates_per_iteration.push_back(candidates);
    }
    if (best.marginal == 0) break;
    for (CellId c : covered_cells(index, best.predicates)) marked[c] = 1;
    chosen.push_back(std::move(best.predicates));
  }
  return assemble_explanation_set(index, chosen);
}

}  // namespace proxi
