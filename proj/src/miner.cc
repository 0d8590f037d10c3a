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

#include "proxi/miner.h"

#include <algorithm>
#include <set>

namespace proxi {
namespace {

bool lower_priority(const LazyHeapEntry& a, const LazyHeapEntry& b) {
  if (a.cov != b.cov) return a.cov < b.cov;
  return a.predicate > b.predicate;
}

void check_bounds(std::size_t k, std::size_t l) {
  if (k == 0) throw ArgumentError("k must be at least 1");
  if (l == 0) throw ArgumentError("l must be at least 1");
}

void check_predicate(const PredicateIndex& index, PredicateId p) {
  if (p >= index.predicate_count()) throw ArgumentError("unknown predicate id " + std::to_string(p));
}

void finish(ExplanationSet& set, const std::vector<char>& marked) {
  set.marked.clear();
  for (CellId c = 0; c < marked.size(); ++c) {
    if (marked[c]) set.marked.push_back(c);
  }
  set.total_coverage = set.marked.size();
}

}  // namespace

void LazyHeap::push(LazyHeapEntry entry) {
  entries_.push_back(entry);
  std::push_heap(entries_.begin(), entries_.end(), lower_priority);
}

LazyHeapEntry LazyHeap::pop() {
  std::pop_heap(entries_.begin(), entries_.end(), lower_priority);
  LazyHeapEntry entry = entries_.back();
  entries_.pop_back();
  return entry;
}

std::vector<CellId> covered_cells(const PredicateIndex& index, std::span<const PredicateId> predicates) {
  for (PredicateId p : predicates) check_predicate(index, p);
  std::vector<CellId> current;
  if (predicates.empty()) {
    current.resize(index.cell_count());
    for (CellId c = 0; c < current.size(); ++c) current[c] = c;
    return current;
  }
  // Start from the shortest posting list.
  auto shortest = std::min_element(predicates.begin(), predicates.end(), [&](PredicateId a, PredicateId b) {
    return index.postings(a).size() < index.postings(b).size();
  });
  auto first = index.postings(*shortest);
  current.assign(first.begin(), first.end());
  std::vector<CellId> next;
  for (PredicateId p : predicates) {
    if (current.empty()) break;
    auto list = index.postings(p);
    next.clear();
    std::set_intersection(current.begin(), current.end(), list.begin(), list.end(), std::back_inserter(next));
    current.swap(next);
  }
  return current;
}

std::size_t coverage_of_explanation(const PredicateIndex& index, std::span<const PredicateId> predicates) {
  return covered_cells(index, predicates).size();
}

std::size_t coverage_of_set(const PredicateIndex& index, std::span<const std::vector<PredicateId>> explanations) {
  std::vector<char> hit(index.cell_count(), 0);
  std::size_t total = 0;
  for (const auto& e : explanations) {
    for (CellId c : covered_cells(index, e)) {
      if (!hit[c]) {
        hit[c] = 1;
        ++total;
      }
    }
  }
  return total;
}

ExplanationSet assemble_explanation_set(const PredicateIndex& index,
                                        std::span<const std::vector<PredicateId>> explanations) {
  ExplanationSet set;
  set.total_followups = index.cell_count();
  std::vector<char> marked(index.cell_count(), 0);
  for (const auto& predicates : explanations) {
    Explanation e;
    e.predicates = predicates;
    e.covered = covered_cells(index, predicates);
    e.raw_coverage = e.covered.size();
    for (CellId c : e.covered) {
      if (!marked[c]) {
        marked[c] = 1;
        ++e.marginal_coverage;
      }
    }
    set.explanations.push_back(std::move(e));
  }
  finish(set, marked);
  return set;
}

Explanation next_explanation(const PredicateIndex& index, LazyHeap heap, std::size_t l, std::size_t iteration,
                             CellState& cells, MiningStats* stats) {
  const std::size_t base = iteration * l;
  Explanation e;
  while (e.predicates.size() < l && !heap.empty()) {
    LazyHeapEntry entry = heap.pop();
    const std::size_t stamp = base + e.predicates.size();
    if (entry.flag < stamp) {
      // Stale: recount against the cells every predicate of E covers. With E
      // still empty that is every unmarked cell.
      std::size_t cov = 0;
      if (e.predicates.empty()) {
        for (CellId c : index.postings(entry.predicate)) cov += cells.marked[c] == 0;
      } else {
        for (CellId c : index.postings(entry.predicate)) {
          cov += static_cast<std::size_t>((cells.flag[c] == stamp) & (cells.marked[c] == 0));
        }
      }
      entry.cov = cov;
      entry.flag = stamp;
      heap.push(entry);
      if (stats) ++stats->coverage_evaluations;
      continue;
    }
    e.predicates.push_back(entry.predicate);
    const bool first = e.predicates.size() == 1;
    for (CellId c : index.postings(entry.predicate)) {
      if (first) {
        cells.flag[c] = base + 1;
      } else {
        ++cells.flag[c];
      }
    }
  }
  if (e.predicates.empty()) return e;

  // A cell is covered by all of E exactly when its flag reached base + |E|.
  const std::size_t full = base + e.predicates.size();
  for (CellId c : index.postings(e.predicates.back())) {
    if (cells.flag[c] != full) continue;
    e.covered.push_back(c);
    if (!cells.marked[c]) {
      cells.marked[c] = 1;
      ++e.marginal_coverage;
    }
  }
  e.raw_coverage = e.covered.size();
  return e;
}

ExplanationSet mine_explanations(const PredicateIndex& index, std::size_t k, std::size_t l, MiningStats* stats) {
  check_bounds(k, l);
  ExplanationSet set;
  set.total_followups = index.cell_count();
  CellState cells(index.cell_count());
  LazyHeap heap;
  for (PredicateId p = 0; p < index.predicate_count(); ++p) heap.push({p, index.postings(p).size(), 0});

  while (set.explanations.size() < k && !heap.empty()) {
    const std::size_t base = set.explanations.size() * l;
    LazyHeapEntry top = heap.top();
    if (top.flag < base) {
      heap.pop();
      top.cov = 0;
      for (CellId c : index.postings(top.predicate)) top.cov += cells.marked[c] == 0;
      top.flag = base;
      heap.push(top);
      if (stats) ++stats->coverage_evaluations;
      continue;
    }
    if (top.cov == 0) break;
    Explanation e = next_explanation(index, heap, l, set.explanations.size(), cells, stats);
    if (e.marginal_coverage == 0) break;
    set.explanations.push_back(std::move(e));
  }
  finish(set, cells.marked);
  return set;
}

ExplanationSet eager_greedy(const PredicateIndex& index, std::size_t k, std::size_t l, MiningStats* stats) {
  check_bounds(k, l);
  ExplanationSet set;
  set.total_followups = index.cell_count();
  const std::size_t n = index.cell_count();
  std::vector<char> marked(n, 0);
  std::vector<char> active(n, 0);
  std::vector<char> next_active(n, 0);
  std::vector<char> chosen(index.predicate_count(), 0);

  while (set.explanations.size() < k) {
    for (CellId c = 0; c < n; ++c) active[c] = !marked[c];
    std::fill(chosen.begin(), chosen.end(), 0);
    Explanation e;
    while (e.predicates.size() < l) {
      PredicateId best = kInvalidId;
      std::size_t best_cov = 0;
      for (PredicateId p = 0; p < index.predicate_count(); ++p) {
        if (chosen[p]) continue;
        std::size_t cov = 0;
        for (CellId c : index.postings(p)) cov += active[c] ? 1 : 0;
        if (stats) ++stats->coverage_evaluations;
        if (best == kInvalidId || cov > best_cov) {
          best = p;
          best_cov = cov;
        }
      }
      if (best == kInvalidId) break;
      chosen[best] = 1;
      e.predicates.push_back(best);
      std::fill(next_active.begin(), next_active.end(), 0);
      for (CellId c : index.postings(best)) next_active[c] = active[c];
      active.swap(next_active);
    }
    if (e.predicates.empty()) break;
    e.covered = covered_cells(index, e.predicates);
    e.raw_coverage = e.covered.size();
    for (CellId c = 0; c < n; ++c) e.marginal_coverage += active[c] ? 1 : 0;
    if (e.marginal_coverage == 0) break;
    for (CellId c = 0; c < n; ++c) {
      if (active[c]) marked[c] = 1;
    }
    set.explanations.push_back(std::move(e));
  }
  finish(set, marked);
  return set;
}

Annotation annotate(const Explanation& explanation, const PredicateIndex& index, const FollowupSet& fset,
                    const FeatureCatalog& catalog, UserPredicateTarget target) {
  std::vector<std::uint32_t> action_keys, user_keys;
  for (PredicateId p : explanation.predicates) {
    const Predicate& pred = index.predicate(p);
    if (pred.catalog_key == kInvalidId) {
      throw ArgumentError("predicate " + std::to_string(p) + " is not backed by a feature catalog");
    }
    (pred.key.dimension == Dimension::kAction ? action_keys : user_keys).push_back(pred.catalog_key);
  }
  auto has_all = [](std::span<const std::uint32_t> have, const std::vector<std::uint32_t>& want) {
    return std::all_of(want.begin(), want.end(),
                       [&](std::uint32_t key) { return std::binary_search(have.begin(), have.end(), key); });
  };

  Annotation a;
  a.followup_count = explanation.raw_coverage;
  for (ActionId act : fset.influencer_actions) {
    if (has_all(catalog.action_keys(act), action_keys)) ++a.action_count;
  }
  std::set<UserId> followers;
  for (const Cell& cell : fset.cells) followers.insert(cell.follower);
  if (target == UserPredicateTarget::kInfluencer) {
    a.follower_count = has_all(catalog.user_keys(fset.influencer), user_keys) ? followers.size() : 0;
  } else {
    for (UserId v : followers) {
      if (has_all(catalog.user_keys(v), user_keys)) ++a.follower_count;
    }
  }
  return a;
}

}  // namespace proxi
