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


// Helpers shared by the test binaries: random instances and brute-force
// reference implementations that do not reuse library code paths.

#ifndef PROXI_TESTS_SUPPORT_H_
#define PROXI_TESTS_SUPPORT_H_

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "proxi/featurization.h"
#include "proxi/ingestion.h"
#include "proxi/miner.h"
#include "proxi/report.h"

namespace proxi::testing {

inline SocialGraph graph_from(const std::string& text) {
  std::istringstream in(text);
  return parse_social_graph(in);
}

inline ActionLog log_from(const std::string& text) {
  std::istringstream in(text);
  return parse_action_log(in);
}

// Random postings over `cells` cells. Each predicate gets its own density so
// that coverage values spread out.
inline PredicateIndex random_index(std::mt19937_64& rng, std::size_t cells, std::size_t predicates,
                                   double max_density = 0.6) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<CellId>> postings(predicates);
  for (auto& list : postings) {
    double density = unit(rng) * max_density;
    for (CellId c = 0; c < cells; ++c) {
      if (unit(rng) < density) list.push_back(c);
    }
  }
  return PredicateIndex::from_postings(cells, std::move(postings));
}

// Postings as bool membership, rebuilt from the raw lists.
inline std::vector<std::vector<bool>> membership(const PredicateIndex& index) {
  std::vector<std::vector<bool>> m(index.predicate_count(), std::vector<bool>(index.cell_count(), false));
  for (PredicateId p = 0; p < index.predicate_count(); ++p) {
    for (CellId c : index.postings(p)) m[p][c] = true;
  }
  return m;
}

// Cells satisfying every predicate, by scanning all cells.
inline std::set<CellId> scan_cover(const std::vector<std::vector<bool>>& m, std::size_t cells,
                                   const std::vector<PredicateId>& e) {
  std::set<CellId> out;
  for (CellId c = 0; c < cells; ++c) {
    bool ok = true;
    for (PredicateId p : e) ok = ok && m[p][c];
    if (ok) out.insert(c);
  }
  return out;
}

inline std::size_t scan_union(const std::vector<std::vector<bool>>& m, std::size_t cells,
                              const std::vector<std::vector<PredicateId>>& es) {
  std::set<CellId> all;
  for (const auto& e : es) {
    auto s = scan_cover(m, cells, e);
    all.insert(s.begin(), s.end());
  }
  return all.size();
}

// Per-action reachability by Floyd-Warshall style closure over the arcs of
// G(a), written from the definitions: arc u->v when v follows u and u acted
// strictly earlier. Returns, per influencer key, the set of (action name,
// follower key) followups.
inline std::map<UserKey, std::set<std::pair<std::string, UserKey>>> closure_followups(
    const std::vector<std::pair<UserKey, UserKey>>& arcs,
    const std::vector<std::tuple<UserKey, std::string, Timestamp>>& records) {
  // Earliest time per (user, action).
  std::map<std::pair<std::string, UserKey>, Timestamp> when;
  for (const auto& [u, a, t] : records) {
    auto key = std::make_pair(a, u);
    auto it = when.find(key);
    if (it == when.end() || t < it->second) when[key] = t;
  }
  std::set<std::string> actions;
  for (const auto& [key, t] : when) actions.insert(key.first);
  std::set<std::pair<UserKey, UserKey>> arc_set(arcs.begin(), arcs.end());

  std::map<UserKey, std::set<std::pair<std::string, UserKey>>> out;
  for (const auto& a : actions) {
    std::vector<UserKey> nodes;
    std::vector<Timestamp> times;
    for (const auto& [key, t] : when) {
      if (key.first == a) {
        nodes.push_back(key.second);
        times.push_back(t);
      }
    }
    std::size_t n = nodes.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && arc_set.count({nodes[i], nodes[j]}) && times[i] < times[j]) reach[i][j] = true;
      }
    }
    for (std::size_t m = 0; m < n; ++m) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (reach[i][m] && reach[m][j]) reach[i][j] = true;
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && reach[i][j]) out[nodes[i]].insert({a, nodes[j]});
      }
    }
  }
  return out;
}

struct RandomNetwork {
  std::vector<std::pair<UserKey, UserKey>> arcs;
  std::vector<std::tuple<UserKey, std::string, Timestamp>> records;

  std::string graph_tsv() const {
    std::ostringstream out;
    for (const auto& [u, v] : arcs) out << u << '\t' << v << '\n';
    return out.str();
  }
  std::string actions_tsv() const {
    std::ostringstream out;
    for (const auto& [u, a, t] : records) out << u << '\t' << a << '\t' << t << '\n';
    return out.str();
  }
};

// Users 1..users, actions "a0".."a<n-1>". Small time range so ties occur.
inline RandomNetwork random_network(std::mt19937_64& rng, std::size_t users, std::size_t actions,
                                    double arc_p = 0.1, double act_p = 0.3, Timestamp time_range = 20) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<Timestamp> time(0, time_range);
  RandomNetwork net;
  for (UserKey u = 1; u <= static_cast<UserKey>(users); ++u) {
    for (UserKey v = 1; v <= static_cast<UserKey>(users); ++v) {
      if (u != v && unit(rng) < arc_p) net.arcs.push_back({u, v});
    }
  }
  for (std::size_t a = 0; a < actions; ++a) {
    for (UserKey u = 1; u <= static_cast<UserKey>(users); ++u) {
      if (unit(rng) < act_p) {
        net.records.emplace_back(u, "a" + std::to_string(a), time(rng));
        // Occasional repeat to exercise the earliest-kept rule.
        if (unit(rng) < 0.05) net.records.emplace_back(u, "a" + std::to_string(a), time(rng));
      }
    }
  }
  return net;
}

// Report rows carrying only raw coverage, for indexes without a catalog.
inline std::string set_json(const ExplanationSet& set, const PredicateIndex& index) {
  std::vector<Annotation> annotations;
  for (const auto& e : set.explanations) annotations.push_back({0, 0, e.raw_coverage});
  return report_to_json(make_report(set, index, annotations, 0));
}

}  // namespace proxi::testing

#endif  // PROXI_TESTS_SUPPORT_H_
