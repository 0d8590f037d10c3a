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

#include "proxi/ingestion.h"

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>

#include "cascade.h"
#include "text_util.h"

namespace proxi {

UserId SocialGraph::add_user(UserKey key) {
  UserId id = users_.intern(key);
  if (followers_.size() < users_.size()) followers_.resize(users_.size());
  return id;
}

SocialGraph SocialGraph::from_arcs(std::span<const std::pair<UserKey, UserKey>> arcs) {
  SocialGraph graph;
  for (const auto& [u, v] : arcs) {
    if (u == v) throw ArgumentError("self-arc on user " + std::to_string(u));
    UserId from = graph.add_user(u);
    UserId to = graph.add_user(v);
    graph.followers_[from].push_back(to);
  }
  for (auto& list : graph.followers_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    graph.arc_count_ += list.size();
  }
  return graph;
}

bool SocialGraph::has_arc(UserId u, UserId v) const {
  if (u >= followers_.size()) return false;
  const auto& list = followers_[u];
  return std::binary_search(list.begin(), list.end(), v);
}

ActionLog ActionLog::from_records(std::span<const RawRecord> raw) {
  ActionLog log;
  std::map<std::pair<UserKey, ActionId>, Timestamp> earliest;
  for (const auto& r : raw) {
    if (r.time < 0) throw ArgumentError("negative timestamp for user " + std::to_string(r.user));
    ActionId a = log.actions_.intern(r.action);
    auto [it, inserted] = earliest.try_emplace({r.user, a}, r.time);
    if (!inserted) it->second = std::min(it->second, r.time);
  }
  log.records_.reserve(earliest.size());
  for (const auto& [key, time] : earliest) log.records_.push_back({key.first, key.second, time});
  std::sort(log.records_.begin(), log.records_.end(), [](const ActionRecord& x, const ActionRecord& y) {
    if (x.action != y.action) return x.action < y.action;
    if (x.time != y.time) return x.time < y.time;
    return x.user < y.user;
  });

  log.offsets_.assign(log.actions_.size() + 1, 0);
  for (const auto& r : log.records_) ++log.offsets_[r.action + 1];
  for (std::size_t a = 0; a < log.actions_.size(); ++a) log.offsets_[a + 1] += log.offsets_[a];

  // `earliest` iterates by (user, action), so per-user lists come out sorted.
  for (const auto& [key, time] : earliest) {
    if (log.user_keys_.empty() || log.user_keys_.back() != key.first) {
      log.user_keys_.push_back(key.first);
      log.by_user_.emplace_back();
    }
    log.by_user_.back().push_back(key.second);
  }
  return log;
}

std::span<const ActionRecord> ActionLog::performers(ActionId a) const {
  if (a >= actions_.size()) throw NotFoundError("unknown action id " + std::to_string(a));
  return std::span<const ActionRecord>(records_).subspan(offsets_[a], offsets_[a + 1] - offsets_[a]);
}

std::span<const ActionId> ActionLog::actions_of(UserKey user) const {
  auto it = std::lower_bound(user_keys_.begin(), user_keys_.end(), user);
  if (it == user_keys_.end() || *it != user) return {};
  return by_user_[static_cast<std::size_t>(it - user_keys_.begin())];
}

std::size_t PropagationGraph::arc_count() const {
  std::size_t n = 0;
  for (const auto& list : out) n += list.size();
  return n;
}

namespace {

template <class Fn>
void for_each_data_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = internal::strip_line_end(line);
    if (view.empty() || view.front() == '#') continue;
    fn(view, line_no);
  }
}

}  // namespace

SocialGraph parse_social_graph(std::istream& in, const std::string& source) {
  std::vector<std::pair<UserKey, UserKey>> arcs;
  for_each_data_line(in, [&](std::string_view line, std::size_t line_no) {
    auto cols = internal::split(line, '\t');
    if (cols.size() != 2) {
      throw ParseError(source, line_no, "expected 2 columns, got " + std::to_string(cols.size()));
    }
    auto u = internal::parse_int64(cols[0]);
    auto v = internal::parse_int64(cols[1]);
    if (!u || !v) throw ParseError(source, line_no, "user ids must be integers");
    if (*u == *v) throw ParseError(source, line_no, "self-arc on user " + std::to_string(*u));
    arcs.emplace_back(*u, *v);
  });
  return SocialGraph::from_arcs(arcs);
}

ActionLog parse_action_log(std::istream& in, const std::string& source) {
  std::vector<ActionLog::RawRecord> raw;
  for_each_data_line(in, [&](std::string_view line, std::size_t line_no) {
    auto cols = internal::split(line, '\t');
    if (cols.size() != 3) {
      throw ParseError(source, line_no, "expected 3 columns, got " + std::to_string(cols.size()));
    }
    auto user = internal::parse_int64(cols[0]);
    if (!user) throw ParseError(source, line_no, "user id must be an integer");
    if (cols[1].empty()) throw ParseError(source, line_no, "empty action id");
    auto time = internal::parse_int64(cols[2]);
    if (!time) throw ParseError(source, line_no, "timestamp must be an integer");
    if (*time < 0) throw ParseError(source, line_no, "negative timestamp");
    raw.push_back({*user, std::string(cols[1]), *time});
  });
  return ActionLog::from_records(raw);
}

namespace internal {

void CascadeBuilder::build(const ActionLog& log, ActionId action, const PropagationOptions& options,
                           LocalCascade& cascade) {
  auto performers = log.performers(action);
  const std::size_t n = performers.size();
  cascade.users.resize(n);
  cascade.times.resize(n);
  cascade.out.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto id = graph_.find_user(performers[i].user);
    cascade.users[i] = id.value_or(kInvalidId);
    cascade.times[i] = performers[i].time;
    cascade.out[i].clear();
    if (id) local_of_[*id] = static_cast<std::uint32_t>(i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    UserId u = cascade.users[i];
    if (u == kInvalidId) continue;
    for (UserId v : graph_.followers(u)) {
      std::uint32_t j = local_of_[v];
      if (j == kInvalidId) continue;
      Timestamp delay = cascade.times[j] - cascade.times[i];
      if (delay <= 0) continue;
      if (options.max_delay && delay > *options.max_delay) continue;
      cascade.out[i].push_back(j);
    }
    std::sort(cascade.out[i].begin(), cascade.out[i].end());
  }
  for (UserId u : cascade.users) {
    if (u != kInvalidId) local_of_[u] = kInvalidId;
  }
}

}  // namespace internal

PropagationGraph build_propagation_graph(const SocialGraph& graph, const ActionLog& log,
                                         ActionId action, const PropagationOptions& options) {
  if (action >= log.action_count()) {
    throw NotFoundError("unknown action id " + std::to_string(action));
  }
  internal::CascadeBuilder builder(graph);
  internal::LocalCascade cascade;
  builder.build(log, action, options, cascade);

  PropagationGraph result;
  result.action = action;
  auto performers = log.performers(action);
  for (const auto& r : performers) {
    result.nodes.push_back(r.user);
    result.times.push_back(r.time);
  }
  result.out = std::move(cascade.out);
  return result;
}

FollowupSet compute_followup_set(const SocialGraph& graph, const ActionLog& log, UserId influencer,
                                 const PropagationOptions& options) {
  FollowupSet fset;
  fset.influencer = influencer;
  if (influencer >= graph.user_count()) return fset;

  auto actions = log.actions_of(graph.key(influencer));
  fset.influencer_actions.assign(actions.begin(), actions.end());

  internal::CascadeBuilder builder(graph);
  internal::LocalCascade cascade;
  std::vector<char> seen;
  std::vector<std::uint32_t> stack;
  std::vector<UserId> reached;
  for (ActionId a : fset.influencer_actions) {
    builder.build(log, a, options, cascade);
    auto source = std::find(cascade.users.begin(), cascade.users.end(), influencer);
    std::uint32_t start = static_cast<std::uint32_t>(source - cascade.users.begin());
    seen.assign(cascade.size(), 0);
    seen[start] = 1;
    stack.assign(1, start);
    reached.clear();
    while (!stack.empty()) {
      std::uint32_t i = stack.back();
      stack.pop_back();
      for (std::uint32_t j : cascade.out[i]) {
        if (seen[j]) continue;
        seen[j] = 1;
        stack.push_back(j);
        reached.push_back(cascade.users[j]);
      }
    }
    std::sort(reached.begin(), reached.end());
    for (UserId v : reached) fset.cells.push_back({a, v});
  }
  return fset;
}

std::vector<InfluencerCount> rank_influencers(const SocialGraph& graph, const ActionLog& log,
                                              std::size_t top_n, const PropagationOptions& options) {
  if (top_n == 0) throw ArgumentError("top_n must be at least 1");
  CubeMass mass = compute_cube_mass(graph, log, options);
  std::vector<InfluencerCount> ranked;
  for (UserId u = 0; u < mass.by_influencer.size(); ++u) {
    if (mass.by_influencer[u] > 0) ranked.push_back({u, mass.by_influencer[u]});
  }
  auto by_count = [](const InfluencerCount& x, const InfluencerCount& y) {
    if (x.followups != y.followups) return x.followups > y.followups;
    return x.user < y.user;
  };
  if (ranked.size() > top_n) {
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(top_n), ranked.end(),
                      by_count);
    ranked.resize(top_n);
  } else {
    std::sort(ranked.begin(), ranked.end(), by_count);
  }
  return ranked;
}

std::vector<HistogramBin> followup_histogram(const SocialGraph& graph, const ActionLog& log,
                                             const PropagationOptions& options) {
  CubeMass mass = compute_cube_mass(graph, log, options);
  std::map<std::uint64_t, std::uint64_t> freq;
  for (std::uint64_t count : mass.by_influencer) {
    if (count > 0) ++freq[count];
  }
  std::vector<HistogramBin> table;
  for (const auto& [count, users] : freq) table.push_back({count, users});
  return table;
}

}  // namespace proxi
