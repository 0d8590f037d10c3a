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

// Social graph and action log ingestion, per-action propagation graphs and
// the influencer slices of the influence cube (followup sets).

#ifndef PROXI_INGESTION_H_
#define PROXI_INGESTION_H_

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "proxi/common.h"

namespace proxi {

// Directed follower graph. An arc u -> v means "v follows u", so influence
// flows from u to v. Arcs are deduplicated and adjacency lists are sorted.
class SocialGraph {
 public:
  SocialGraph() = default;

  // Throws ArgumentError on a self-arc. Duplicate arcs collapse.
  static SocialGraph from_arcs(std::span<const std::pair<UserKey, UserKey>> arcs);

  std::size_t user_count() const { return users_.size(); }
  std::size_t arc_count() const { return arc_count_; }

  std::span<const UserId> followers(UserId u) const { return followers_.at(u); }
  bool has_arc(UserId u, UserId v) const;

  const IdDictionary<UserKey>& users() const { return users_; }
  std::optional<UserId> find_user(UserKey key) const { return users_.find(key); }
  UserKey key(UserId u) const { return users_.key(u); }

  // Registers a user with no arcs. Used by parsers and generators.
  UserId add_user(UserKey key);

 private:
  IdDictionary<UserKey> users_;
  std::vector<std::vector<UserId>> followers_;
  std::size_t arc_count_ = 0;
};

struct ActionRecord {
  UserKey user;
  ActionId action;
  Timestamp time;

  friend bool operator==(const ActionRecord&, const ActionRecord&) = default;
};

// Records sorted by (action, time, user), one record per (user, action).
class ActionLog {
 public:
  struct RawRecord {
    UserKey user;
    std::string action;
    Timestamp time;
  };

  ActionLog() = default;

  // Keeps the earliest timestamp when a (user, action) pair repeats.
  static ActionLog from_records(std::span<const RawRecord> raw);

  const std::vector<ActionRecord>& records() const { return records_; }
  std::size_t action_count() const { return actions_.size(); }
  const IdDictionary<std::string>& actions() const { return actions_; }
  std::optional<ActionId> find_action(const std::string& name) const { return actions_.find(name); }

  // Performers of `a`, ascending by time.
  std::span<const ActionRecord> performers(ActionId a) const;

  // Actions performed by `user`, ascending by ActionId.
  std::span<const ActionId> actions_of(UserKey user) const;

 private:
  IdDictionary<std::string> actions_;
  std::vector<ActionRecord> records_;
  std::vector<std::size_t> offsets_;
  std::vector<UserKey> user_keys_;              // sorted
  std::vector<std::vector<ActionId>> by_user_;  // parallel to user_keys_
};

struct PropagationOptions {
  // Arc u -> v kept only when t_v - t_u <= max_delay. Unset means no limit.
  std::optional<Timestamp> max_delay;
};

// G(a): performers of one action, arcs of the social graph whose endpoint
// timestamps strictly increase. Nodes are stored in time order, which is a
// topological order.
struct PropagationGraph {
  ActionId action = 0;
  std::vector<UserKey> nodes;
  std::vector<Timestamp> times;
  std::vector<std::vector<std::uint32_t>> out;  // indices into nodes

  std::size_t arc_count() const;
};

struct Cell {
  ActionId action;
  UserId follower;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

// The followups of one influencer. Cell ids are positions in `cells`, which is
// sorted by (action, follower).
struct FollowupSet {
  UserId influencer = 0;
  std::vector<ActionId> influencer_actions;  // sorted
  std::vector<Cell> cells;

  std::size_t size() const { return cells.size(); }
  bool empty() const { return cells.empty(); }
};

struct InfluencerCount {
  UserId user;
  std::uint64_t followups;

  friend bool operator==(const InfluencerCount&, const InfluencerCount&) = default;
};

struct HistogramBin {
  std::uint64_t followups;
  std::uint64_t users;

  friend bool operator==(const HistogramBin&, const HistogramBin&) = default;
};

// Aggregate counts over the whole influence cube.
struct CubeMass {
  std::vector<std::uint64_t> by_influencer;  // indexed by UserId
  std::vector<std::uint64_t> by_follower;    // indexed by UserId
  std::vector<std::uint64_t> by_action;      // indexed by ActionId
};

SocialGraph parse_social_graph(std::istream& in, const std::string& source = "<graph>");
ActionLog parse_action_log(std::istream& in, const std::string& source = "<actions>");

// Throws NotFoundError when the action id is out of range.
PropagationGraph build_propagation_graph(const SocialGraph& graph, const ActionLog& log,
                                         ActionId action, const PropagationOptions& options = {});

FollowupSet compute_followup_set(const SocialGraph& graph, const ActionLog& log, UserId influencer,
                                 const PropagationOptions& options = {});

// Parallel over actions. compute_cube_mass_serial is the reference it is
// tested against.
CubeMass compute_cube_mass(const SocialGraph& graph, const ActionLog& log,
                           const PropagationOptions& options = {});
CubeMass compute_cube_mass_serial(const SocialGraph& graph, const ActionLog& log,
                                  const PropagationOptions& options = {});

// Descending by followup count, ties by ascending UserId; users with zero
// followups are omitted.
std::vector<InfluencerCount> rank_influencers(const SocialGraph& graph, const ActionLog& log,
                                              std::size_t top_n,
                                              const PropagationOptions& options = {});

std::vector<HistogramBin> followup_histogram(const SocialGraph& graph, const ActionLog& log,
                                             const PropagationOptions& options = {});

}  // namespace proxi

#endif  // PROXI_INGESTION_H_
