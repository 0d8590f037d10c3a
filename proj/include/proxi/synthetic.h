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

// Seeded synthetic datasets: a preferential-attachment follower graph,
// attribute-driven cascades and planted demographic tastes, written in the
// same TSV formats the parsers read.

#ifndef PROXI_SYNTHETIC_H_
#define PROXI_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

namespace proxi {

inline constexpr int kSyntheticVersion = 1;

struct SyntheticConfig {
  std::size_t users = 5000;
  std::size_t actions = 2000;
  std::size_t follows_per_user = 8;
  double popularity_exponent = 0.9;  // Zipf exponent for being followed and initiating
  double base_adoption = 0.03;
  double taste_boost = 5.0;          // multiplier when an action matches the follower's taste
  std::size_t spontaneous_performers = 3;
  std::size_t max_delay = 50;
  // Attribute cardinalities.
  std::size_t countries = 8;
  std::size_t genres = 20;
  std::size_t maturity_ratings = 6;
  std::size_t languages = 10;
  std::size_t directors = 30;
  std::size_t studios = 15;
  std::uint64_t seed = 1;
};

struct SyntheticDataset {
  std::string graph_tsv;
  std::string actions_tsv;
  std::string user_attrs_tsv;
  std::string action_attrs_tsv;
};

SyntheticDataset generate_synthetic(const SyntheticConfig& config);

// Writes graph.tsv, actions.tsv, users.attrs.tsv and actions.attrs.tsv.
void write_synthetic(const SyntheticDataset& data, const std::filesystem::path& dir);

}  // namespace proxi

#endif  // PROXI_SYNTHETIC_H_
