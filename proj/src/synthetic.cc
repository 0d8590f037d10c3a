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

#include "proxi/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "proxi/common.h"

namespace proxi {
namespace {

std::discrete_distribution<std::size_t> zipf(std::size_t n, double exponent) {
  std::vector<double> w(n);
  for (std::size_t r = 0; r < n; ++r) w[r] = 1.0 / std::pow(static_cast<double>(r + 1), exponent);
  return std::discrete_distribution<std::size_t>(w.begin(), w.end());
}

struct User {
  std::string gender;  // empty when unknown
  int age = 0;
  std::size_t country = 0;
  std::size_t segment = 0;
};

struct Action {
  std::vector<std::size_t> genres;
  std::size_t maturity = 0;
  std::size_t language = 0;
  std::size_t director = 0;
  std::size_t studio = 0;
  int year = 0;
  double rating = 0;
};

const char* const kMaturity[] = {"PG-13", "R", "PG", "G", "NR", "NC-17", "TV-MA", "TV-14"};

}  // namespace

SyntheticDataset generate_synthetic(const SyntheticConfig& config) {
  if (config.users < 2) throw ArgumentError("synthetic dataset needs at least 2 users");
  if (config.genres < 4 || config.languages < 1 || config.countries < 1 || config.directors < 1 ||
      config.studios < 1 || config.maturity_ratings < 1 || config.max_delay < 1) {
    throw ArgumentError("synthetic attribute cardinalities are too small");
  }
  const std::size_t maturity_count = std::min<std::size_t>(config.maturity_ratings, std::size(kMaturity));
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Popularity rank of each user is a random permutation of ids.
  std::vector<std::size_t> by_rank(config.users);
  std::iota(by_rank.begin(), by_rank.end(), std::size_t{0});
  std::shuffle(by_rank.begin(), by_rank.end(), rng);
  auto popular = zipf(config.users, config.popularity_exponent);

  std::vector<std::vector<std::size_t>> followers(config.users);
  const std::size_t follows = std::min(config.follows_per_user, config.users - 1);
  for (std::size_t v = 0; v < config.users; ++v) {
    std::set<std::size_t> chosen;
    for (std::size_t attempt = 0; chosen.size() < follows && attempt < follows * 20; ++attempt) {
      std::size_t u = by_rank[popular(rng)];
      if (u != v) chosen.insert(u);
    }
    for (std::size_t u : chosen) followers[u].push_back(v);
  }

  // Taste segments: (gender, under 30). Each segment likes three genres and
  // one language.
  std::vector<std::size_t> genre_perm(config.genres);
  std::iota(genre_perm.begin(), genre_perm.end(), std::size_t{0});
  std::shuffle(genre_perm.begin(), genre_perm.end(), rng);
  std::vector<std::set<std::size_t>> liked_genres(4);
  std::vector<std::size_t> liked_language(4);
  for (std::size_t s = 0; s < 4; ++s) {
    for (std::size_t j = 0; j < 3; ++j) liked_genres[s].insert(genre_perm[(s * 3 + j) % config.genres]);
    liked_language[s] = s % config.languages;
  }

  auto country_dist = zipf(config.countries, 1.0);
  std::vector<User> users(config.users);
  for (auto& user : users) {
    double g = unit(rng);
    user.gender = g < 0.02 ? "" : (g < 0.65 ? "female" : "male");
    double a = unit(rng);
    if (a < 0.4) {
      user.age = std::uniform_int_distribution<int>(13, 24)(rng);
    } else if (a < 0.75) {
      user.age = std::uniform_int_distribution<int>(25, 39)(rng);
    } else {
      user.age = std::uniform_int_distribution<int>(40, 70)(rng);
    }
    user.country = country_dist(rng);
    user.segment = (user.gender == "male" ? 2 : 0) + (user.age < 30 ? 0 : 1);
  }

  auto genre_dist = zipf(config.genres, 0.7);
  auto maturity_dist = zipf(maturity_count, 1.0);
  auto language_dist = zipf(config.languages, 1.2);
  auto studio_dist = zipf(config.studios, 0.8);
  std::uniform_int_distribution<std::size_t> director_dist(0, config.directors - 1);
  std::exponential_distribution<double> age_of_movie(0.1);
  std::normal_distribution<double> rating_dist(6.5, 1.5);
  std::vector<Action> actions(config.actions);
  for (auto& act : actions) {
    std::size_t n_genres = 1 + std::uniform_int_distribution<std::size_t>(0, 2)(rng);
    std::set<std::size_t> genres;
    for (std::size_t i = 0; i < n_genres; ++i) genres.insert(genre_dist(rng));
    act.genres.assign(genres.begin(), genres.end());
    act.maturity = maturity_dist(rng);
    act.language = language_dist(rng);
    act.director = director_dist(rng);
    act.studio = studio_dist(rng);
    act.year = 2012 - std::min(42, static_cast<int>(age_of_movie(rng)));
    act.rating = std::clamp(std::round(rating_dist(rng) * 10.0) / 10.0, 1.0, 10.0);
  }

  std::ostringstream log;
  log << "# proxi synthetic v" << kSyntheticVersion << " seed=" << config.seed << "\n";
  std::uniform_real_distribution<double> start_time(0.0, 1e6);
  std::uniform_int_distribution<std::size_t> delay(1, config.max_delay);
  std::uniform_int_distribution<std::size_t> any_user(0, config.users - 1);
  for (std::size_t a = 0; a < config.actions; ++a) {
    const Action& act = actions[a];
    std::unordered_map<std::size_t, Timestamp> adopted;
    using Event = std::pair<Timestamp, std::size_t>;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;
    std::size_t initiator = by_rank[popular(rng)];
    Timestamp t0 = static_cast<Timestamp>(start_time(rng));
    adopted[initiator] = t0;
    queue.push({t0, initiator});
    while (!queue.empty()) {
      auto [t, u] = queue.top();
      queue.pop();
      for (std::size_t v : followers[u]) {
        if (adopted.count(v)) continue;
        const User& f = users[v];
        bool genre_match = std::any_of(act.genres.begin(), act.genres.end(),
                                       [&](std::size_t g) { return liked_genres[f.segment].count(g) > 0; });
        double p = config.base_adoption;
        if (genre_match) p *= config.taste_boost;
        if (act.language == liked_language[f.segment]) p *= 1.5;
        if (unit(rng) < std::min(p, 0.9)) {
          Timestamp tv = t + static_cast<Timestamp>(delay(rng));
          adopted[v] = tv;
          queue.push({tv, v});
        }
      }
    }
    for (std::size_t i = 0; i < config.spontaneous_performers; ++i) {
      std::size_t v = any_user(rng);
      if (!adopted.count(v)) {
        adopted[v] = t0 + static_cast<Timestamp>(delay(rng) * 5);
      }
    }
    std::vector<Event> rows;
    for (const auto& [v, t] : adopted) rows.push_back({t, v});
    std::sort(rows.begin(), rows.end());
    for (const auto& [t, v] : rows) log << (v + 1) << "\ta" << a << "\t" << t << "\n";
  }

  SyntheticDataset data;
  std::ostringstream graph;
  graph << "# proxi synthetic v" << kSyntheticVersion << " seed=" << config.seed << "\n";
  for (std::size_t u = 0; u < config.users; ++u) {
    auto list = followers[u];
    std::sort(list.begin(), list.end());
    for (std::size_t v : list) graph << (u + 1) << "\t" << (v + 1) << "\n";
  }
  data.graph_tsv = graph.str();
  data.actions_tsv = log.str();

  std::ostringstream ua;
  ua << "# proxi synthetic v" << kSyntheticVersion << " seed=" << config.seed << "\n";
  ua << "#numeric: age\n#single: gender,country\n";
  for (std::size_t v = 0; v < config.users; ++v) {
    const User& user = users[v];
    if (!user.gender.empty()) ua << (v + 1) << "\tgender\t" << user.gender << "\n";
    ua << (v + 1) << "\tage\t" << user.age << "\n";
    ua << (v + 1) << "\tcountry\tcountry_" << user.country << "\n";
  }
  data.user_attrs_tsv = ua.str();

  std::ostringstream aa;
  aa << "# proxi synthetic v" << kSyntheticVersion << " seed=" << config.seed << "\n";
  aa << "#numeric: year,rating\n#single: maturity,language,director,studio\n";
  for (std::size_t a = 0; a < config.actions; ++a) {
    const Action& act = actions[a];
    for (std::size_t g : act.genres) aa << 'a' << a << "\tgenre\tgenre_" << g << "\n";
    aa << 'a' << a << "\tmaturity\t" << kMaturity[act.maturity] << "\n";
    aa << 'a' << a << "\tlanguage\tlang_" << act.language << "\n";
    aa << 'a' << a << "\tdirector\tdirector_" << act.director << "\n";
    aa << 'a' << a << "\tstudio\tstudio_" << act.studio << "\n";
    aa << 'a' << a << "\tyear\t" << act.year << "\n";
    char rating[16];
    std::snprintf(rating, sizeof rating, "%.1f", act.rating);
    aa << 'a' << a << "\trating\t" << rating << "\n";
  }
  data.action_attrs_tsv = aa.str();
  return data;
}

void write_synthetic(const SyntheticDataset& data, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const char* name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error("cannot write " + (dir / name).string());
    out << text;
  };
  write("graph.tsv", data.graph_tsv);
  write("actions.tsv", data.actions_tsv);
  write("users.attrs.tsv", data.user_attrs_tsv);
  write("actions.attrs.tsv", data.action_attrs_tsv);
}

}  // namespace proxi
