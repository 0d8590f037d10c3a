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
#include <map>
#include <numeric>

#include "json.hpp"
#include "proxi/featurization.h"
#include "text_util.h"

namespace proxi {
namespace {

// Number of bins a left-to-right pack with capacity `cap` needs.
std::size_t pack_count(std::span<const std::uint64_t> weights, std::uint64_t cap) {
  std::size_t bins = 1;
  std::uint64_t load = 0;
  for (std::uint64_t w : weights) {
    if (load + w > cap && load > 0) {
      ++bins;
      load = 0;
    }
    load += w;
  }
  return bins;
}

}  // namespace

std::size_t BinSpec::bin_of(double value) const {
  return static_cast<std::size_t>(std::lower_bound(boundaries.begin(), boundaries.end(), value) -
                                  boundaries.begin());
}

void BinSpec::validate() const {
  if (attribute.empty()) throw ArgumentError("bin spec without attribute name");
  for (std::size_t i = 1; i < boundaries.size(); ++i) {
    if (!(boundaries[i - 1] < boundaries[i])) {
      throw ArgumentError("bin boundaries for '" + attribute + "' are not strictly increasing");
    }
  }
  if (labels.size() != boundaries.size() + 1) {
    throw ArgumentError("bin spec for '" + attribute + "' needs " + std::to_string(boundaries.size() + 1) +
                        " labels, has " + std::to_string(labels.size()));
  }
}

BinSpec bin_numeric_attribute(const std::string& attribute,
                              std::span<const std::pair<std::string, double>> values,
                              const std::unordered_map<std::string, std::uint64_t>& weights,
                              std::size_t nbins) {
  if (nbins == 0) throw ArgumentError("nbins must be at least 1");
  if (values.empty()) throw ArgumentError("no values to bin for '" + attribute + "'");

  std::map<double, std::uint64_t> mass;
  for (const auto& [entity, value] : values) {
    auto it = weights.find(entity);
    mass[value] += it == weights.end() ? 0 : it->second;
  }
  if (nbins > mass.size()) {
    throw ArgumentError("cannot split " + std::to_string(mass.size()) + " distinct values of '" + attribute +
                        "' into " + std::to_string(nbins) + " bins");
  }

  std::vector<double> distinct;
  std::vector<std::uint64_t> w;
  for (const auto& [value, m] : mass) {
    distinct.push_back(value);
    w.push_back(m);
  }

  // Smallest capacity whose greedy pack fits in nbins bins; this is the
  // minimax bin weight because greedy packing is optimal for a fixed order.
  std::uint64_t lo = *std::max_element(w.begin(), w.end());
  std::uint64_t hi = std::accumulate(w.begin(), w.end(), std::uint64_t{0});
  while (lo < hi) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (pack_count(w, mid) <= nbins) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  const std::uint64_t cap = lo;

  // Greedy pack again, but close a bin early once the remaining values are
  // only just enough to give every remaining bin one value.
  BinSpec spec;
  spec.attribute = attribute;
  std::size_t bins_left = nbins;
  std::uint64_t load = 0;
  bool open = false;
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    if (open && (load + w[i] > cap || distinct.size() - i == bins_left - 1)) {
      spec.boundaries.push_back(distinct[i - 1]);
      --bins_left;
      load = 0;
    }
    load += w[i];
    open = true;
  }

  for (std::size_t b = 0; b <= spec.boundaries.size(); ++b) {
    double from = b == 0 ? distinct.front() : spec.boundaries[b - 1];
    double to = b == spec.boundaries.size() ? distinct.back() : spec.boundaries[b];
    std::string label = internal::format_number(from);
    if (to != from) label += "-" + internal::format_number(to);
    spec.labels.push_back(std::move(label));
  }
  return spec;
}

std::vector<BinSpec> load_bin_specs(std::istream& in, const std::string& source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source + ": " + e.what());
  }
  if (!doc.is_array()) throw ParseError(source + ": expected a JSON array of bin specs");
  std::vector<BinSpec> bins;
  for (const auto& item : doc) {
    try {
      BinSpec spec;
      spec.attribute = item.at("attribute").get<std::string>();
      spec.boundaries = item.at("boundaries").get<std::vector<double>>();
      spec.labels = item.at("labels").get<std::vector<std::string>>();
      spec.validate();
      bins.push_back(std::move(spec));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(source + ": " + e.what());
    } catch (const ArgumentError& e) {
      throw ParseError(source + ": " + e.what());
    }
  }
  return bins;
}

void save_bin_specs(std::ostream& out, std::span<const BinSpec> bins) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& spec : bins) {
    doc.push_back({{"attribute", spec.attribute}, {"boundaries", spec.boundaries}, {"labels", spec.labels}});
  }
  out << doc.dump(2) << '\n';
}

std::vector<BinSpec> default_bins(const FeatureTables& tables, const SocialGraph& graph,
                                  const ActionLog& log, const CubeMass& mass, std::size_t nbins) {
  std::vector<BinSpec> bins;
  auto bin_table = [&](const AttributeTable& table, const std::unordered_map<std::string, std::uint64_t>& weights) {
    for (const auto& attribute : table.numeric_attributes()) {
      auto values = table.numeric_values(attribute);
      if (values.empty()) continue;
      std::set<double> distinct;
      for (const auto& v : values) distinct.insert(v.second);
      bins.push_back(bin_numeric_attribute(attribute, values, weights, std::min(nbins, distinct.size())));
    }
  };

  std::unordered_map<std::string, std::uint64_t> user_weights;
  for (UserId u = 0; u < graph.user_count(); ++u) {
    if (mass.by_follower[u] > 0) user_weights[std::to_string(graph.key(u))] = mass.by_follower[u];
  }
  bin_table(tables.users, user_weights);

  std::unordered_map<std::string, std::uint64_t> action_weights;
  for (ActionId a = 0; a < log.action_count(); ++a) {
    if (mass.by_action[a] > 0) action_weights[log.actions().key(a)] = mass.by_action[a];
  }
  bin_table(tables.actions, action_weights);
  return bins;
}

}  // namespace proxi
