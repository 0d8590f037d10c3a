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

#include "proxi/featurization.h"

#include <algorithm>
#include <map>
#include <sstream>

#include "text_util.h"

namespace proxi {

std::string_view to_string(Dimension d) { return d == Dimension::kUser ? "user" : "action"; }

Dimension dimension_from_string(std::string_view s) {
  if (s == "user") return Dimension::kUser;
  if (s == "action") return Dimension::kAction;
  throw ArgumentError("unknown dimension '" + std::string(s) + "'");
}

std::string to_string(const PredicateKey& key) { return key.attribute + "=" + key.value; }

void AttributeTable::declare_numeric(const std::string& attribute) {
  numeric_.insert(attribute);
  single_.insert(attribute);
}

void AttributeTable::declare_single_valued(const std::string& attribute) { single_.insert(attribute); }

bool AttributeTable::is_single_valued(const std::string& attribute) const {
  return single_.count(attribute) > 0;
}

void AttributeTable::add(const std::string& entity, const std::string& attribute, const std::string& value) {
  if (entity.empty() || attribute.empty()) throw ArgumentError("empty entity or attribute name");
  if (is_numeric(attribute) && !internal::parse_double(value)) {
    throw ArgumentError("attribute '" + attribute + "' is numeric but value '" + value + "' is not");
  }
  auto& row = rows_[entity];
  for (const auto& existing : row) {
    if (existing.attribute != attribute) continue;
    if (existing.value == value) return;
    if (is_single_valued(attribute)) {
      throw ArgumentError("entity '" + entity + "' has more than one value for single-valued attribute '" +
                          attribute + "'");
    }
  }
  row.push_back({attribute, value});
}

const std::vector<AttributeValue>* AttributeTable::find(const std::string& entity) const {
  auto it = rows_.find(entity);
  return it == rows_.end() ? nullptr : &it->second;
}

std::vector<std::pair<std::string, double>> AttributeTable::numeric_values(const std::string& attribute) const {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& [entity, row] : rows_) {
    for (const auto& av : row) {
      if (av.attribute == attribute) out.emplace_back(entity, *internal::parse_double(av.value));
    }
  }
  return out;
}

namespace {

std::vector<std::string> parse_name_list(std::string_view list) {
  std::vector<std::string> names;
  for (auto part : internal::split(list, ',')) {
    auto name = internal::trim(part);
    if (!name.empty()) names.emplace_back(name);
  }
  return names;
}

}  // namespace

AttributeTable load_attribute_table(std::istream& in, Dimension dimension, const std::string& source) {
  AttributeTable table(dimension);
  struct Row {
    std::size_t line;
    std::string entity, attribute, value;
  };
  std::vector<Row> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = internal::strip_line_end(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      view.remove_prefix(1);
      view = internal::trim(view);
      if (view.starts_with("numeric:")) {
        for (auto& name : parse_name_list(view.substr(8))) table.declare_numeric(name);
      } else if (view.starts_with("single:")) {
        for (auto& name : parse_name_list(view.substr(7))) table.declare_single_valued(name);
      }
      continue;
    }
    auto cols = internal::split(view, '\t');
    if (cols.size() != 3) {
      throw ParseError(source, line_no, "expected 3 columns, got " + std::to_string(cols.size()));
    }
    rows.push_back({line_no, std::string(cols[0]), std::string(cols[1]), std::string(cols[2])});
  }
  // Declarations may appear anywhere in the header, so rows are validated
  // only after the whole stream has been read.
  for (const auto& row : rows) {
    try {
      table.add(row.entity, row.attribute, row.value);
    } catch (const ArgumentError& e) {
      throw ParseError(source, row.line, e.what());
    }
  }
  return table;
}

FeatureCatalog FeatureCatalog::build(const IdDictionary<UserKey>& users, const IdDictionary<std::string>& actions,
                                     const FeatureTables& tables) {
  std::map<std::pair<Dimension, std::string>, const BinSpec*> bins;
  for (const auto& spec : tables.bins) {
    spec.validate();
    for (Dimension d : {Dimension::kUser, Dimension::kAction}) bins.try_emplace({d, spec.attribute}, &spec);
  }
  for (const auto* table : {&tables.users, &tables.actions}) {
    for (const auto& attribute : table->numeric_attributes()) {
      if (!bins.count({table->dimension(), attribute})) {
        throw ArgumentError("numeric attribute '" + attribute + "' has no bin spec");
      }
    }
  }

  // First pass: (entity id, key) pairs with keys as values.
  std::map<PredicateKey, std::uint32_t> key_ids;
  std::vector<std::pair<std::uint32_t, PredicateKey>> user_pairs, action_pairs;
  auto collect = [&](const AttributeTable& table, auto&& resolve,
                     std::vector<std::pair<std::uint32_t, PredicateKey>>& pairs) {
    for (const auto& [entity, row] : table.rows()) {
      auto id = resolve(entity);
      if (!id) continue;
      for (const auto& av : row) {
        PredicateKey key{table.dimension(), av.attribute, av.value};
        if (table.is_numeric(av.attribute)) {
          const BinSpec& spec = *bins.at({table.dimension(), av.attribute});
          key.value = spec.labels[spec.bin_of(*internal::parse_double(av.value))];
        }
        key_ids.try_emplace(key, 0);
        pairs.emplace_back(*id, std::move(key));
      }
    }
  };
  collect(
      tables.users,
      [&](const std::string& entity) -> std::optional<std::uint32_t> {
        auto key = internal::parse_int64(entity);
        if (!key) return std::nullopt;
        return users.find(*key);
      },
      user_pairs);
  collect(
      tables.actions, [&](const std::string& entity) { return actions.find(entity); }, action_pairs);

  FeatureCatalog catalog;
  for (auto& [key, id] : key_ids) {
    id = static_cast<std::uint32_t>(catalog.keys_.size());
    catalog.keys_.push_back(key);
    const AttributeTable& table = key.dimension == Dimension::kUser ? tables.users : tables.actions;
    catalog.single_valued_.push_back(table.is_single_valued(key.attribute) ? 1 : 0);
  }
  auto assign = [&](const std::vector<std::pair<std::uint32_t, PredicateKey>>& pairs, std::size_t n,
                    std::vector<std::vector<std::uint32_t>>& lists) {
    lists.assign(n, {});
    for (const auto& [id, key] : pairs) lists[id].push_back(key_ids.at(key));
    for (auto& list : lists) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
    }
  };
  assign(user_pairs, users.size(), catalog.user_keys_);
  assign(action_pairs, actions.size(), catalog.action_keys_);
  return catalog;
}

std::span<const std::uint32_t> FeatureCatalog::user_keys(UserId u) const {
  if (u >= user_keys_.size()) return {};
  return user_keys_[u];
}

std::span<const std::uint32_t> FeatureCatalog::action_keys(ActionId a) const {
  if (a >= action_keys_.size()) return {};
  return action_keys_[a];
}

PredicateIndex PredicateIndex::from_parts(std::size_t cell_count, std::vector<Predicate> predicates,
                                          std::vector<std::vector<CellId>> postings) {
  if (predicates.size() != postings.size()) throw ArgumentError("predicate and posting counts differ");
  PredicateIndex index;
  index.cell_count_ = cell_count;
  index.predicates_ = std::move(predicates);
  index.postings_ = std::move(postings);
  index.cell_predicates_.assign(cell_count, {});
  for (PredicateId p = 0; p < index.postings_.size(); ++p) {
    auto& list = index.postings_[p];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    for (CellId c : list) {
      if (c >= cell_count) throw ArgumentError("posting refers to cell " + std::to_string(c) + " out of range");
      index.cell_predicates_[c].push_back(p);
    }
  }
  return index;
}

PredicateIndex PredicateIndex::from_postings(std::size_t cell_count, std::vector<std::vector<CellId>> postings) {
  std::vector<Predicate> predicates;
  for (std::size_t i = 0; i < postings.size(); ++i) {
    predicates.push_back({PredicateKey{Dimension::kUser, "p" + std::to_string(i), "1"}, false, kInvalidId});
  }
  return from_parts(cell_count, std::move(predicates), std::move(postings));
}

PredicateIndex build_predicate_index(const FollowupSet& fset, const FeatureCatalog& catalog,
                                     UserPredicateTarget target) {
  const std::size_t key_count = catalog.keys().size();
  std::vector<std::vector<CellId>> by_key(key_count);
  for (CellId c = 0; c < fset.cells.size(); ++c) {
    const Cell& cell = fset.cells[c];
    for (std::uint32_t key : catalog.action_keys(cell.action)) by_key[key].push_back(c);
    UserId who = target == UserPredicateTarget::kFollower ? cell.follower : fset.influencer;
    for (std::uint32_t key : catalog.user_keys(who)) by_key[key].push_back(c);
  }

  std::vector<Predicate> predicates;
  std::vector<std::vector<CellId>> postings;
  for (std::uint32_t key = 0; key < key_count; ++key) {
    if (by_key[key].empty()) continue;
    predicates.push_back({catalog.keys()[key], catalog.single_valued(key), key});
    postings.push_back(std::move(by_key[key]));
  }
  return PredicateIndex::from_parts(fset.size(), std::move(predicates), std::move(postings));
}

PredicateIndex build_predicate_index(const FollowupSet& fset, const SocialGraph& graph, const ActionLog& log,
                                     const FeatureTables& tables, UserPredicateTarget target) {
  auto catalog = FeatureCatalog::build(graph.users(), log.actions(), tables);
  return build_predicate_index(fset, catalog, target);
}

std::vector<std::pair<PredicateId, std::size_t>> predicate_popularity(const PredicateIndex& index) {
  std::vector<std::pair<PredicateId, std::size_t>> ranked;
  for (PredicateId p = 0; p < index.predicate_count(); ++p) ranked.emplace_back(p, index.postings(p).size());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) { return x.second > y.second; });
  return ranked;
}

}  // namespace proxi
