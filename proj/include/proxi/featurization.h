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

// Attribute tables, equi-depth binning and the predicate -> cell inverted
// index built over one followup set.

#ifndef PROXI_FEATURIZATION_H_
#define PROXI_FEATURIZATION_H_

#include <compare>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "proxi/common.h"
#include "proxi/ingestion.h"

namespace proxi {

enum class Dimension { kUser, kAction };

std::string_view to_string(Dimension d);
Dimension dimension_from_string(std::string_view s);  // throws ArgumentError

// Which user a user predicate is evaluated on for a cell (a, v) of
// influencer u: the follower v (default) or the influencer u.
enum class UserPredicateTarget { kFollower, kInfluencer };

struct AttributeValue {
  std::string attribute;
  std::string value;

  friend bool operator==(const AttributeValue&, const AttributeValue&) = default;
};

// entity -> (attribute, value) rows for one dimension. Numeric and declared
// single-valued attributes hold at most one value per entity; every other
// attribute is multi-valued (genre, actor, ...).
class AttributeTable {
 public:
  explicit AttributeTable(Dimension dimension = Dimension::kUser) : dimension_(dimension) {}

  Dimension dimension() const { return dimension_; }

  void declare_numeric(const std::string& attribute);
  void declare_single_valued(const std::string& attribute);
  bool is_numeric(const std::string& attribute) const { return numeric_.count(attribute) > 0; }
  bool is_single_valued(const std::string& attribute) const;
  const std::set<std::string>& numeric_attributes() const { return numeric_; }
  const std::set<std::string>& single_valued_attributes() const { return single_; }

  // Throws ArgumentError on a second value for a single-valued attribute or a
  // non-numeric value for a numeric one. Exact duplicate rows collapse.
  void add(const std::string& entity, const std::string& attribute, const std::string& value);

  const std::map<std::string, std::vector<AttributeValue>>& rows() const { return rows_; }
  const std::vector<AttributeValue>* find(const std::string& entity) const;
  std::size_t entity_count() const { return rows_.size(); }

  // (entity, value) for a numeric attribute, ordered by entity.
  std::vector<std::pair<std::string, double>> numeric_values(const std::string& attribute) const;

 private:
  Dimension dimension_;
  std::set<std::string> numeric_;
  std::set<std::string> single_;
  std::map<std::string, std::vector<AttributeValue>> rows_;
};

// Ascending cut points; bin i holds (boundaries[i-1], boundaries[i]], so a
// value equal to a cut point falls in the lower bin.
struct BinSpec {
  std::string attribute;
  std::vector<double> boundaries;
  std::vector<std::string> labels;

  std::size_t bin_of(double value) const;
  void validate() const;  // throws ArgumentError
  std::size_t bin_count() const { return boundaries.size() + 1; }

  friend bool operator==(const BinSpec&, const BinSpec&) = default;
};

struct FeatureTables {
  AttributeTable users{Dimension::kUser};
  AttributeTable actions{Dimension::kAction};
  std::vector<BinSpec> bins;
};

struct PredicateKey {
  Dimension dimension;
  std::string attribute;
  std::string value;

  friend bool operator==(const PredicateKey&, const PredicateKey&) = default;
  friend auto operator<=>(const PredicateKey&, const PredicateKey&) = default;
};

std::string to_string(const PredicateKey& key);  // "attribute=value"

// Attribute tables compiled against the id dictionaries of a dataset: every
// (dimension, attribute, binned value) gets a global key id in sorted key
// order, and every dense user/action id gets its sorted list of key ids.
class FeatureCatalog {
 public:
  // Throws ArgumentError when a numeric attribute has no BinSpec.
  static FeatureCatalog build(const IdDictionary<UserKey>& users, const IdDictionary<std::string>& actions,
                              const FeatureTables& tables);

  const std::vector<PredicateKey>& keys() const { return keys_; }
  bool single_valued(std::uint32_t key) const { return single_valued_[key] != 0; }
  std::span<const std::uint32_t> user_keys(UserId u) const;
  std::span<const std::uint32_t> action_keys(ActionId a) const;

 private:
  std::vector<PredicateKey> keys_;
  std::vector<char> single_valued_;
  std::vector<std::vector<std::uint32_t>> user_keys_;
  std::vector<std::vector<std::uint32_t>> action_keys_;
};

struct Predicate {
  PredicateKey key;
  bool single_valued = false;
  std::uint32_t catalog_key = kInvalidId;
};

// Inverted index M^p over the cells of one followup set. Postings are sorted
// and duplicate-free; c is in postings(p) iff p is in predicates_of(c).
class PredicateIndex {
 public:
  PredicateIndex() = default;

  // Synthetic catalog: predicate i is named user attribute "p<i>" = "1".
  // Postings are sorted and deduplicated; empty postings are kept.
  static PredicateIndex from_postings(std::size_t cell_count, std::vector<std::vector<CellId>> postings);
  static PredicateIndex from_parts(std::size_t cell_count, std::vector<Predicate> predicates,
                                   std::vector<std::vector<CellId>> postings);

  std::size_t cell_count() const { return cell_count_; }
  std::size_t predicate_count() const { return predicates_.size(); }
  const Predicate& predicate(PredicateId p) const { return predicates_.at(p); }
  const std::vector<Predicate>& predicates() const { return predicates_; }
  std::span<const CellId> postings(PredicateId p) const { return postings_.at(p); }
  std::span<const PredicateId> predicates_of(CellId c) const { return cell_predicates_.at(c); }

 private:
  std::size_t cell_count_ = 0;
  std::vector<Predicate> predicates_;
  std::vector<std::vector<CellId>> postings_;
  std::vector<std::vector<PredicateId>> cell_predicates_;
};

AttributeTable load_attribute_table(std::istream& in, Dimension dimension,
                                    const std::string& source = "<attributes>");

// Minimises the heaviest bin (equal values share a bin) and returns
// nbins - 1 cut points. Entities missing from `weights` weigh 0. Throws
// ArgumentError when nbins is 0, there are no values, or nbins exceeds the
// number of distinct values.
BinSpec bin_numeric_attribute(const std::string& attribute,
                              std::span<const std::pair<std::string, double>> values,
                              const std::unordered_map<std::string, std::uint64_t>& weights,
                              std::size_t nbins);

std::vector<BinSpec> load_bin_specs(std::istream& in, const std::string& source = "<bins>");
void save_bin_specs(std::ostream& out, std::span<const BinSpec> bins);

// Bins every numeric attribute of both tables, weighting users by the
// followups they appear in and actions by their followup count. nbins is
// clamped to the number of distinct values.
std::vector<BinSpec> default_bins(const FeatureTables& tables, const SocialGraph& graph,
                                  const ActionLog& log, const CubeMass& mass, std::size_t nbins);

PredicateIndex build_predicate_index(const FollowupSet& fset, const FeatureCatalog& catalog,
                                     UserPredicateTarget target = UserPredicateTarget::kFollower);
PredicateIndex build_predicate_index(const FollowupSet& fset, const SocialGraph& graph, const ActionLog& log,
                                     const FeatureTables& tables,
                                     UserPredicateTarget target = UserPredicateTarget::kFollower);

// Descending by |M^p|, ties by ascending id.
std::vector<std::pair<PredicateId, std::size_t>> predicate_popularity(const PredicateIndex& index);

}  // namespace proxi

#endif  // PROXI_FEATURIZATION_H_
