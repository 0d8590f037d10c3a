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

// ExplanationSet JSON documents and text tables.

#ifndef PROXI_REPORT_H_
#define PROXI_REPORT_H_

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "proxi/featurization.h"
#include "proxi/miner.h"

namespace proxi {

struct ReportRow {
  std::vector<PredicateKey> predicates;
  std::size_t actions = 0;
  std::size_t followers = 0;
  std::size_t followups = 0;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

// A mined explanation set with its annotations, detached from the index.
struct ExplanationReport {
  UserKey influencer = 0;
  std::size_t total_followups = 0;
  std::vector<ReportRow> rows;
  std::size_t total_coverage = 0;
  double relative_coverage = 0.0;
  // Present for baseline runs only.
  std::optional<std::string> algorithm;
  std::optional<std::uint64_t> seed;
  bool truncated = false;

  friend bool operator==(const ExplanationReport&, const ExplanationReport&) = default;
};

// `annotations` must be parallel to set.explanations.
ExplanationReport make_report(const ExplanationSet& set, const PredicateIndex& index,
                              std::span<const Annotation> annotations, UserKey influencer);

std::string report_to_json(const ExplanationReport& report);
ExplanationReport report_from_json(std::istream& in, const std::string& source = "<report>");

// One row per explanation with Actions/Followers/Followups columns and a
// "Total Coverage" footer. Each row's predicates are reordered to share the
// longest prefix with the row above; the shared part is left blank.
// `display_names` renames attributes.
std::string render_table(const ExplanationReport& report,
                         const std::map<std::string, std::string>& display_names = {});

// Predicate order used by render_table, and how many leading predicates of
// each row repeat the row above.
struct RowLayout {
  std::vector<std::vector<PredicateKey>> ordered;
  std::vector<std::size_t> shared_prefix;
};
RowLayout group_rows(std::span<const ReportRow> rows);

}  // namespace proxi

#endif  // PROXI_REPORT_H_
