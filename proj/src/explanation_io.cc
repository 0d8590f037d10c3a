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

#include <sstream>

#include "json.hpp"
#include "proxi/report.h"

namespace proxi {

ExplanationReport make_report(const ExplanationSet& set, const PredicateIndex& index,
                              std::span<const Annotation> annotations, UserKey influencer) {
  if (annotations.size() != set.explanations.size()) {
    throw ArgumentError("annotation count does not match explanation count");
  }
  ExplanationReport report;
  report.influencer = influencer;
  report.total_followups = set.total_followups;
  report.total_coverage = set.total_coverage;
  report.relative_coverage = set.relative_coverage();
  report.truncated = set.truncated;
  for (std::size_t i = 0; i < set.explanations.size(); ++i) {
    ReportRow row;
    for (PredicateId p : set.explanations[i].predicates) row.predicates.push_back(index.predicate(p).key);
    row.actions = annotations[i].action_count;
    row.followers = annotations[i].follower_count;
    row.followups = annotations[i].followup_count;
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string report_to_json(const ExplanationReport& report) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["influencer"] = report.influencer;
  doc["total_followups"] = report.total_followups;
  ordered_json rows = ordered_json::array();
  for (const auto& row : report.rows) {
    ordered_json predicates = ordered_json::array();
    for (const auto& key : row.predicates) {
      predicates.push_back(
          {{"dimension", std::string(to_string(key.dimension))}, {"attribute", key.attribute}, {"value", key.value}});
    }
    rows.push_back({{"predicates", std::move(predicates)},
                    {"actions", row.actions},
                    {"followers", row.followers},
                    {"followups", row.followups}});
  }
  doc["explanations"] = std::move(rows);
  doc["total_coverage"] = report.total_coverage;
  doc["relative_coverage"] = report.relative_coverage;
  if (report.algorithm) {
    doc["algorithm"] = *report.algorithm;
    doc["seed"] = report.seed ? ordered_json(*report.seed) : ordered_json(nullptr);
    if (report.truncated) doc["truncated"] = true;
  }
  return doc.dump(2) + "\n";
}

ExplanationReport report_from_json(std::istream& in, const std::string& source) {
  try {
    auto doc = nlohmann::json::parse(in);
    ExplanationReport report;
    report.influencer = doc.at("influencer").get<UserKey>();
    report.total_followups = doc.at("total_followups").get<std::size_t>();
    for (const auto& item : doc.at("explanations")) {
      ReportRow row;
      for (const auto& p : item.at("predicates")) {
        row.predicates.push_back({dimension_from_string(p.at("dimension").get<std::string>()),
                                  p.at("attribute").get<std::string>(), p.at("value").get<std::string>()});
      }
      row.actions = item.at("actions").get<std::size_t>();
      row.followers = item.at("followers").get<std::size_t>();
      row.followups = item.at("followups").get<std::size_t>();
      report.rows.push_back(std::move(row));
    }
    report.total_coverage = doc.at("total_coverage").get<std::size_t>();
    report.relative_coverage = doc.at("relative_coverage").get<double>();
    if (doc.contains("algorithm")) {
      report.algorithm = doc.at("algorithm").get<std::string>();
      if (doc.contains("seed") && !doc.at("seed").is_null()) report.seed = doc.at("seed").get<std::uint64_t>();
      report.truncated = doc.value("truncated", false);
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source + ": " + e.what());
  } catch (const ArgumentError& e) {
    throw ParseError(source + ": " + e.what());
  }
}

}  // namespace proxi
