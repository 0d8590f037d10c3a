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
#include <cstdio>
#include <sstream>

#include "proxi/report.h"

namespace proxi {

RowLayout group_rows(std::span<const ReportRow> rows) {
  RowLayout layout;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& preds = rows[i].predicates;
    if (i == 0) {
      layout.ordered.push_back(preds);
      layout.shared_prefix.push_back(0);
      continue;
    }
    const auto& prev = layout.ordered.back();
    std::vector<PredicateKey> ordered;
    std::vector<char> used(preds.size(), 0);
    for (const auto& key : prev) {
      auto it = std::find(preds.begin(), preds.end(), key);
      if (it == preds.end()) break;
      used[static_cast<std::size_t>(it - preds.begin())] = 1;
      ordered.push_back(key);
    }
    std::size_t shared = ordered.size();
    for (std::size_t j = 0; j < preds.size(); ++j) {
      if (!used[j]) ordered.push_back(preds[j]);
    }
    layout.ordered.push_back(std::move(ordered));
    layout.shared_prefix.push_back(shared);
  }
  return layout;
}

std::string render_table(const ExplanationReport& report, const std::map<std::string, std::string>& display_names) {
  auto display = [&](const PredicateKey& key) {
    auto it = display_names.find(key.attribute);
    return (it == display_names.end() ? key.attribute : it->second) + "=" + key.value;
  };

  RowLayout layout = group_rows(report.rows);
  std::size_t slots = 0;
  for (const auto& row : report.rows) slots = std::max(slots, row.predicates.size());

  std::vector<std::string> header;
  for (std::size_t s = 0; s < slots; ++s) header.push_back(s == 0 ? "Explanation" : "");
  header.insert(header.end(), {"Actions", "Followers", "Followups"});

  std::vector<std::vector<std::string>> cells;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    std::vector<std::string> line;
    const auto& ordered = layout.ordered[i];
    for (std::size_t s = 0; s < slots; ++s) {
      if (s < layout.shared_prefix[i] || s >= ordered.size()) {
        line.emplace_back();
      } else {
        line.push_back(display(ordered[s]));
      }
    }
    line.push_back(std::to_string(report.rows[i].actions));
    line.push_back(std::to_string(report.rows[i].followers));
    line.push_back(std::to_string(report.rows[i].followups));
    cells.push_back(std::move(line));
  }

  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  }

  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& line) {
    out << '|';
    for (std::size_t c = 0; c < line.size(); ++c) {
      bool numeric = c >= slots;
      std::string pad(width[c] - line[c].size(), ' ');
      out << ' ' << (numeric ? pad + line[c] : line[c] + pad) << " |";
    }
    out << '\n';
  };
  auto rule = [&] {
    out << '+';
    for (std::size_t w : width) out << std::string(w + 2, '-') << '+';
    out << '\n';
  };

  out << "Influencer " << report.influencer << " (" << report.total_followups << " followups)\n";
  rule();
  emit(header);
  rule();
  for (const auto& line : cells) emit(line);
  rule();
  char percent[32];
  std::snprintf(percent, sizeof percent, "%.1f%%", report.relative_coverage * 100.0);
  out << "Total Coverage: " << percent << " (" << report.total_coverage << " of " << report.total_followups
      << ")\n";
  return out.str();
}

}  // namespace proxi
