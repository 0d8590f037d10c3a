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

#include "proxi/harness.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>

#include <omp.h>

namespace proxi {
namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open " + path.string());
  return in;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

std::string format_fraction(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

// Runs body(i) for i in [0, n) across threads; rethrows the exception of
// the lowest failing index so errors are reported deterministically.
template <class Body>
void parallel_for_each(std::size_t n, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

bool is_baseline(Algorithm a) { return a != Algorithm::kGreedy && a != Algorithm::kEager; }

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kGreedy:
      return "greedy";
    case Algorithm::kEager:
      return "eager";
    case Algorithm::kRandom:
      return "random";
    case Algorithm::kMostPopular:
      return "most-popular";
    case Algorithm::kExhaustive:
      return "exhaustive";
    case Algorithm::kOracle:
      return "oracle";
  }
  return "unknown";
}

Algorithm algorithm_from_string(std::string_view name) {
  for (Algorithm a : {Algorithm::kGreedy, Algorithm::kEager, Algorithm::kRandom, Algorithm::kMostPopular,
                      Algorithm::kExhaustive, Algorithm::kOracle}) {
    if (to_string(a) == name) return a;
  }
  throw ArgumentError("unknown algorithm '" + std::string(name) + "'");
}

std::string_view to_string(SweepAxis axis) { return axis == SweepAxis::kK ? "k" : "l"; }

void RunConfig::validate() const {
  if (k == 0 || l == 0 || top_n == 0) throw ArgumentError("k, l and top must be at least 1");
  if (nbins == 0) throw ArgumentError("nbins must be at least 1");
  if (algorithm == Algorithm::kRandom && !seed) throw ArgumentError("the random baseline needs --seed");
  for (const auto* path : {&graph, &actions}) {
    if (path->empty()) throw ArgumentError("--graph and --actions are required");
  }
  for (const auto* path : {&graph, &actions, &user_attrs, &action_attrs, &bins}) {
    if (!path->empty() && !std::filesystem::exists(*path)) {
      throw ArgumentError("input file does not exist: " + path->string());
    }
  }
}

Workspace Workspace::from_parts(SocialGraph graph, ActionLog log, FeatureTables tables, const RunConfig& config) {
  Workspace ws;
  ws.graph_ = std::move(graph);
  ws.log_ = std::move(log);
  ws.tables_ = std::move(tables);
  ws.propagation_.max_delay = config.max_delay;
  ws.target_ = config.target;
  ws.mass_ = compute_cube_mass(ws.graph_, ws.log_, ws.propagation_);
  if (ws.tables_.bins.empty()) {
    ws.tables_.bins = default_bins(ws.tables_, ws.graph_, ws.log_, ws.mass_, config.nbins);
  }
  ws.catalog_ = FeatureCatalog::build(ws.graph_.users(), ws.log_.actions(), ws.tables_);
  return ws;
}

Workspace Workspace::load(const RunConfig& config) {
  config.validate();
  auto graph_in = open_input(config.graph);
  SocialGraph graph = parse_social_graph(graph_in, config.graph.string());
  auto log_in = open_input(config.actions);
  ActionLog log = parse_action_log(log_in, config.actions.string());
  FeatureTables tables;
  if (!config.user_attrs.empty()) {
    auto in = open_input(config.user_attrs);
    tables.users = load_attribute_table(in, Dimension::kUser, config.user_attrs.string());
  }
  if (!config.action_attrs.empty()) {
    auto in = open_input(config.action_attrs);
    tables.actions = load_attribute_table(in, Dimension::kAction, config.action_attrs.string());
  }
  if (!config.bins.empty()) {
    auto in = open_input(config.bins);
    tables.bins = load_bin_specs(in, config.bins.string());
  }
  return from_parts(std::move(graph), std::move(log), std::move(tables), config);
}

std::vector<InfluencerCount> Workspace::top_influencers(std::size_t n) const {
  std::vector<InfluencerCount> ranked;
  for (UserId u = 0; u < mass_.by_influencer.size(); ++u) {
    if (mass_.by_influencer[u] > 0) ranked.push_back({u, mass_.by_influencer[u]});
  }
  std::sort(ranked.begin(), ranked.end(), [](const InfluencerCount& x, const InfluencerCount& y) {
    if (x.followups != y.followups) return x.followups > y.followups;
    return x.user < y.user;
  });
  if (ranked.size() > n) ranked.resize(n);
  return ranked;
}

InfluencerData prepare_influencer(const Workspace& workspace, UserId influencer) {
  InfluencerData data;
  data.followups = compute_followup_set(workspace.graph(), workspace.log(), influencer, workspace.propagation());
  data.index = build_predicate_index(data.followups, workspace.catalog(), workspace.target());
  return data;
}

ExplanationSet run_algorithm(const PredicateIndex& index, Algorithm algorithm, const AlgorithmParams& params) {
  switch (algorithm) {
    case Algorithm::kGreedy:
      return mine_explanations(index, params.k, params.l);
    case Algorithm::kEager:
      return eager_greedy(index, params.k, params.l);
    case Algorithm::kRandom:
      if (!params.seed) throw ArgumentError("the random baseline needs a seed");
      return random_baseline(index, params.k, params.l, *params.seed);
    case Algorithm::kMostPopular:
      return most_popular_baseline(index, params.k, params.l);
    case Algorithm::kExhaustive:
      return exhaustive_baseline(index, params.k, params.l, params.exhaustive);
    case Algorithm::kOracle:
      return brute_force_oracle(index, params.k, params.l, params.oracle).witness;
  }
  throw ArgumentError("unknown algorithm");
}

ExplanationReport explain(const Workspace& workspace, const InfluencerData& data, Algorithm algorithm,
                          const AlgorithmParams& params) {
  ExplanationSet set = run_algorithm(data.index, algorithm, params);
  std::vector<Annotation> annotations;
  for (const auto& e : set.explanations) {
    annotations.push_back(annotate(e, data.index, data.followups, workspace.catalog(), workspace.target()));
  }
  ExplanationReport report =
      make_report(set, data.index, annotations, workspace.graph().key(data.followups.influencer));
  if (is_baseline(algorithm)) {
    report.algorithm = std::string(to_string(algorithm));
    if (algorithm == Algorithm::kRandom) report.seed = params.seed;
  }
  return report;
}

namespace {

AlgorithmParams params_from(const RunConfig& config) {
  AlgorithmParams params;
  params.k = config.k;
  params.l = config.l;
  params.seed = config.seed;
  params.exhaustive = config.exhaustive;
  params.oracle = config.oracle;
  return params;
}

}  // namespace

std::vector<ExplanationReport> run_pipeline(const RunConfig& config) {
  Workspace workspace = Workspace::load(config);
  return run_pipeline(workspace, config);
}

std::vector<ExplanationReport> run_pipeline(const Workspace& workspace, const RunConfig& config) {
  if (config.k == 0 || config.l == 0 || config.top_n == 0) throw ArgumentError("k, l and top must be at least 1");
  if (config.out.empty()) throw ArgumentError("--out is required");
  const auto top = workspace.top_influencers(config.top_n);
  const AlgorithmParams params = params_from(config);

  std::vector<ExplanationReport> reports(top.size());
  parallel_for_each(top.size(), [&](std::size_t i) {
    InfluencerData data = prepare_influencer(workspace, top[i].user);
    reports[i] = explain(workspace, data, config.algorithm, params);
  });

  std::filesystem::create_directories(config.out);
  std::vector<std::filesystem::path> written;
  try {
    std::ostringstream summary;
    summary << "influencer,followups,explanations,total_coverage,relative_coverage\n";
    for (const auto& report : reports) {
      auto path = config.out / ("influencer_" + std::to_string(report.influencer) + ".json");
      written.push_back(path);
      write_file(path, report_to_json(report));
      summary << report.influencer << ',' << report.total_followups << ',' << report.rows.size() << ','
              << report.total_coverage << ',' << format_fraction(report.relative_coverage) << '\n';
    }
    std::ostringstream bins;
    save_bin_specs(bins, workspace.tables().bins);
    written.push_back(config.out / "bins.json");
    write_file(written.back(), bins.str());
    written.push_back(config.out / "summary.csv");
    write_file(written.back(), summary.str());
  } catch (...) {
    std::error_code ignored;
    for (const auto& path : written) std::filesystem::remove(path, ignored);
    throw;
  }
  return reports;
}

double lower_median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  return values[(values.size() - 1) / 2];
}

SweepResult sweep(const Workspace& workspace, const RunConfig& config, SweepAxis axis,
                  std::span<const std::size_t> values, std::span<const Algorithm> algorithms) {
  if (values.empty()) throw ArgumentError("sweep needs at least one axis value");
  if (algorithms.empty()) throw ArgumentError("sweep needs at least one algorithm");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == 0) throw ArgumentError("sweep values must be at least 1");
    if (i > 0 && values[i] <= values[i - 1]) throw ArgumentError("sweep values must be strictly ascending");
  }
  const auto top = workspace.top_influencers(config.top_n);
  const std::size_t combos = values.size() * algorithms.size();

  SweepResult result;
  result.axis = axis;
  result.points.resize(combos);
  for (std::size_t v = 0; v < values.size(); ++v) {
    for (std::size_t a = 0; a < algorithms.size(); ++a) {
      auto& point = result.points[v * algorithms.size() + a];
      point.value = values[v];
      point.algorithm = algorithms[a];
      point.coverages.assign(top.size(), 0.0);
      point.millis.assign(top.size(), 0.0);
      for (const auto& t : top) point.influencers.push_back(workspace.graph().key(t.user));
    }
  }

  parallel_for_each(top.size(), [&](std::size_t i) {
    InfluencerData data = prepare_influencer(workspace, top[i].user);
    for (auto& point : result.points) {
      AlgorithmParams params = params_from(config);
      (axis == SweepAxis::kK ? params.k : params.l) = point.value;
      auto start = std::chrono::steady_clock::now();
      ExplanationSet set = run_algorithm(data.index, point.algorithm, params);
      auto stop = std::chrono::steady_clock::now();
      point.coverages[i] = set.relative_coverage();
      point.millis[i] = std::chrono::duration<double, std::milli>(stop - start).count();
    }
  });

  for (auto& point : result.points) {
    point.median_coverage = lower_median(point.coverages);
    point.median_millis = lower_median(point.millis);
  }
  return result;
}

void write_sweep(const SweepResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::string axis(to_string(result.axis));
  std::ostringstream medians, raw;
  medians << axis << ",algorithm,median_coverage\n";
  raw << axis << ",algorithm,influencer,relative_coverage\n";
  for (const auto& point : result.points) {
    medians << point.value << ',' << to_string(point.algorithm) << ',' << format_fraction(point.median_coverage)
            << '\n';
    for (std::size_t i = 0; i < point.influencers.size(); ++i) {
      raw << point.value << ',' << to_string(point.algorithm) << ',' << point.influencers[i] << ','
          << format_fraction(point.coverages[i]) << '\n';
    }
  }
  write_file(dir / ("sweep_" + axis + ".csv"), medians.str());
  write_file(dir / ("sweep_" + axis + "_raw.csv"), raw.str());
}

std::vector<TimingRow> timing_report(const Workspace& workspace, const RunConfig& config,
                                     std::span<const Algorithm> algorithms) {
  const auto top = workspace.top_influencers(config.top_n);
  const AlgorithmParams params = params_from(config);
  std::vector<std::vector<double>> millis(algorithms.size());
  for (const auto& t : top) {
    InfluencerData data = prepare_influencer(workspace, t.user);
    for (std::size_t a = 0; a < algorithms.size(); ++a) {
      auto start = std::chrono::steady_clock::now();
      ExplanationSet set = run_algorithm(data.index, algorithms[a], params);
      auto stop = std::chrono::steady_clock::now();
      millis[a].push_back(std::chrono::duration<double, std::milli>(stop - start).count());
    }
  }
  std::vector<TimingRow> rows;
  for (std::size_t a = 0; a < algorithms.size(); ++a) {
    rows.push_back({algorithms[a], config.k, config.l, lower_median(millis[a])});
  }
  return rows;
}

std::vector<TimingRow> timing_rows(const SweepResult& result, const RunConfig& config) {
  std::vector<TimingRow> rows;
  for (const auto& point : result.points) {
    std::size_t k = result.axis == SweepAxis::kK ? point.value : config.k;
    std::size_t l = result.axis == SweepAxis::kL ? point.value : config.l;
    rows.push_back({point.algorithm, k, l, point.median_millis});
  }
  return rows;
}

void write_timing(std::span<const TimingRow> rows, const std::filesystem::path& file) {
  std::ostringstream out;
  out << "algorithm,k,l,median_millis\n";
  for (const auto& row : rows) {
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.3f", row.median_millis);
    out << to_string(row.algorithm) << ',' << row.k << ',' << row.l << ',' << ms << '\n';
  }
  write_file(file, out.str());
}

}  // namespace proxi
