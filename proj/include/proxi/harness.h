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

// End-to-end runs over the top influencers of a dataset: mining, baseline
// comparison sweeps over k or l, and runtime reports.

#ifndef PROXI_HARNESS_H_
#define PROXI_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "proxi/baselines.h"
#include "proxi/featurization.h"
#include "proxi/ingestion.h"
#include "proxi/miner.h"
#include "proxi/report.h"

namespace proxi {

enum class Algorithm { kGreedy, kEager, kRandom, kMostPopular, kExhaustive, kOracle };

std::string_view to_string(Algorithm algorithm);
Algorithm algorithm_from_string(std::string_view name);  // throws ArgumentError

struct RunConfig {
  std::filesystem::path graph;
  std::filesystem::path actions;
  std::filesystem::path user_attrs;    // optional
  std::filesystem::path action_attrs;  // optional
  std::filesystem::path bins;          // optional; computed from followup mass when empty
  std::size_t nbins = 3;
  Algorithm algorithm = Algorithm::kGreedy;
  std::size_t k = 6;
  std::size_t l = 3;
  std::size_t top_n = 100;
  std::optional<std::uint64_t> seed;
  std::optional<Timestamp> max_delay;
  UserPredicateTarget target = UserPredicateTarget::kFollower;
  std::filesystem::path out;
  ExhaustiveOptions exhaustive;
  OracleLimits oracle;

  // Throws ArgumentError on bad counts or missing input files.
  void validate() const;
};

// Parsed inputs and everything derived from them that is shared across
// influencers. Immutable once loaded.
class Workspace {
 public:
  static Workspace load(const RunConfig& config);
  static Workspace from_parts(SocialGraph graph, ActionLog log, FeatureTables tables, const RunConfig& config);

  const SocialGraph& graph() const { return graph_; }
  const ActionLog& log() const { return log_; }
  const FeatureTables& tables() const { return tables_; }
  const FeatureCatalog& catalog() const { return catalog_; }
  const CubeMass& mass() const { return mass_; }
  const PropagationOptions& propagation() const { return propagation_; }
  UserPredicateTarget target() const { return target_; }

  std::vector<InfluencerCount> top_influencers(std::size_t n) const;

 private:
  SocialGraph graph_;
  ActionLog log_;
  FeatureTables tables_;
  CubeMass mass_;
  FeatureCatalog catalog_;
  PropagationOptions propagation_;
  UserPredicateTarget target_ = UserPredicateTarget::kFollower;
};

struct InfluencerData {
  FollowupSet followups;
  PredicateIndex index;
};

InfluencerData prepare_influencer(const Workspace& workspace, UserId influencer);

struct AlgorithmParams {
  std::size_t k = 1;
  std::size_t l = 1;
  std::optional<std::uint64_t> seed;
  ExhaustiveOptions exhaustive;
  OracleLimits oracle;
};

ExplanationSet run_algorithm(const PredicateIndex& index, Algorithm algorithm, const AlgorithmParams& params);

// Runs `algorithm` and annotates the result. Baselines carry the algorithm
// name (and seed) in the report.
ExplanationReport explain(const Workspace& workspace, const InfluencerData& data, Algorithm algorithm,
                          const AlgorithmParams& params);

// Mines the configured top influencers, writing influencer_<id>.json per
// influencer, summary.csv and bins.json into config.out. Files written by a
// failed run are removed before the error propagates.
std::vector<ExplanationReport> run_pipeline(const RunConfig& config);
std::vector<ExplanationReport> run_pipeline(const Workspace& workspace, const RunConfig& config);

enum class SweepAxis { kK, kL };
std::string_view to_string(SweepAxis axis);

struct SweepPoint {
  std::size_t value = 0;
  Algorithm algorithm = Algorithm::kGreedy;
  std::vector<UserKey> influencers;
  std::vector<double> coverages;  // parallel to influencers
  std::vector<double> millis;     // parallel to influencers
  double median_coverage = 0.0;
  double median_millis = 0.0;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::kK;
  std::vector<SweepPoint> points;  // by axis value, then algorithm order
};

// Lower median (rank ceil(n/2)); 0 for an empty list.
double lower_median(std::vector<double> values);

// For every axis value and algorithm, runs every top influencer with the
// other parameter fixed from config. `values` must be non-empty and
// strictly ascending.
SweepResult sweep(const Workspace& workspace, const RunConfig& config, SweepAxis axis,
                  std::span<const std::size_t> values, std::span<const Algorithm> algorithms);

// sweep_<axis>.csv (medians) and sweep_<axis>_raw.csv (per influencer).
// Both depend only on inputs and config.
void write_sweep(const SweepResult& result, const std::filesystem::path& dir);

struct TimingRow {
  Algorithm algorithm;
  std::size_t k;
  std::size_t l;
  double median_millis;
};

// Median wall time of the mining call alone (parsing and index construction
// excluded) over the top influencers, measured serially.
std::vector<TimingRow> timing_report(const Workspace& workspace, const RunConfig& config,
                                     std::span<const Algorithm> algorithms);
std::vector<TimingRow> timing_rows(const SweepResult& result, const RunConfig& config);
void write_timing(std::span<const TimingRow> rows, const std::filesystem::path& file);

}  // namespace proxi

#endif  // PROXI_HARNESS_H_
