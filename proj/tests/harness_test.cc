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


#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "proxi/harness.h"
#include "proxi/report.h"
#include "proxi/synthetic.h"
#include "support.h"

namespace proxi {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("proxi_harness_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name, std::ios::binary) << text;
    return path_ / name;
  }

 private:
  fs::path path_;
};

std::string read(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

PredicateKey user(const std::string& a, const std::string& v) { return {Dimension::kUser, a, v}; }
PredicateKey act(const std::string& a, const std::string& v) { return {Dimension::kAction, a, v}; }

ExplanationReport sample_report() {
  ExplanationReport r;
  r.influencer = 42;
  r.total_followups = 1000;
  r.rows = {{{act("maturity", "R"), act("genre", "thriller"), user("gender", "male")}, 708, 67, 400},
            {{act("genre", "thriller"), user("gender", "female"), act("maturity", "R")}, 708, 37, 200}};
  r.total_coverage = 563;
  r.relative_coverage = 0.563;
  return r;
}

TEST(RenderTest, GroupsSharedPredicatesAndPrintsFooter) {
  auto report = sample_report();
  auto text = render_table(report);
  auto rows = lines(text);
  ASSERT_GE(rows.size(), 8u);
  EXPECT_EQ(rows[0], "Influencer 42 (1000 followups)");
  // Row 2 repeats maturity and genre from row 1, so only its gender shows.
  EXPECT_NE(rows[4].find("maturity=R"), std::string::npos);
  EXPECT_EQ(rows[5].find("maturity=R"), std::string::npos);
  EXPECT_EQ(rows[5].find("genre=thriller"), std::string::npos);
  EXPECT_NE(rows[5].find("gender=female"), std::string::npos);
  EXPECT_EQ(rows.back(), "Total Coverage: 56.3% (563 of 1000)");

  auto layout = group_rows(report.rows);
  EXPECT_EQ(layout.shared_prefix, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(layout.ordered[1],
            (std::vector<PredicateKey>{act("maturity", "R"), act("genre", "thriller"), user("gender", "female")}));
}

TEST(RenderTest, SingleRowAndDisplayNames) {
  auto report = sample_report();
  report.rows.resize(1);
  auto layout = group_rows(report.rows);
  EXPECT_EQ(layout.shared_prefix, std::vector<std::size_t>{0});
  auto text = render_table(report, {{"maturity", "Rated"}});
  EXPECT_NE(text.find("Rated=R"), std::string::npos);
  EXPECT_EQ(text.find("maturity=R"), std::string::npos);
  // Header, rules, one data row, footer.
  EXPECT_EQ(lines(text).size(), 7u);
}

// Longest common prefix oracle on three-predicate rows.
TEST(RenderTest, PrefixGroupingMatchesOracle) {
  std::mt19937_64 rng(3);
  std::vector<PredicateKey> pool = {act("a", "1"), act("b", "1"), act("c", "1"), user("d", "1"), user("e", "1")};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ReportRow> rows(2);
    for (auto& row : rows) {
      auto keys = pool;
      std::shuffle(keys.begin(), keys.end(), rng);
      row.predicates.assign(keys.begin(), keys.begin() + 3);
    }
    auto layout = group_rows(rows);
    std::size_t common = 0;
    for (const auto& key : rows[1].predicates) {
      common += std::find(rows[0].predicates.begin(), rows[0].predicates.end(), key) != rows[0].predicates.end();
    }
    // Shared prefix is the leading run of row 1 that row 2 also has.
    std::size_t expected = 0;
    while (expected < 3 && std::find(rows[1].predicates.begin(), rows[1].predicates.end(),
                                     rows[0].predicates[expected]) != rows[1].predicates.end()) {
      ++expected;
    }
    EXPECT_EQ(layout.shared_prefix[1], expected);
    EXPECT_LE(expected, common);
    auto sorted_a = layout.ordered[1], sorted_b = rows[1].predicates;
    std::sort(sorted_a.begin(), sorted_a.end());
    std::sort(sorted_b.begin(), sorted_b.end());
    EXPECT_EQ(sorted_a, sorted_b);
  }
}

TEST(ReportJsonTest, RoundTrip) {
  auto report = sample_report();
  std::istringstream in(report_to_json(report));
  EXPECT_EQ(report_from_json(in), report);

  report.algorithm = "random";
  report.seed = 7;
  report.truncated = true;
  auto json = report_to_json(report);
  EXPECT_NE(json.find("\"seed\": 7"), std::string::npos);
  std::istringstream in2(json);
  EXPECT_EQ(report_from_json(in2), report);

  report.algorithm = "most-popular";
  report.seed.reset();
  json = report_to_json(report);
  EXPECT_NE(json.find("\"seed\": null"), std::string::npos);
}

TEST(ReportJsonTest, FieldOrder) {
  auto json = report_to_json(sample_report());
  std::vector<std::string> keys = {"\"influencer\"", "\"total_followups\"", "\"explanations\"", "\"total_coverage\"",
                                   "\"relative_coverage\""};
  std::size_t at = 0;
  for (const auto& key : keys) {
    auto pos = json.find(key, at);
    ASSERT_NE(pos, std::string::npos) << key;
    at = pos;
  }
  EXPECT_EQ(json.find("algorithm"), std::string::npos);
}

TEST(ReportJsonTest, BadDocuments) {
  for (const char* text : {"{", "[]", R"({"influencer": 1})",
                           R"({"influencer":1,"total_followups":2,"explanations":[{"predicates":[{"dimension":"x","attribute":"a","value":"b"}],"actions":1,"followers":1,"followups":1}],"total_coverage":1,"relative_coverage":0.5})"}) {
    std::istringstream in(text);
    EXPECT_THROW(report_from_json(in), ParseError) << text;
  }
}

TEST(AlgorithmTest, Names) {
  for (Algorithm a : {Algorithm::kGreedy, Algorithm::kEager, Algorithm::kRandom, Algorithm::kMostPopular,
                      Algorithm::kExhaustive, Algorithm::kOracle}) {
    EXPECT_EQ(algorithm_from_string(to_string(a)), a);
  }
  EXPECT_THROW(algorithm_from_string("best"), ArgumentError);
}

TEST(MedianTest, LowerMedian) {
  EXPECT_EQ(lower_median({}), 0.0);
  EXPECT_EQ(lower_median({3.0}), 3.0);
  EXPECT_EQ(lower_median({4.0, 1.0, 3.0, 2.0}), 2.0);
  EXPECT_EQ(lower_median({5.0, 1.0, 3.0}), 3.0);
}

struct ChainFiles {
  TempDir dir;
  RunConfig config;
  ChainFiles() {
    config.graph = dir.write("graph.tsv", "1\t2\n2\t3\n");
    config.actions = dir.write("actions.tsv", "1\ta\t1\n2\ta\t2\n3\ta\t3\n");
    config.action_attrs = dir.write("actions.attrs.tsv", "a\tgenre\tdrama\n");
    config.out = dir.path() / "out";
    config.k = 1;
    config.l = 1;
    config.top_n = 1;
  }
};

TEST(PipelineTest, ChainDataset) {
  ChainFiles f;
  auto reports = run_pipeline(f.config);
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_EQ(reports[0].influencer, 1);
  EXPECT_EQ(reports[0].relative_coverage, 1.0);
  EXPECT_TRUE(fs::exists(f.config.out / "influencer_1.json"));
  EXPECT_EQ(read(f.config.out / "summary.csv"),
            "influencer,followups,explanations,total_coverage,relative_coverage\n1,2,1,2,1.000000\n");
  std::ifstream in(f.config.out / "influencer_1.json");
  EXPECT_EQ(report_from_json(in), reports[0]);
  int files = 0;
  for ([[maybe_unused]] const auto& entry : fs::directory_iterator(f.config.out)) ++files;
  EXPECT_EQ(files, 3);  // one influencer, bins.json, summary.csv
}

TEST(PipelineTest, EmptyLogGivesEmptySummary) {
  ChainFiles f;
  f.config.actions = f.dir.write("actions.tsv", "");
  auto reports = run_pipeline(f.config);
  EXPECT_TRUE(reports.empty());
  EXPECT_EQ(read(f.config.out / "summary.csv"),
            "influencer,followups,explanations,total_coverage,relative_coverage\n");
}

TEST(PipelineTest, ErrorsCarryFileAndLine) {
  ChainFiles f;
  f.config.graph = f.dir.write("graph.tsv", "1\t2\n2\t2\n");
  try {
    run_pipeline(f.config);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("graph.tsv:2"), std::string::npos) << e.what();
  }
  f.config.graph = f.dir.path() / "missing.tsv";
  EXPECT_THROW(run_pipeline(f.config), ArgumentError);
}

TEST(PipelineTest, FailedWriteRemovesPartialOutput) {
  ChainFiles f;
  fs::create_directories(f.config.out / "summary.csv");  // a directory cannot be opened for writing
  EXPECT_THROW(run_pipeline(f.config), Error);
  EXPECT_FALSE(fs::exists(f.config.out / "influencer_1.json"));
  EXPECT_FALSE(fs::exists(f.config.out / "bins.json"));
}

TEST(PipelineTest, ResourceGuardPropagates) {
  ChainFiles f;
  f.config.algorithm = Algorithm::kExhaustive;
  f.config.exhaustive.combination_budget = 0;
  EXPECT_THROW(run_pipeline(f.config), ResourceError);
  EXPECT_FALSE(fs::exists(f.config.out / "summary.csv"));
}

TEST(RunConfigTest, Validation) {
  ChainFiles f;
  auto bad = f.config;
  bad.k = 0;
  EXPECT_THROW(bad.validate(), ArgumentError);
  bad = f.config;
  bad.algorithm = Algorithm::kRandom;
  EXPECT_THROW(bad.validate(), ArgumentError);
  bad.seed = 1;
  EXPECT_NO_THROW(bad.validate());
  bad.user_attrs = f.dir.path() / "nope.tsv";
  EXPECT_THROW(bad.validate(), ArgumentError);
}

struct SmallSynthetic {
  TempDir dir;
  RunConfig config;
  explicit SmallSynthetic(std::size_t users = 60, std::size_t actions = 40) {
    SyntheticConfig sc;
    sc.users = users;
    sc.actions = actions;
    sc.follows_per_user = 6;
    sc.base_adoption = 0.08;
    sc.seed = 5;
    write_synthetic(generate_synthetic(sc), dir.path());
    config.graph = dir.path() / "graph.tsv";
    config.actions = dir.path() / "actions.tsv";
    config.user_attrs = dir.path() / "users.attrs.tsv";
    config.action_attrs = dir.path() / "actions.attrs.tsv";
    config.out = dir.path() / "out";
    config.top_n = 5;
    config.k = 3;
    config.l = 2;
  }
};

// Recomputes one influencer's report from the raw files without the harness.
std::string direct_json(const RunConfig& config, UserKey influencer) {
  std::ifstream g(config.graph), a(config.actions), u(config.user_attrs), x(config.action_attrs);
  auto graph = parse_social_graph(g);
  auto log = parse_action_log(a);
  FeatureTables tables;
  tables.users = load_attribute_table(u, Dimension::kUser);
  tables.actions = load_attribute_table(x, Dimension::kAction);
  auto mass = compute_cube_mass_serial(graph, log);
  tables.bins = default_bins(tables, graph, log, mass, config.nbins);
  auto catalog = FeatureCatalog::build(graph.users(), log.actions(), tables);
  auto fset = compute_followup_set(graph, log, *graph.find_user(influencer));
  auto index = build_predicate_index(fset, catalog);
  auto set = mine_explanations(index, config.k, config.l);
  std::vector<Annotation> annotations;
  for (const auto& e : set.explanations) annotations.push_back(annotate(e, index, fset, catalog));
  return report_to_json(make_report(set, index, annotations, influencer));
}

TEST(PipelineTest, MatchesDirectLibraryCalls) {
  SmallSynthetic s(50, 30);
  auto reports = run_pipeline(s.config);
  ASSERT_FALSE(reports.empty());
  for (const auto& r : reports) {
    EXPECT_EQ(read(s.config.out / ("influencer_" + std::to_string(r.influencer) + ".json")),
              direct_json(s.config, r.influencer));
  }
}

TEST(SweepTest, SingleInfluencerMedianIsItsCoverage) {
  SmallSynthetic s;
  s.config.top_n = 1;
  auto ws = Workspace::load(s.config);
  std::vector<std::size_t> values = {1};
  std::vector<Algorithm> algorithms = {Algorithm::kGreedy};
  auto result = sweep(ws, s.config, SweepAxis::kK, values, algorithms);
  ASSERT_EQ(result.points.size(), 1u);
  const auto& point = result.points[0];
  ASSERT_EQ(point.coverages.size(), 1u);
  EXPECT_EQ(point.median_coverage, point.coverages[0]);
  EXPECT_EQ(point.median_millis, point.millis[0]);
  auto data = prepare_influencer(ws, ws.top_influencers(1)[0].user);
  EXPECT_EQ(point.coverages[0], mine_explanations(data.index, 1, s.config.l).relative_coverage());
}

TEST(SweepTest, OracleMediansGrowWithK) {
  // Tiny catalog: one user attribute with three values and two action genres.
  TempDir dir;
  RunConfig config;
  config.graph = dir.write("graph.tsv", "1\t2\n1\t3\n1\t4\n2\t5\n");
  config.actions = dir.write("actions.tsv", "1\ta\t1\n2\ta\t2\n3\ta\t3\n5\ta\t4\n1\tb\t1\n4\tb\t2\n3\tb\t3\n");
  config.user_attrs = dir.write("u.tsv", "#single: c\n2\tc\tx\n3\tc\ty\n4\tc\tz\n5\tc\tx\n");
  config.action_attrs = dir.write("a.tsv", "a\tg\tp\nb\tg\tq\n");
  config.top_n = 3;
  config.l = 1;
  auto ws = Workspace::load(config);
  std::vector<std::size_t> values = {1, 2};
  std::vector<Algorithm> algorithms = {Algorithm::kOracle};
  auto result = sweep(ws, config, SweepAxis::kK, values, algorithms);
  ASSERT_EQ(result.points.size(), 2u);
  EXPECT_LE(result.points[0].median_coverage, result.points[1].median_coverage);
  for (std::size_t i = 0; i < result.points[0].coverages.size(); ++i) {
    EXPECT_LE(result.points[0].coverages[i], result.points[1].coverages[i]);
  }
}

TEST(SweepTest, MediansRecomputableFromRawFile) {
  SmallSynthetic s;
  s.config.seed = 3;
  auto ws = Workspace::load(s.config);
  std::vector<std::size_t> values = {1, 2, 3};
  std::vector<Algorithm> algorithms = {Algorithm::kGreedy, Algorithm::kRandom, Algorithm::kMostPopular};
  auto result = sweep(ws, s.config, SweepAxis::kL, values, algorithms);
  write_sweep(result, s.config.out);
  auto raw = lines(read(s.config.out / "sweep_l_raw.csv"));
  auto medians = lines(read(s.config.out / "sweep_l.csv"));
  EXPECT_EQ(raw[0], "l,algorithm,influencer,relative_coverage");
  EXPECT_EQ(medians[0], "l,algorithm,median_coverage");
  std::map<std::pair<std::string, std::string>, std::vector<double>> groups;
  for (std::size_t i = 1; i < raw.size(); ++i) {
    std::stringstream row(raw[i]);
    std::string value, algo, who, cov;
    std::getline(row, value, ',');
    std::getline(row, algo, ',');
    std::getline(row, who, ',');
    std::getline(row, cov, ',');
    groups[{value, algo}].push_back(std::stod(cov));
  }
  ASSERT_EQ(medians.size(), 1 + values.size() * algorithms.size());
  for (std::size_t i = 1; i < medians.size(); ++i) {
    std::stringstream row(medians[i]);
    std::string value, algo, med;
    std::getline(row, value, ',');
    std::getline(row, algo, ',');
    std::getline(row, med, ',');
    auto cov = groups.at({value, algo});
    std::sort(cov.begin(), cov.end());
    char expected[32];
    std::snprintf(expected, sizeof expected, "%.6f", cov[(cov.size() - 1) / 2]);
    EXPECT_EQ(med, expected) << medians[i];
  }
}

TEST(SweepTest, RejectsBadAxisValues) {
  SmallSynthetic s;
  auto ws = Workspace::load(s.config);
  std::vector<Algorithm> algorithms = {Algorithm::kGreedy};
  std::vector<std::size_t> unsorted = {2, 1}, zero = {0}, empty;
  EXPECT_THROW(sweep(ws, s.config, SweepAxis::kK, unsorted, algorithms), ArgumentError);
  EXPECT_THROW(sweep(ws, s.config, SweepAxis::kK, zero, algorithms), ArgumentError);
  EXPECT_THROW(sweep(ws, s.config, SweepAxis::kK, empty, algorithms), ArgumentError);
}

TEST(TimingTest, RowsKeyedByAlgorithm) {
  SmallSynthetic s;
  auto ws = Workspace::load(s.config);
  std::vector<Algorithm> algorithms = {Algorithm::kGreedy, Algorithm::kExhaustive};
  auto rows = timing_report(ws, s.config, algorithms);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].algorithm, Algorithm::kGreedy);
  EXPECT_EQ(rows[1].algorithm, Algorithm::kExhaustive);
  for (const auto& row : rows) {
    EXPECT_EQ(row.k, s.config.k);
    EXPECT_EQ(row.l, s.config.l);
    EXPECT_GE(row.median_millis, 0.0);
  }
  write_timing(rows, s.dir.path() / "timing.csv");
  auto text = lines(read(s.dir.path() / "timing.csv"));
  ASSERT_EQ(text.size(), 3u);
  EXPECT_EQ(text[0], "algorithm,k,l,median_millis");
  EXPECT_EQ(text[1].rfind("greedy,3,2,", 0), 0u);
  EXPECT_EQ(text[2].rfind("exhaustive,3,2,", 0), 0u);
}

TEST(WorkspaceTest, LoadsBinsFromFile) {
  SmallSynthetic s;
  run_pipeline(s.config);
  auto with_bins = s.config;
  with_bins.bins = s.config.out / "bins.json";
  with_bins.out = s.dir.path() / "out2";
  run_pipeline(with_bins);
  for (const auto& entry : fs::directory_iterator(s.config.out)) {
    EXPECT_EQ(read(entry.path()), read(with_bins.out / entry.path().filename())) << entry.path();
  }
}

TEST(SyntheticTest, SeededAndVersioned) {
  SyntheticConfig config;
  config.users = 200;
  config.actions = 50;
  auto a = generate_synthetic(config);
  auto b = generate_synthetic(config);
  EXPECT_EQ(a.graph_tsv, b.graph_tsv);
  EXPECT_EQ(a.actions_tsv, b.actions_tsv);
  EXPECT_EQ(a.user_attrs_tsv, b.user_attrs_tsv);
  EXPECT_EQ(a.action_attrs_tsv, b.action_attrs_tsv);
  EXPECT_EQ(a.graph_tsv.rfind("# proxi synthetic v" + std::to_string(kSyntheticVersion), 0), 0u);
  config.seed = 2;
  EXPECT_NE(generate_synthetic(config).actions_tsv, a.actions_tsv);
  // Parsers accept every file.
  std::istringstream g(a.graph_tsv), l(a.actions_tsv), u(a.user_attrs_tsv), x(a.action_attrs_tsv);
  EXPECT_NO_THROW(parse_social_graph(g));
  EXPECT_NO_THROW(parse_action_log(l));
  EXPECT_NO_THROW(load_attribute_table(u, Dimension::kUser));
  EXPECT_NO_THROW(load_attribute_table(x, Dimension::kAction));
}

}  // namespace
}  // namespace proxi
