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

// proxi: mine explanations of an influencer's followups.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "proxi/baselines.h"
#include "proxi/harness.h"
#include "proxi/ingestion.h"
#include "proxi/report.h"
#include "proxi/synthetic.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;

struct Inputs {
  std::string graph, actions, user_attrs, action_attrs, bins;
  std::size_t nbins = 3;
  std::size_t k = 6, l = 3, top = 100;
  std::string algo;
  std::vector<std::string> algos;
  std::optional<std::uint64_t> seed;
  std::optional<proxi::Timestamp> max_delay;
  std::string target = "follower";
  std::string out;
  std::uint64_t budget = proxi::ExhaustiveOptions{}.combination_budget;
};

void add_data_options(CLI::App* cmd, Inputs& in, bool attributes) {
  cmd->add_option("--graph", in.graph, "Social graph TSV (u<TAB>v, v follows u)")->required();
  cmd->add_option("--actions", in.actions, "Action log TSV (user<TAB>action<TAB>timestamp)")->required();
  cmd->add_option("--max-delay", in.max_delay, "Only propagate when t_v - t_u <= this");
  if (!attributes) return;
  cmd->add_option("--user-attrs", in.user_attrs, "User attribute TSV");
  cmd->add_option("--action-attrs", in.action_attrs, "Action attribute TSV");
  cmd->add_option("--bins", in.bins, "Bin specs JSON; computed equi-depth when absent");
  cmd->add_option("--nbins", in.nbins, "Bins per numeric attribute when computing bins")->capture_default_str();
  cmd->add_option("--user-predicate-target", in.target, "Evaluate user predicates on the follower or influencer")
      ->check(CLI::IsMember({"follower", "influencer"}))
      ->capture_default_str();
}

void add_mining_options(CLI::App* cmd, Inputs& in) {
  cmd->add_option("-k", in.k, "Number of explanations")->capture_default_str();
  cmd->add_option("-l", in.l, "Predicates per explanation")->capture_default_str();
  cmd->add_option("--top", in.top, "Number of top influencers")->capture_default_str();
  cmd->add_option("--seed", in.seed, "Seed for the random baseline");
  cmd->add_option("--budget", in.budget, "Combination budget per exhaustive iteration")->capture_default_str();
}

proxi::RunConfig to_config(const Inputs& in) {
  proxi::RunConfig config;
  config.graph = in.graph;
  config.actions = in.actions;
  config.user_attrs = in.user_attrs;
  config.action_attrs = in.action_attrs;
  config.bins = in.bins;
  config.nbins = in.nbins;
  config.k = in.k;
  config.l = in.l;
  config.top_n = in.top;
  config.seed = in.seed;
  config.max_delay = in.max_delay;
  config.target = in.target == "influencer" ? proxi::UserPredicateTarget::kInfluencer
                                            : proxi::UserPredicateTarget::kFollower;
  config.out = in.out;
  config.exhaustive.combination_budget = in.budget;
  if (!in.algo.empty()) config.algorithm = proxi::algorithm_from_string(in.algo);
  return config;
}

// Writes to the --out file, or stdout when none was given.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw proxi::Error("cannot write " + path);
  out << text;
}

std::pair<proxi::SocialGraph, proxi::ActionLog> load_network(const Inputs& in) {
  std::ifstream g(in.graph, std::ios::binary);
  if (!g) throw proxi::ArgumentError("cannot open " + in.graph);
  auto graph = proxi::parse_social_graph(g, in.graph);
  std::ifstream a(in.actions, std::ios::binary);
  if (!a) throw proxi::ArgumentError("cannot open " + in.actions);
  auto log = proxi::parse_action_log(a, in.actions);
  return {std::move(graph), std::move(log)};
}

int run(int argc, char** argv) {
  CLI::App app{"Mine crisp explanations of an influencer's followups"};
  app.require_subcommand(1);
  Inputs in;

  auto* rank = app.add_subcommand("rank", "Rank users by followup count (CSV user,followups)");
  add_data_options(rank, in, false);
  rank->add_option("--top", in.top, "Number of influencers")->capture_default_str();
  rank->add_option("--out", in.out, "Output CSV (stdout when absent)");

  auto* histogram = app.add_subcommand("histogram", "Followup-count frequency table (CSV followups,users)");
  add_data_options(histogram, in, false);
  histogram->add_option("--out", in.out, "Output CSV (stdout when absent)");

  auto* mine = app.add_subcommand("mine", "Mine explanations for the top influencers");
  add_data_options(mine, in, true);
  add_mining_options(mine, in);
  in.algo = "greedy";
  mine->add_option("--algo", in.algo, "Miner")->check(CLI::IsMember({"greedy", "eager"}))->capture_default_str();
  mine->add_option("--out", in.out, "Output directory")->required();

  auto* baseline = app.add_subcommand("baseline", "Run a comparison algorithm for the top influencers");
  add_data_options(baseline, in, true);
  add_mining_options(baseline, in);
  baseline->add_option("--algo", in.algo, "Baseline")
      ->check(CLI::IsMember({"random", "most-popular", "exhaustive", "oracle"}))
      ->required();
  baseline->add_option("--out", in.out, "Output directory")->required();

  std::string axis = "k";
  std::vector<std::size_t> values;
  bool timing = false;
  auto* sweep = app.add_subcommand("sweep", "Median relative coverage over top influencers as k or l varies");
  add_data_options(sweep, in, true);
  add_mining_options(sweep, in);
  sweep->add_option("--axis", axis, "Swept parameter")->check(CLI::IsMember({"k", "l"}))->capture_default_str();
  sweep->add_option("--values", values, "Axis values, ascending")->delimiter(',')->required();
  sweep->add_option("--algo", in.algos, "Algorithms (comma separated)")->delimiter(',')->required();
  sweep->add_flag("--timing", timing, "Also write timing.csv (wall-clock, not reproducible)");
  sweep->add_option("--out", in.out, "Output directory")->required();

  std::string report_path, names_path;
  auto* render = app.add_subcommand("render", "Render an explanation JSON file as a text table");
  render->add_option("--in", report_path, "Explanation JSON")->required();
  render->add_option("--names", names_path, "JSON object mapping attribute names to display names");
  render->add_option("--out", in.out, "Output file (stdout when absent)");

  proxi::SyntheticConfig gen_config;
  auto* gen = app.add_subcommand("gen", "Write a seeded synthetic dataset");
  gen->add_option("--users", gen_config.users)->capture_default_str();
  gen->add_option("--actions", gen_config.actions)->capture_default_str();
  gen->add_option("--follows", gen_config.follows_per_user, "Accounts each user follows")->capture_default_str();
  gen->add_option("--exponent", gen_config.popularity_exponent, "Zipf exponent of popularity")
      ->capture_default_str();
  gen->add_option("--adoption", gen_config.base_adoption, "Base adoption probability")->capture_default_str();
  gen->add_option("--boost", gen_config.taste_boost, "Adoption multiplier for matching taste")
      ->capture_default_str();
  gen->add_option("--seed", gen_config.seed)->capture_default_str();
  gen->add_option("--out", in.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*rank) {
    auto [graph, log] = load_network(in);
    proxi::PropagationOptions options{in.max_delay};
    std::ostringstream out;
    out << "user,followups\n";
    for (const auto& row : proxi::rank_influencers(graph, log, in.top, options)) {
      out << graph.key(row.user) << ',' << row.followups << '\n';
    }
    emit(in.out, out.str());
  } else if (*histogram) {
    auto [graph, log] = load_network(in);
    proxi::PropagationOptions options{in.max_delay};
    std::ostringstream out;
    out << "followups,users\n";
    for (const auto& bin : proxi::followup_histogram(graph, log, options)) {
      out << bin.followups << ',' << bin.users << '\n';
    }
    emit(in.out, out.str());
  } else if (*mine || *baseline) {
    auto config = to_config(in);
    auto reports = proxi::run_pipeline(config);
    std::cerr << "wrote " << reports.size() << " explanation files to " << in.out << '\n';
  } else if (*sweep) {
    auto config = to_config(in);
    std::vector<proxi::Algorithm> algorithms;
    for (const auto& name : in.algos) algorithms.push_back(proxi::algorithm_from_string(name));
    if (std::find(algorithms.begin(), algorithms.end(), proxi::Algorithm::kRandom) != algorithms.end() &&
        !config.seed) {
      throw proxi::ArgumentError("the random baseline needs --seed");
    }
    config.validate();
    auto workspace = proxi::Workspace::load(config);
    auto result = proxi::sweep(workspace, config, axis == "k" ? proxi::SweepAxis::kK : proxi::SweepAxis::kL,
                               values, algorithms);
    proxi::write_sweep(result, config.out);
    if (timing) {
      auto rows = proxi::timing_rows(result, config);
      proxi::write_timing(rows, config.out / "timing.csv");
    }
  } else if (*render) {
    std::ifstream report_in(report_path, std::ios::binary);
    if (!report_in) throw proxi::ArgumentError("cannot open " + report_path);
    auto report = proxi::report_from_json(report_in, report_path);
    std::map<std::string, std::string> names;
    if (!names_path.empty()) {
      std::ifstream names_in(names_path, std::ios::binary);
      if (!names_in) throw proxi::ArgumentError("cannot open " + names_path);
      try {
        names = nlohmann::json::parse(names_in).get<std::map<std::string, std::string>>();
      } catch (const nlohmann::json::exception& e) {
        throw proxi::ParseError(names_path + ": " + e.what());
      }
    }
    if (report.rows.empty()) throw proxi::ArgumentError("nothing to render: the explanation set is empty");
    emit(in.out, proxi::render_table(report, names));
  } else if (*gen) {
    proxi::write_synthetic(proxi::generate_synthetic(gen_config), in.out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const proxi::ResourceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitResource;
  } catch (const proxi::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const proxi::ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const proxi::NotFoundError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
