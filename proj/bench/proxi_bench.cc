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

// Parallel kernels against their serial references, and the miners against
// each other, on the default synthetic dataset.

#include <benchmark/benchmark.h>
#include <unistd.h>

#include <filesystem>
#include <memory>

#include "proxi/baselines.h"
#include "proxi/harness.h"
#include "proxi/synthetic.h"

namespace {

using namespace proxi;
namespace fs = std::filesystem;

struct Fixture {
  Fixture() {
    dir = fs::temp_directory_path() / ("proxi_bench_" + std::to_string(::getpid()));
    write_synthetic(generate_synthetic(SyntheticConfig{}), dir);
    config.graph = dir / "graph.tsv";
    config.actions = dir / "actions.tsv";
    config.user_attrs = dir / "users.attrs.tsv";
    config.action_attrs = dir / "actions.attrs.tsv";
    workspace = std::make_unique<Workspace>(Workspace::load(config));
    top = prepare_influencer(*workspace, workspace->top_influencers(1).front().user);
    fs::remove_all(dir);
  }

  fs::path dir;
  RunConfig config;
  std::unique_ptr<Workspace> workspace;
  InfluencerData top;
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

void BM_CubeMassParallel(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(compute_cube_mass(f.workspace->graph(), f.workspace->log()));
}
BENCHMARK(BM_CubeMassParallel)->Unit(benchmark::kMillisecond);

void BM_CubeMassSerial(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(compute_cube_mass_serial(f.workspace->graph(), f.workspace->log()));
}
BENCHMARK(BM_CubeMassSerial)->Unit(benchmark::kMillisecond);

void BM_FollowupSet(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_followup_set(f.workspace->graph(), f.workspace->log(), f.top.followups.influencer));
  }
}
BENCHMARK(BM_FollowupSet)->Unit(benchmark::kMillisecond);

void BM_LazyGreedy(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(mine_explanations(f.top.index, state.range(0), 3));
}
BENCHMARK(BM_LazyGreedy)->Arg(1)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_EagerGreedy(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(eager_greedy(f.top.index, state.range(0), 3));
}
BENCHMARK(BM_EagerGreedy)->Arg(1)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_ExhaustiveSerial(benchmark::State& state) {
  auto& f = fixture();
  ExhaustiveOptions options;
  options.parallel = false;
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_baseline(f.top.index, state.range(0), 3, options));
}
BENCHMARK(BM_ExhaustiveSerial)->Arg(1)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_ExhaustiveParallel(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_baseline(f.top.index, state.range(0), 3));
}
BENCHMARK(BM_ExhaustiveParallel)->Arg(1)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_MostPopular(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(most_popular_baseline(f.top.index, 6, 3));
}
BENCHMARK(BM_MostPopular)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
