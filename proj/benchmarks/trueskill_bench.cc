// Copyright 2026 The readrank Authors.
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

#include <benchmark/benchmark.h>

#include "readrank/simulate.h"
#include "readrank/trueskill.h"

namespace readrank {
namespace {

void BM_UpdateWin(benchmark::State& state) {
  const TrueSkillParams p;
  Rating a{25.0, 25.0 / 3};
  Rating b{25.0, 25.0 / 3};
  for (auto _ : state) {
    auto [w, l] = update_win(a, b, p);
    benchmark::DoNotOptimize(w);
    benchmark::DoNotOptimize(l);
  }
}
BENCHMARK(BM_UpdateWin);

void BM_UpdateDraw(benchmark::State& state) {
  const TrueSkillParams p;
  Rating a{30.0, 2.0};
  Rating b{20.0, 2.0};
  for (auto _ : state) {
    auto [x, y] = update_draw(a, b, p);
    benchmark::DoNotOptimize(x);
    benchmark::DoNotOptimize(y);
  }
}
BENCHMARK(BM_UpdateDraw);

// Paper-scale aggregate over state.range(0) shuffled runs.
void BM_AggregateRuns(benchmark::State& state) {
  SimConfig cfg;
  cfg.lm_corpus_sentences = 10;
  cfg.treebank_sentences = 10;
  const auto data = simulate_dataset(cfg);
  TrueSkillParams p;
  p.runs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(aggregate_runs(data.sentence_only, p, 1));
  }
  state.SetItemsProcessed(state.iterations() * p.runs *
                          static_cast<int64_t>(data.sentence_only.size()));
}
BENCHMARK(BM_AggregateRuns)->Arg(1)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace readrank

BENCHMARK_MAIN();
