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

#include <numeric>

#include "readrank/context.h"
#include "readrank/pairmodel.h"
#include "readrank/random.h"

namespace readrank {
namespace {

// d random dense features per sentence; aoa_avg carries the difficulty.
struct Synthetic {
  PairMatrix matrix;
  CountedRows rows;
};

Synthetic synthetic(int n_sentences, int n_pairs, int d) {
  Rng rng(5);
  FeatureStore store;
  std::vector<double> difficulty(n_sentences);
  for (int i = 0; i < n_sentences; ++i) {
    difficulty[i] = rng.normal();
    FeatureVector v;
    v.add("aoa_avg", FeatureGroup::kAoA, difficulty[i]);
    for (int k = 0; k < d; ++k) {
      v.add("syn:f" + std::to_string(k), FeatureGroup::kSynTree, rng.normal());
    }
    store["s" + std::to_string(i)] = std::move(v);
  }
  std::vector<JudgmentRecord> js;
  for (int p = 0; p < n_pairs; ++p) {
    const auto a = rng.uniform_int(n_sentences);
    auto b = rng.uniform_int(n_sentences - 1);
    if (b >= a) ++b;
    for (int w = 0; w < 7; ++w) {
      JudgmentRecord j;
      j.pair_id = "p" + std::to_string(p);
      j.sent_a = "s" + std::to_string(a);
      j.sent_b = "s" + std::to_string(b);
      j.worker_id = "w" + std::to_string(w);
      j.choice = difficulty[a] - difficulty[b] + rng.normal(0.0, 0.6) > 0 ? Choice::kA : Choice::kB;
      js.push_back(j);
    }
  }
  Synthetic out;
  out.matrix = build_pair_matrix(js, store, false);
  std::vector<size_t> all(out.matrix.examples.size());
  std::iota(all.begin(), all.end(), size_t{0});
  out.rows = count_rows(out.matrix, all);
  return out;
}

void BM_ForestTrain(benchmark::State& state) {
  const auto data = synthetic(120, 300, static_cast<int>(state.range(0)));
  ForestParams params;
  params.n_trees = 200;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rf_train(data.matrix, data.rows, {}, params, 1));
  }
  state.counters["columns"] = static_cast<double>(data.matrix.names.size());
}
BENCHMARK(BM_ForestTrain)->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_LogRegTrain(benchmark::State& state) {
  const auto data = synthetic(120, 300, 20);
  const std::vector<std::string> names{"A:aoa_avg", "A:syn:f0", "A:syn:f1",
                                       "B:aoa_avg", "B:syn:f0", "B:syn:f1"};
  for (auto _ : state) {
    benchmark::DoNotOptimize(logreg_train(data.matrix, data.rows, names, LogRegOptions{}));
  }
}
BENCHMARK(BM_LogRegTrain)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace readrank

BENCHMARK_MAIN();
