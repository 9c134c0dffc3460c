/*
 * Copyright 2026 The trajnet authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>

#include "trajnet/eval/metrics.hpp"
#include "trajnet/rng.hpp"

using namespace trajnet;

namespace {

void BM_AveragePrecision(benchmark::State& state) {
  Rng rng(5);
  std::vector<eval::ScoredItem> items(state.range(0));
  for (auto& it : items) {
    it.score = rng.uniform(0.0, 1.0);
    it.positive = rng.uniform(0.0, 1.0) < 0.2;
  }
  items.front().positive = true;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval::average_precision(items));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AveragePrecision)->Arg(1000)->Arg(100000);

}  // namespace
