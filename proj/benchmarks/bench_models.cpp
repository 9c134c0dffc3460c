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

#include "trajnet/data/generator.hpp"
#include "trajnet/models/checkpoint.hpp"
#include "trajnet/nn/loss.hpp"

using namespace trajnet;

namespace {

void BM_SharedCompareForward(benchmark::State& state) {
  const auto ds = data::generate_events(11, 4);
  models::SharedCompareNet net(models::SharedCompareConfig::defaults(), 3);
  const auto& s = ds.samples[0];
  const auto ord = models::proximity_order(s, s.key);
  for (auto _ : state) {
    benchmark::DoNotOptimize(net.forward(s, ord));
  }
}
BENCHMARK(BM_SharedCompareForward);

void BM_SharedCompareTrainStep(benchmark::State& state) {
  const auto ds = data::generate_events(11, 4);
  models::SharedCompareNet net(models::SharedCompareConfig::defaults(), 3);
  const auto& s = ds.samples[0];
  const auto ord = models::proximity_order(s, s.key);
  const auto lw = nn::LossWeights::uniform(6);
  models::SharedCompareNet::Trace trace;
  for (auto _ : state) {
    net.params().zero_grad();
    benchmark::DoNotOptimize(
        net.forward_backward(s, ord, s.label, lw, net.params().grads(), trace));
  }
}
BENCHMARK(BM_SharedCompareTrainStep);

void BM_StackedForward(benchmark::State& state) {
  const auto ds =
      data::generate_possessions(11, data::default_profiles(2), 2, {});
  models::StackedNet net(models::StackedConfig::five_conv(2), 3);
  const auto& s = ds.samples[0];
  for (auto _ : state) {
    benchmark::DoNotOptimize(net.forward(s));
  }
}
BENCHMARK(BM_StackedForward);

void BM_StackedTrainStep(benchmark::State& state) {
  const auto ds =
      data::generate_possessions(11, data::default_profiles(2), 2, {});
  models::StackedNet net(models::StackedConfig::five_conv(2), 3);
  const auto& s = ds.samples[0];
  const auto lw = nn::LossWeights::uniform(2);
  models::StackedNet::Trace trace;
  for (auto _ : state) {
    net.params().zero_grad();
    benchmark::DoNotOptimize(
        net.forward_backward(s, s.team, lw, net.params().grads(), trace));
  }
}
BENCHMARK(BM_StackedTrainStep);

}  // namespace
