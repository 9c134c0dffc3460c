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

#include "trajnet/nn/layers.hpp"
#include "trajnet/rng.hpp"

using namespace trajnet;

namespace {

SignalTensor random_tensor(int c, int t, Rng& rng) {
  std::vector<double> v(static_cast<std::size_t>(c) * t);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return SignalTensor::from_raw(c, t, std::move(v));
}

void BM_Conv1dForward(benchmark::State& state) {
  const int cin = static_cast<int>(state.range(0));
  const int cout = static_cast<int>(state.range(1));
  const int t = static_cast<int>(state.range(2));
  const int w = 3;
  Rng rng(7);
  const SignalTensor x = random_tensor(cin, t, rng);
  FilterBank f(cin, w, cout);
  for (double& v : f.weights()) v = rng.uniform(-0.1, 0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nn::conv1d_forward(x, f));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cin) *
                          cout * w * t);
}
BENCHMARK(BM_Conv1dForward)
    ->Args({12, 64, 200})
    ->Args({64, 128, 100})
    ->Args({256, 512, 25})
    ->Args({512, 512, 13});

void BM_MaxPool(benchmark::State& state) {
  Rng rng(7);
  const SignalTensor x = random_tensor(128, 200, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nn::maxpool_forward(x, 2));
  }
}
BENCHMARK(BM_MaxPool);

void BM_SequentialForwardBackward(benchmark::State& state) {
  nn::ParamStore store;
  const std::vector<nn::LayerSpec> specs = {
      nn::LayerSpec::conv(64, 5),  nn::LayerSpec::relu(), nn::LayerSpec::maxpool(2),
      nn::LayerSpec::conv(128, 3), nn::LayerSpec::relu(), nn::LayerSpec::maxpool(2),
      nn::LayerSpec::flatten(),    nn::LayerSpec::fc(30)};
  nn::Sequential net("bench", specs, {12, 200, false}, store);
  Rng rng(7);
  net.init_weights(store, rng);
  const SignalTensor x = random_tensor(12, 200, rng);
  nn::Tape tape;
  const SignalTensor dout = random_tensor(30, 1, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(net.forward(x, store, &tape));
    store.zero_grad();
    benchmark::DoNotOptimize(net.backward(dout, tape, store, store.grads()));
  }
}
BENCHMARK(BM_SequentialForwardBackward);

}  // namespace
