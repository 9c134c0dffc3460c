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

#include "trajnet/nn/optim.hpp"

#include "trajnet/errors.hpp"

namespace trajnet::nn {

SgdOptimizer::SgdOptimizer(const ParamStore& store, SgdConfig cfg) : cfg_(cfg) {
  if (!(cfg.lr > 0.0)) throw InvalidArgument("sgd: lr must be > 0");
  if (cfg.momentum < 0.0 || cfg.momentum >= 1.0) {
    throw InvalidArgument("sgd: momentum must be in [0, 1)");
  }
  velocity_.reserve(store.entry_count());
  for (ParamHandle h = 0; h < store.entry_count(); ++h) {
    velocity_.emplace_back(store.size(h), 0.0);
  }
}

void SgdOptimizer::step(ParamStore& store) {
  if (velocity_.size() != store.entry_count()) {
    throw InvalidArgument("sgd: store does not match optimizer");
  }
  for (ParamHandle h = 0; h < store.entry_count(); ++h) {
    auto w = store.weights(h);
    auto g = store.grads(h);
    auto& v = velocity_[h];
    for (std::size_t i = 0; i < w.size(); ++i) {
      v[i] = cfg_.momentum * v[i] + g[i];
      w[i] -= cfg_.lr * v[i];
    }
  }
}

}  // namespace trajnet::nn
