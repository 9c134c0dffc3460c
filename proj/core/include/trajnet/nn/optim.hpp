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

#pragma once

#include <vector>

#include "trajnet/nn/param_store.hpp"

namespace trajnet::nn {

struct SgdConfig {
  double lr = 0.01;
  double momentum = 0.9;  // in [0, 1)
};

/// SGD with momentum: v <- momentum*v + grad, w <- w - lr*v.
/// Update order is ParamStore entry order; velocity starts at zero.
class SgdOptimizer {
 public:
  SgdOptimizer(const ParamStore& store, SgdConfig cfg);

  /// One step from the store's current gradients. Gradients are left
  /// untouched; call store.zero_grad() before the next accumulation.
  void step(ParamStore& store);

  const SgdConfig& config() const { return cfg_; }

 private:
  SgdConfig cfg_;
  std::vector<std::vector<double>> velocity_;
};

}  // namespace trajnet::nn
