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

#include <cstdint>
#include <vector>

#include "trajnet/data/dataset.hpp"
#include "trajnet/models/config.hpp"
#include "trajnet/nn/layers.hpp"
#include "trajnet/nn/loss.hpp"

namespace trajnet::models {

/// Group-identification network: ball plus all players stacked channel-wise
/// (ball first, players by ascending mean distance to the ball), one conv
/// trunk, flatten, optional fc tail, softmax head.
class StackedNet {
 public:
  struct Trace {
    nn::Tape tape;
    std::vector<double> probs;
  };

  StackedNet(StackedConfig cfg, std::uint64_t init_seed);

  const StackedConfig& config() const { return cfg_; }
  nn::ParamStore& params() { return store_; }
  const nn::ParamStore& params() const { return store_; }
  std::size_t param_count() const { return store_.total_params(); }

  /// Stacked input tensor for a sample, channels ordered canonically.
  /// Rejects wrong player counts / series lengths with ShapeError.
  SignalTensor stack_input(const data::PossessionSample& sample) const;

  std::vector<double> forward(const data::PossessionSample& sample,
                              Trace* trace = nullptr) const;

  double forward_backward(const data::PossessionSample& sample, int label,
                          const nn::LossWeights& weights,
                          nn::GradBuffer& grads, Trace& trace) const;

 private:
  StackedConfig cfg_;
  nn::ParamStore store_;
  nn::Sequential net_;
};

}  // namespace trajnet::models
