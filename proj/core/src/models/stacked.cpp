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

#include "trajnet/models/stacked.hpp"

#include "trajnet/errors.hpp"
#include "trajnet/models/ordering.hpp"

namespace trajnet::models {

StackedNet::StackedNet(StackedConfig cfg, std::uint64_t init_seed)
    : cfg_(std::move(cfg)) {
  if (cfg_.np < 1) throw ConfigError("stacked: np must be >= 1");
  if (cfg_.num_classes < 2) throw ConfigError("stacked: num_classes must be >= 2");
  const nn::Shape in{cfg_.input_channels(), cfg_.t, false};
  net_ = nn::Sequential("stacked", stacked_full_layers(cfg_), in, store_);
  Rng rng(init_seed);
  net_.init_weights(store_, rng);
}

SignalTensor StackedNet::stack_input(
    const data::PossessionSample& sample) const {
  if (static_cast<int>(sample.players.size()) != cfg_.np) {
    throw ShapeError("possession has " + std::to_string(sample.players.size()) +
                     " players, model expects np=" + std::to_string(cfg_.np));
  }
  if (cfg_.includes_ball &&
      static_cast<int>(sample.ball.x.size()) != cfg_.t) {
    throw ShapeError("ball track missing or wrong length (" +
                     std::to_string(sample.ball.x.size()) + " frames, model expects " +
                     std::to_string(cfg_.t) + ")");
  }
  for (const auto& p : sample.players) {
    if (static_cast<int>(p.x.size()) != cfg_.t) {
      throw ShapeError("player series length " + std::to_string(p.x.size()) +
                       " != model t=" + std::to_string(cfg_.t));
    }
  }
  const std::vector<int> order = ball_proximity_order(sample);
  std::vector<SignalTensor> parts;
  parts.reserve(cfg_.np + 1);
  if (cfg_.includes_ball) parts.push_back(sample.ball.to_tensor());
  for (int p : order) parts.push_back(sample.players[p].to_tensor());
  return stack_channels(parts);
}

std::vector<double> StackedNet::forward(const data::PossessionSample& sample,
                                        Trace* trace) const {
  const SignalTensor in = stack_input(sample);
  Trace local;
  Trace& tr = trace ? *trace : local;
  const SignalTensor logits = net_.forward(in, store_, &tr.tape);
  tr.probs = nn::softmax(logits.values());
  return tr.probs;
}

double StackedNet::forward_backward(const data::PossessionSample& sample,
                                    int label, const nn::LossWeights& weights,
                                    nn::GradBuffer& grads,
                                    Trace& trace) const {
  const std::vector<double> probs = forward(sample, &trace);
  const double loss = nn::weighted_cross_entropy(probs, label, weights);
  const std::vector<double> dlogits =
      nn::weighted_ce_logit_grad(probs, label, weights);
  net_.backward(SignalTensor::from_raw(cfg_.num_classes, 1, dlogits),
                trace.tape, store_, grads);
  return loss;
}

}  // namespace trajnet::models
