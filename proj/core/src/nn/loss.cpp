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

#include "trajnet/nn/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "trajnet/errors.hpp"

namespace trajnet::nn {

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) throw InvalidArgument("softmax: empty logits");
  const double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - mx);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

LossWeights LossWeights::uniform(int num_classes) {
  return LossWeights{std::vector<double>(num_classes, 1.0)};
}

void LossWeights::validate(int num_classes) const {
  if (static_cast<int>(w.size()) != num_classes) {
    throw InvalidArgument("loss weights: got " + std::to_string(w.size()) +
                          " weights for " + std::to_string(num_classes) +
                          " classes");
  }
  for (double v : w) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidArgument("loss weights: every weight must be finite and > 0");
    }
  }
}

double weighted_cross_entropy(std::span<const double> probs, int label,
                              const LossWeights& weights) {
  if (label < 0 || label >= static_cast<int>(probs.size())) {
    throw InvalidArgument("weighted_cross_entropy: label " +
                          std::to_string(label) + " out of range");
  }
  if (weights.w.size() != probs.size()) {
    throw InvalidArgument("weighted_cross_entropy: weight count mismatch");
  }
  return weights[label] * -std::log(probs[label]);
}

std::vector<double> weighted_ce_logit_grad(std::span<const double> probs,
                                           int label,
                                           const LossWeights& weights) {
  if (label < 0 || label >= static_cast<int>(probs.size())) {
    throw InvalidArgument("weighted_ce_logit_grad: label out of range");
  }
  std::vector<double> g(probs.begin(), probs.end());
  g[label] -= 1.0;
  const double w = weights[label];
  for (double& v : g) v *= w;
  return g;
}

}  // namespace trajnet::nn
