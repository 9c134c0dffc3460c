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

#include <span>
#include <vector>

namespace trajnet::nn {

/// Softmax with max-subtraction: invariant to a common shift of the logits
/// and overflow-safe for large values. Output sums to 1 and every entry is
/// in (0, 1) barring underflow of extreme logits.
std::vector<double> softmax(std::span<const double> logits);

/// Per-class positive loss weights, indexed by class id.
struct LossWeights {
  std::vector<double> w;

  static LossWeights uniform(int num_classes);
  /// Throws InvalidArgument unless every weight is finite and > 0 and the
  /// count matches.
  void validate(int num_classes) const;
  double operator[](int c) const { return w[c]; }
};

/// w[label] * (-ln probs[label]). Batch loss is the mean over samples.
double weighted_cross_entropy(std::span<const double> probs, int label,
                              const LossWeights& weights);

/// Gradient of weighted_cross_entropy(softmax(z), label) with respect to the
/// logits z: w[label] * (probs - onehot(label)).
std::vector<double> weighted_ce_logit_grad(std::span<const double> probs,
                                           int label,
                                           const LossWeights& weights);

}  // namespace trajnet::nn
