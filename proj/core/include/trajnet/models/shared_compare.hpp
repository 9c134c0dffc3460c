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
#include "trajnet/models/ordering.hpp"
#include "trajnet/nn/layers.hpp"
#include "trajnet/nn/loss.hpp"

namespace trajnet::models {

/// Event-recognition network. One shared conv stack embeds each person's
/// 2 x T trajectory with a single weight set; each (key, other) pair of
/// embeddings is channel-concatenated through the compare stack; the
/// flattened pair features, concatenated in proximity order, feed a
/// fully-connected softmax head.
class SharedCompareNet {
 public:
  /// Forward caches for one sample. Owned by the caller so a frozen net can
  /// run forward/backward concurrently from several threads.
  struct Trace {
    std::vector<nn::Tape> shared_tapes;
    std::vector<nn::Tape> compare_tapes;
    nn::Tape head_tape;
    std::vector<double> probs;

    void set_record_signature(bool on);
    std::uint64_t combined_signature() const;
    int total_pool_ties() const;
  };

  SharedCompareNet(SharedCompareConfig cfg, std::uint64_t init_seed);

  const SharedCompareConfig& config() const { return cfg_; }
  nn::ParamStore& params() { return store_; }
  const nn::ParamStore& params() const { return store_; }
  std::size_t param_count() const { return store_.total_params(); }
  /// Flattened compare-net output size per pair.
  int pair_feature_size() const { return pair_feature_size_; }

  /// Class distribution for a sample under a given person ordering.
  /// Rejects samples whose slot count or series length disagree with the
  /// config (ShapeError).
  std::vector<double> forward(const data::TrajectorySample& sample,
                              const PersonOrdering& ordering,
                              Trace* trace = nullptr) const;

  /// Forward + reverse pass for one sample: accumulates d(loss)/d(weights)
  /// into `grads` and returns the sample loss.
  double forward_backward(const data::TrajectorySample& sample,
                          const PersonOrdering& ordering, int label,
                          const nn::LossWeights& weights,
                          nn::GradBuffer& grads, Trace& trace) const;

  /// Unknown-key inference: every present person is tried as the key and
  /// the resulting distributions are averaged elementwise.
  std::vector<double> predict_unknown_key(
      const data::TrajectorySample& sample) const;

 private:
  void check_sample(const data::TrajectorySample& sample) const;
  std::vector<int> partner_indices() const;

  SharedCompareConfig cfg_;
  nn::ParamStore store_;
  nn::Sequential shared_, compare_, head_;
  int pair_feature_size_ = 0;
};

}  // namespace trajnet::models
