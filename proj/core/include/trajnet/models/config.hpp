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

#include <string>
#include <vector>

#include "trajnet/nn/layers.hpp"

namespace trajnet::models {

/// Shared-compare event network. The shared stack runs per person with one
/// weight set; the compare stack runs on channel-concatenated (key, other)
/// pairs; the flattened pair features feed a softmax head.
struct SharedCompareConfig {
  int np = 5;
  int t = 16;
  int num_classes = 6;
  std::vector<nn::LayerSpec> shared_layers;
  std::vector<nn::LayerSpec> compare_layers;
  /// Also run the degenerate (key, key) pair and prepend its feature.
  bool include_self_pair = false;

  int pair_count() const { return include_self_pair ? np : np - 1; }

  /// Stock architecture: shared conv(64,3)+conv(128,3) with one pool, compare
  /// conv(128,3)x2 + conv(256,3) + conv(512,2), pool(2,2) after every
  /// compare conv.
  static SharedCompareConfig defaults(int num_classes = 6);

  bool operator==(const SharedCompareConfig&) const = default;
};

/// Stacked trajectory network for group identification: all members' (and
/// the ball's) coordinate series stacked channel-wise through one conv/pool
/// trunk, then flatten + optional fully-connected tail + softmax head.
struct StackedConfig {
  int np = 5;
  bool includes_ball = true;
  int t = 200;
  int num_classes = 30;
  /// Conv/relu/pool trunk (no flatten/fc; those are appended).
  std::vector<nn::LayerSpec> trunk_layers;
  /// Hidden fully-connected sizes between flatten and the head.
  std::vector<int> fc_tail;

  int input_channels() const { return 2 * (np + (includes_ball ? 1 : 0)); }

  /// The 5conv stock model: filter sizes 5,3,3,3,3 and counts
  /// 64,128,256,512,512 bottom-up, pool(2,2) after every conv.
  static StackedConfig five_conv(int num_classes = 30);

  /// conv stack from parallel filter-count / filter-size lists.
  static StackedConfig conv_stack(std::vector<int> filters,
                                  std::vector<int> widths,
                                  std::vector<int> fc_tail = {},
                                  int num_classes = 30);

  bool operator==(const StackedConfig&) const = default;
};

/// Complete layer list of the stacked net (trunk + flatten + fc tail with
/// ReLU between + class head), type-checked against the input shape.
std::vector<nn::LayerSpec> stacked_full_layers(const StackedConfig& cfg);

std::size_t count_params(const SharedCompareConfig& cfg);
std::size_t count_params(const StackedConfig& cfg);

/// One named architecture variant of a sweep.
struct VariantSpec {
  std::string name;
  StackedConfig cfg;
};

/// 2conv..5conv and 5conv+2fc: first filter size 5, then 3; filter counts
/// double per layer except a fifth layer repeats the fourth; the fc tail
/// uses 1024 neurons.
std::vector<VariantSpec> layer_count_variants(int num_classes = 30);
/// Five-conv models with filter-size rows 3 3 3 2 2 / 5 3 3 3 3 /
/// 7 5 5 3 3 / 9 7 7 5 5 and counts 64,128,256,512,512.
std::vector<VariantSpec> filter_size_variants(int num_classes = 30);
/// Five-conv models with base filter count 16/32/64/128, doubling per layer
/// except the fifth repeats the fourth.
std::vector<VariantSpec> base_filter_variants(int num_classes = 30);

/// Looks up a named sweep preset ("layers", "filter_sizes", "base_filters").
std::vector<VariantSpec> sweep_preset(const std::string& name,
                                      int num_classes = 30);

}  // namespace trajnet::models
