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
#include <string>
#include <vector>

#include "trajnet/nn/param_store.hpp"
#include "trajnet/rng.hpp"
#include "trajnet/tensor.hpp"

namespace trajnet::nn {

enum class LayerKind { Conv1d, Relu, MaxPool, Flatten, FullyConnected };

const char* layer_kind_name(LayerKind k);
LayerKind layer_kind_from_name(const std::string& name);

/// Declarative description of one layer. A network is a list of these,
/// type-checked against the input shape before any weights are allocated.
struct LayerSpec {
  LayerKind kind = LayerKind::Relu;
  int filters = 0;        // conv1d: number of filters M
  int width = 0;          // conv1d: filter size W
  int window = 0;         // maxpool: window == stride S
  int out_size = 0;       // fully_connected: output dimension
  bool use_bias = false;  // conv1d / fully_connected

  static LayerSpec conv(int filters, int width, bool use_bias = false);
  static LayerSpec relu();
  static LayerSpec maxpool(int window);
  static LayerSpec flatten();
  static LayerSpec fc(int out_size, bool use_bias = false);

  bool operator==(const LayerSpec&) const = default;
};

/// (channels, length). Flat vectors are (n, 1); `flat` records that a
/// Flatten has happened, which gates what may follow.
struct Shape {
  int channels = 0;
  int length = 0;
  bool flat = false;

  bool operator==(const Shape&) const = default;
};

/// Output shape of `spec` on input `in`; throws ConfigError if the layer
/// cannot accept that shape. Conv and pool keep `length >= 1` inputs; pool
/// output length is ceil(length / S).
Shape infer_output_shape(const Shape& in, const LayerSpec& spec);

/// Trainable scalar count of one layer at the given input shape.
std::size_t layer_param_count(const Shape& in, const LayerSpec& spec);

/// Validates a whole layer list; returns the final shape.
Shape infer_network_shape(Shape in, const std::vector<LayerSpec>& specs);

std::size_t network_param_count(Shape in, const std::vector<LayerSpec>& specs);

/// Per-invocation forward cache consumed by the backward pass. Holding the
/// caches outside the network keeps forward/backward const and lets one
/// parameter set run many times inside a single sample (weight sharing).
struct LayerCache {
  SignalTensor input;        // conv/fc/relu input
  std::vector<int> argmax;   // maxpool winner per output cell
};

struct Tape {
  std::vector<LayerCache> layers;
  int pool_ties = 0;  // pooling windows whose max was attained twice
  /// When set, forward folds every pool argmax and ReLU gate bit into
  /// `signature`; the gradient checker compares signatures of the two
  /// perturbed passes to spot finite differences that straddle a kink.
  bool record_signature = false;
  std::uint64_t signature = 0;
};

// Layer primitives. Conv uses stride 1 with an implicit right-side zero pad
// of width-1 frames, so output length equals input length:
//   out[k][t] = bias[k] + sum_i sum_j x[i][t+j] * f(i, j, k),  x[i][u >= T] = 0

SignalTensor conv1d_forward(const SignalTensor& x, const FilterBank& f,
                            std::span<const double> bias = {});
/// Same kernel on borrowed weights (filter-major layout, no copy).
SignalTensor conv1d_forward(const SignalTensor& x, int width, int filters,
                            std::span<const double> weights,
                            std::span<const double> bias = {});
SignalTensor relu_forward(const SignalTensor& x);

struct PoolResult {
  SignalTensor output;
  std::vector<int> argmax;  // winning input index per output cell
  int ties = 0;             // cells whose max value was attained more than once
};
/// Windowed max with window == stride == S; a final partial window pools
/// over the remaining frames only. Ties resolve to the smallest index.
PoolResult maxpool_forward(const SignalTensor& x, int window);

/// (C, T) -> (C*T, 1); channel-major flattening.
SignalTensor flatten_forward(const SignalTensor& x);

/// (n, 1) -> (m, 1) with weights stored row-major (n rows of m).
SignalTensor fc_forward(const SignalTensor& x, std::span<const double> weights,
                        int out_size, std::span<const double> bias = {});

/// A type-checked layer list bound to weight arrays in a ParamStore.
/// Instances hold handles only; weights stay in the store so several
/// Sequentials can share one store and one optimizer.
class Sequential {
 public:
  Sequential() = default;
  /// Registers parameter arrays (named "<prefix>/<idx>.<kind>.w|b") in
  /// store; throws ConfigError if the list does not type-check on `in`.
  Sequential(const std::string& prefix, std::vector<LayerSpec> specs, Shape in,
             ParamStore& store);

  /// Glorot-uniform init of this network's weights, biases zero. Draw order
  /// is layer order then storage order.
  void init_weights(ParamStore& store, Rng& rng) const;

  SignalTensor forward(const SignalTensor& x, const ParamStore& store,
                       Tape* tape = nullptr) const;
  /// Accumulates parameter gradients into `grads` and returns d(loss)/d(input).
  /// Requires the tape of the matching forward call.
  SignalTensor backward(const SignalTensor& d_out, const Tape& tape,
                        const ParamStore& store, GradBuffer& grads) const;

  const std::vector<LayerSpec>& specs() const { return specs_; }
  Shape in_shape() const { return in_shape_; }
  Shape out_shape() const { return out_shape_; }
  std::size_t param_count() const;

 private:
  std::vector<LayerSpec> specs_;
  std::vector<ParamHandle> weight_handles_;  // per layer; npos if none
  std::vector<ParamHandle> bias_handles_;
  std::vector<Shape> boundary_shapes_;  // size specs_+1
  Shape in_shape_, out_shape_;
  const ParamStore* bound_store_ = nullptr;  // registration-time identity check

  static constexpr ParamHandle kNone = static_cast<ParamHandle>(-1);
};

}  // namespace trajnet::nn
