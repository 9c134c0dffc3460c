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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace trajnet::nn {

class ParamStore;

/// Index of one named weight array inside a ParamStore.
using ParamHandle = std::size_t;

/// Gradient accumulator shaped like a ParamStore. The store owns one
/// canonical buffer; batch-parallel workers each accumulate into their own
/// and the buffers are reduced in a fixed order.
class GradBuffer {
 public:
  GradBuffer() = default;
  explicit GradBuffer(const ParamStore& store);

  std::span<double> grads(ParamHandle h) { return entries_[h]; }
  std::span<const double> grads(ParamHandle h) const { return entries_[h]; }

  void zero();
  /// this += other, entry by entry in handle order.
  void add(const GradBuffer& other);
  void scale(double s);
  std::size_t entry_count() const { return entries_.size(); }

 private:
  friend class ParamStore;
  std::vector<std::vector<double>> entries_;
};

/// Ordered collection of named weight arrays plus matching gradients.
/// Iteration order is insertion order everywhere (init, SGD, checkpoints),
/// which is what makes runs bit-reproducible.
class ParamStore {
 public:
  ParamHandle add(std::string name, std::size_t size);

  std::size_t entry_count() const { return names_.size(); }
  const std::string& name(ParamHandle h) const { return names_[h]; }
  std::size_t size(ParamHandle h) const { return weights_[h].size(); }
  std::size_t total_params() const;

  std::span<double> weights(ParamHandle h) { return weights_[h]; }
  std::span<const double> weights(ParamHandle h) const { return weights_[h]; }

  GradBuffer& grads() { return grads_; }
  const GradBuffer& grads() const { return grads_; }
  std::span<double> grads(ParamHandle h) { return grads_.grads(h); }
  std::span<const double> grads(ParamHandle h) const { return grads_.grads(h); }

  void zero_grad() { grads_.zero(); }
  /// Adds an external accumulator into the canonical gradients.
  void accumulate(const GradBuffer& other) { grads_.add(other); }

  /// Deep copy of all weight arrays (best-checkpoint snapshots).
  std::vector<std::vector<double>> snapshot_weights() const { return weights_; }
  void restore_weights(const std::vector<std::vector<double>>& snap);

  bool all_weights_finite() const;

 private:
  friend class GradBuffer;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> weights_;
  GradBuffer grads_;
};

}  // namespace trajnet::nn
