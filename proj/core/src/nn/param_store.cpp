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

#include "trajnet/nn/param_store.hpp"

#include <algorithm>
#include <cmath>

#include "trajnet/errors.hpp"

namespace trajnet::nn {

GradBuffer::GradBuffer(const ParamStore& store) {
  entries_.reserve(store.entry_count());
  for (ParamHandle h = 0; h < store.entry_count(); ++h) {
    entries_.emplace_back(store.size(h), 0.0);
  }
}

void GradBuffer::zero() {
  for (auto& e : entries_) std::fill(e.begin(), e.end(), 0.0);
}

void GradBuffer::add(const GradBuffer& other) {
  if (other.entries_.size() != entries_.size()) {
    throw InvalidArgument("GradBuffer::add: entry count mismatch");
  }
  for (std::size_t h = 0; h < entries_.size(); ++h) {
    auto& dst = entries_[h];
    const auto& src = other.entries_[h];
    if (src.size() != dst.size()) {
      throw InvalidArgument("GradBuffer::add: entry size mismatch");
    }
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  }
}

void GradBuffer::scale(double s) {
  for (auto& e : entries_) {
    for (double& g : e) g *= s;
  }
}

ParamHandle ParamStore::add(std::string name, std::size_t size) {
  names_.push_back(std::move(name));
  weights_.emplace_back(size, 0.0);
  grads_.entries_.emplace_back(size, 0.0);
  return names_.size() - 1;
}

std::size_t ParamStore::total_params() const {
  std::size_t n = 0;
  for (const auto& w : weights_) n += w.size();
  return n;
}

void ParamStore::restore_weights(const std::vector<std::vector<double>>& snap) {
  if (snap.size() != weights_.size()) {
    throw InvalidArgument("ParamStore::restore_weights: entry count mismatch");
  }
  for (std::size_t h = 0; h < snap.size(); ++h) {
    if (snap[h].size() != weights_[h].size()) {
      throw InvalidArgument("ParamStore::restore_weights: size mismatch");
    }
    weights_[h] = snap[h];
  }
}

bool ParamStore::all_weights_finite() const {
  for (const auto& w : weights_) {
    for (double x : w) {
      if (!std::isfinite(x)) return false;
    }
  }
  return true;
}

}  // namespace trajnet::nn
