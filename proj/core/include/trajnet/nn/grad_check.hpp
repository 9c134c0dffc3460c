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
#include <functional>
#include <string>
#include <vector>

#include "trajnet/nn/param_store.hpp"

namespace trajnet::nn {

/// Recomputes the scalar loss at the store's current weights. When
/// `selection_signature` is non-null the callee must also report a hash of
/// every data-dependent branch taken (pool argmax choices, ReLU gates); the
/// checker uses it to discard finite differences that crossed a kink.
/// `base_tie` (optional) reports whether any pooling window had an exact tie.
using LossProbe =
    std::function<double(std::uint64_t* selection_signature, int* pool_ties)>;

struct GradCheckOptions {
  double epsilon = 1e-5;
  /// Per weight-array cap on how many parameters get probed (0 = all).
  /// Sampled indices are drawn from `sample_seed`.
  std::size_t max_params_per_entry = 0;
  std::uint64_t sample_seed = 1;
};

struct GradCheckEntry {
  std::string name;
  std::size_t checked = 0;
  std::size_t kinked = 0;  // excluded: perturbed passes disagreed on a branch
  double max_rel_err = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double max_rel_err = 0.0;    // over all non-kinked probes
  std::size_t checked = 0;
  std::size_t kinked = 0;
  bool base_tie = false;       // exact pooling tie at the unperturbed point

  /// Kinked probes and runs whose base point sits on a pooling tie are
  /// excluded from the decision.
  bool passed(double tol) const { return base_tie || max_rel_err < tol; }
};

/// Central-difference check: for each probed weight, compares the analytic
/// gradient against (L(w+eps) - L(w-eps)) / (2 eps) with relative error
/// |a - n| / max(|a|, |n|, 1e-8). Weights are restored exactly afterwards.
GradCheckReport gradient_check(const LossProbe& loss, ParamStore& store,
                               const GradBuffer& analytic,
                               const GradCheckOptions& opts = {});

}  // namespace trajnet::nn
