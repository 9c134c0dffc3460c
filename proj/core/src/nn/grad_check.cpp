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

#include "trajnet/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trajnet/errors.hpp"
#include "trajnet/rng.hpp"

namespace trajnet::nn {

GradCheckReport gradient_check(const LossProbe& loss, ParamStore& store,
                               const GradBuffer& analytic,
                               const GradCheckOptions& opts) {
  if (!(opts.epsilon > 0.0)) throw InvalidArgument("gradient_check: eps must be > 0");
  const double eps = opts.epsilon;

  GradCheckReport report;
  {
    int ties = 0;
    loss(nullptr, &ties);
    report.base_tie = ties > 0;
  }

  Rng rng(opts.sample_seed);
  for (ParamHandle h = 0; h < store.entry_count(); ++h) {
    GradCheckEntry entry;
    entry.name = store.name(h);
    const std::size_t n = store.size(h);

    std::vector<std::size_t> indices;
    if (opts.max_params_per_entry > 0 && n > opts.max_params_per_entry) {
      // Sample without replacement; sorted so probes run in storage order.
      std::vector<std::size_t> all(n);
      std::iota(all.begin(), all.end(), 0);
      for (std::size_t i = 0; i < opts.max_params_per_entry; ++i) {
        std::size_t j = static_cast<std::size_t>(
            rng.uniform_int(static_cast<std::int64_t>(i),
                            static_cast<std::int64_t>(n - 1)));
        std::swap(all[i], all[j]);
      }
      indices.assign(all.begin(), all.begin() + opts.max_params_per_entry);
      std::sort(indices.begin(), indices.end());
    } else {
      indices.resize(n);
      std::iota(indices.begin(), indices.end(), 0);
    }

    auto w = store.weights(h);
    const auto g = analytic.grads(h);
    for (std::size_t idx : indices) {
      const double saved = w[idx];
      std::uint64_t sig_plus = 0, sig_minus = 0;
      w[idx] = saved + eps;
      const double lp = loss(&sig_plus, nullptr);
      w[idx] = saved - eps;
      const double lm = loss(&sig_minus, nullptr);
      w[idx] = saved;

      ++entry.checked;
      if (sig_plus != sig_minus) {
        // The two passes routed through different argmax/gate choices; the
        // difference quotient is not a derivative there.
        ++entry.kinked;
        continue;
      }
      const double numeric = (lp - lm) / (2.0 * eps);
      const double a = g[idx];
      const double rel =
          std::fabs(a - numeric) /
          std::max({std::fabs(a), std::fabs(numeric), 1e-8});
      entry.max_rel_err = std::max(entry.max_rel_err, rel);
    }
    report.checked += entry.checked;
    report.kinked += entry.kinked;
    report.max_rel_err = std::max(report.max_rel_err, entry.max_rel_err);
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace trajnet::nn
