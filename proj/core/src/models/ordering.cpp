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

#include "trajnet/models/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "trajnet/errors.hpp"

namespace trajnet::models {

namespace {

/// Position at `frame`, falling back to the nearest present frame (the
/// earlier one on a tie). Returns false if the agent is never present.
bool resolve_position(const data::AgentSeries& a, int frame, double* px,
                      double* py) {
  const int t = static_cast<int>(a.x.size());
  if (a.present_at(frame)) {
    *px = a.x[frame];
    *py = a.y[frame];
    return true;
  }
  for (int d = 1; d < t; ++d) {
    const int lo = frame - d;
    const int hi = frame + d;
    if (lo >= 0 && a.present_at(lo)) {
      *px = a.x[lo];
      *py = a.y[lo];
      return true;
    }
    if (hi < t && a.present_at(hi)) {
      *px = a.x[hi];
      *py = a.y[hi];
      return true;
    }
  }
  return false;
}

}  // namespace

PersonOrdering proximity_order(const data::TrajectorySample& sample, int key) {
  const int np = static_cast<int>(sample.persons.size());
  if (key < 0 || key >= np) {
    throw InvalidArgument("proximity_order: key slot " + std::to_string(key) +
                          " out of range");
  }
  const int t = static_cast<int>(sample.persons[key].x.size());
  const int center = (t - 1) / 2;

  double kx, ky;
  if (!resolve_position(sample.persons[key], center, &kx, &ky)) {
    throw InvalidArgument("proximity_order: key person is fully absent");
  }

  std::vector<double> dist2(np, std::numeric_limits<double>::infinity());
  for (int p = 0; p < np; ++p) {
    if (p == key) continue;
    double px, py;
    if (resolve_position(sample.persons[p], center, &px, &py)) {
      const double dx = px - kx, dy = py - ky;
      dist2[p] = dx * dx + dy * dy;  // fully absent stays +inf, ranking last
    }
  }

  PersonOrdering ord;
  ord.order.reserve(np);
  ord.order.push_back(key);
  std::vector<int> rest;
  for (int p = 0; p < np; ++p) {
    if (p != key) rest.push_back(p);
  }
  std::sort(rest.begin(), rest.end(), [&](int a, int b) {
    if (dist2[a] != dist2[b]) return dist2[a] < dist2[b];
    return a < b;
  });
  ord.order.insert(ord.order.end(), rest.begin(), rest.end());
  return ord;
}

std::vector<int> ball_proximity_order(const data::PossessionSample& sample) {
  const int np = static_cast<int>(sample.players.size());
  const int t = static_cast<int>(sample.ball.x.size());
  const int pad = data::possession_pad_length(sample);

  std::vector<double> mean_dist(np, std::numeric_limits<double>::infinity());
  std::vector<double> first_dist(np, std::numeric_limits<double>::infinity());
  if (pad < t) {
    for (int p = 0; p < np; ++p) {
      double acc = 0.0;
      for (int f = pad; f < t; ++f) {
        const double dx = sample.players[p].x[f] - sample.ball.x[f];
        const double dy = sample.players[p].y[f] - sample.ball.y[f];
        acc += std::sqrt(dx * dx + dy * dy);
      }
      mean_dist[p] = acc / (t - pad);
      const double fx = sample.players[p].x[pad] - sample.ball.x[pad];
      const double fy = sample.players[p].y[pad] - sample.ball.y[pad];
      first_dist[p] = fx * fx + fy * fy;
    }
  }

  std::vector<int> order(np);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (mean_dist[a] != mean_dist[b]) return mean_dist[a] < mean_dist[b];
    if (first_dist[a] != first_dist[b]) return first_dist[a] < first_dist[b];
    return a < b;
  });
  return order;
}

}  // namespace trajnet::models
