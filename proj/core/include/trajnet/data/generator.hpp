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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "trajnet/data/dataset.hpp"

namespace trajnet::data {

/// Event classes in canonical id order. The stock loss weights
/// (0.07, 0.6, 1, 0.4, 0.2, 0.7) index this order.
inline constexpr std::array<const char*, 6> kEventClasses = {
    "pass", "dump_out", "dump_in", "shot", "carry", "puck_protection"};

std::vector<double> default_event_weights();

struct EventGenOptions {
  int np = 5;
  int t = 16;
  int games = 8;
  double noise_std = 0.0;     // per-frame positional jitter, feet
  double absent_prob = 0.05;  // chance of a tracking gap in a non-key slot
  /// Distribution over the 6 event classes; empty = default imbalanced mix
  /// (inverse of the stock loss weights, pass-heavy).
  std::vector<double> class_mix;

  static std::vector<double> default_mix();
};

/// Synthetic rink events: each class is realized by a distinct kinematic
/// motif around a key skater (velocity hand-off for a pass, burst toward or
/// away from a zone boundary for dump-ins/outs, goal-directed acceleration
/// for shots, steady glide for carries, tight orbit with a shadowing
/// opponent for puck protection). Labels come from the generating motif.
/// Class counts follow class_mix exactly (largest-remainder apportionment);
/// output is byte-identical for identical (seed, options).
EventDataset generate_events(std::uint64_t seed, int n_samples,
                             const EventGenOptions& opts = {});

struct MotifStep {
  int formation = 0;  // index into the shared formation template bank
  int ball_slot = 0;  // which player holds the ball during the step
  bool operator==(const MotifStep&) const = default;
};

/// Per-team generation parameters. Two profiles may share every
/// distribution parameter as long as at least one motif differs.
struct StyleProfile {
  std::string name;
  double lane_angle = 0.0;  // attack-direction bias, radians
  double speed_mean = 16.0; // ft/s
  double speed_std = 2.5;
  double pass_period = 1.6; // seconds between ball movements
  double spread = 11.0;     // formation spread, feet
  std::vector<std::vector<MotifStep>> motifs;
};

/// True when the two profiles are indistinguishable (everything except the
/// name matches).
bool same_style(const StyleProfile& a, const StyleProfile& b);

/// Crafted set of up to 6 team styles arranged as twin pairs: within a pair
/// the simple statistics (lanes, speeds, spreads) match and only the motif
/// sequencing or tempo differs, so telling twins apart needs long-range
/// temporal context.
std::vector<StyleProfile> default_profiles(int n);

struct TeamGenOptions {
  int np = 5;
  int t = 200;                  // sampled frames per possession
  int possessions_per_game = 20;
  double noise_std = 0.3;       // native-frame jitter, feet
};

/// Synthetic NBA-style possessions at a native 25 Hz, run through the same
/// half-rate sampling and crop/pad path as real track tables. Possession
/// lengths vary so both the crop and the pad branch occur. Exactly
/// n_per_team samples per profile; byte-identical for identical inputs.
TeamDataset generate_possessions(std::uint64_t seed,
                                 const std::vector<StyleProfile>& profiles,
                                 int n_per_team,
                                 const TeamGenOptions& opts = {});

}  // namespace trajnet::data
