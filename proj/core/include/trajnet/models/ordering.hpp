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

#include <vector>

#include "trajnet/data/dataset.hpp"

namespace trajnet::models {

/// Permutation of person slots with the key person first and the rest by
/// ascending spatial proximity to the key.
struct PersonOrdering {
  std::vector<int> order;

  int key() const { return order.front(); }
  bool operator==(const PersonOrdering&) const = default;
};

/// Ranks the sample's persons by Euclidean distance to the key person,
/// measured at the window's center frame ((t-1)/2). A person absent at the
/// center frame is measured at its nearest present frame (earlier frame on
/// a tie); fully-absent persons rank last. Distance ties break toward the
/// smaller slot index. Throws InvalidArgument if the key is fully absent.
PersonOrdering proximity_order(const data::TrajectorySample& sample, int key);

/// Player order for the stacked net: ascending mean Euclidean distance to
/// the ball over the frames past the zero pad. Ties break on the distance
/// at the first unpadded frame, then on the slot index. The ball itself is
/// always channel 0 and is not part of this permutation.
std::vector<int> ball_proximity_order(const data::PossessionSample& sample);

}  // namespace trajnet::models
