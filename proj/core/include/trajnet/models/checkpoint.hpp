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
#include <variant>

#include "trajnet/models/shared_compare.hpp"
#include "trajnet/models/stacked.hpp"

namespace trajnet::models {

/// Either trained architecture, as loaded from a checkpoint.
using AnyModel = std::variant<SharedCompareNet, StackedNet>;

/// Binary container: magic "TJNC", format-version integer, model kind, init
/// seed, the architecture config as an embedded JSON string, then every
/// weight array (name, count, raw little-endian doubles) in store order.
/// Write-then-read round-trips weights bit-exactly.
void save_checkpoint(const std::string& path, const SharedCompareNet& net,
                     std::uint64_t seed);
void save_checkpoint(const std::string& path, const StackedNet& net,
                     std::uint64_t seed);

struct LoadedCheckpoint {
  AnyModel model;
  std::uint64_t seed = 0;
};

LoadedCheckpoint load_checkpoint(const std::string& path);

}  // namespace trajnet::models
