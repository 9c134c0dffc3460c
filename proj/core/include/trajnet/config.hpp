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
#include <optional>
#include <string>
#include <vector>

#include "trajnet/data/dataset.hpp"
#include "trajnet/models/config.hpp"

namespace trajnet {

/// Plain-text key/value file with [sections]; '#' and ';' start comments.
/// Order is preserved; duplicate keys keep the last value.
class IniFile {
 public:
  static IniFile parse_file(const std::string& path);
  static IniFile parse_string(const std::string& text, const std::string& origin);

  std::optional<std::string> get(const std::string& section,
                                 const std::string& key) const;
  bool has_section(const std::string& section) const;
  /// All keys of a section, declaration order.
  std::vector<std::string> keys(const std::string& section) const;

 private:
  struct Entry {
    std::string section, key, value;
  };
  std::vector<Entry> entries_;
  std::vector<std::string> section_order_;
};

/// Resolved run configuration: architecture variant, layer overrides, loss
/// weights, optimizer settings, seed, and split fractions.
struct RunConfig {
  data::Task task = data::Task::Event;

  // [model]
  int np = 5;
  int t = 16;                           // event window (team default: 200)
  std::vector<std::string> classes;     // empty = take from the dataset
  std::string variant = "default";      // team: 5conv, 2conv, ..., 5conv+2fc
  bool include_self_pair = false;
  std::vector<int> filters;             // team conv-stack override
  std::vector<int> widths;
  std::vector<int> fc_tail;

  // [loss]
  std::vector<double> loss_weights;     // empty = task default

  // [train]
  double lr = 0.01;
  double momentum = 0.9;
  int batch = 32;
  int epochs = 30;
  int patience = 10;
  std::uint64_t seed = 42;
  int threads = 1;
  bool deterministic = true;
  double train_frac = -1;               // <0 = task default
  double val_frac = -1;
  double test_frac = -1;

  /// Fills task-dependent defaults (t, split fractions).
  void finish(data::Task task_hint);
};

RunConfig parse_run_config(const std::string& path);
RunConfig parse_run_config_text(const std::string& text, const std::string& origin);

/// Written config snapshot for manifests; parseable back as an INI.
std::string run_config_to_ini(const RunConfig& rc);

/// Task-default loss weights: the stock per-event weights for the event
/// task (inverse-frequency), uniform for the team task.
std::vector<double> default_loss_weights(data::Task task, int num_classes);

/// Architecture from a run config (classes must be resolved by then).
models::SharedCompareConfig build_shared_compare_config(const RunConfig& rc);
models::StackedConfig build_stacked_config(const RunConfig& rc);

}  // namespace trajnet
