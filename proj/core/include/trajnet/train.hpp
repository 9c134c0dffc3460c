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

#include "trajnet/config.hpp"
#include "trajnet/data/dataset.hpp"
#include "trajnet/eval/metrics.hpp"
#include "trajnet/models/checkpoint.hpp"

namespace trajnet::train {

/// Game-id split. Samples never cross splits except through their game.
struct Split {
  std::vector<int> train_games, val_games, test_games;
};

/// Deterministic split of distinct game ids by the given fractions
/// (largest-remainder apportionment of counts, seeded shuffle of the ids).
Split split_games(std::vector<int> games, double train_frac, double val_frac,
                  double test_frac, std::uint64_t seed);

std::vector<int> distinct_games(const data::EventDataset& ds);
std::vector<int> distinct_games(const data::TeamDataset& ds);
std::vector<int> samples_in_games(const data::EventDataset& ds,
                                  const std::vector<int>& games);
std::vector<int> samples_in_games(const data::TeamDataset& ds,
                                  const std::vector<int>& games);

struct EpochStats {
  int epoch = 0;
  double train_loss = 0;
  double val_metric = 0;  // mAP (event) or accuracy (team); NaN without val
  double wall_ms = 0;
};

struct RunManifest {
  std::string task;
  std::string config_ini;  // resolved config snapshot
  std::uint64_t seed = 0;
  std::string dataset_path, dataset_checksum;
  int n_samples = 0;
  Split split;
  std::vector<EpochStats> history;
  int best_epoch = -1;
  double final_train_loss = 0;
  int overfit_steps = -1;        // >= 0 in overfit mode
  double overfit_final_loss = 0;
  std::string checkpoint_path;
  double wall_total_ms = 0;
  int threads = 1;
  bool deterministic = true;
};

void save_manifest(const RunManifest& m, const std::string& path);

struct TrainStats {
  std::vector<EpochStats> history;
  int best_epoch = -1;
  double final_train_loss = 0;
  int overfit_steps = -1;
  double overfit_final_loss = 0;
};

/// Trains on the split's train games with weighted cross-entropy and SGD
/// with momentum, selecting the best-validation-metric epoch when a val
/// split exists. `overfit` > 0 trains full-batch on the first `overfit`
/// samples instead (sanity mode). Aborts with TrainError on non-finite
/// loss. Bitwise deterministic for fixed (config, seed, threads).
TrainStats train_model(models::SharedCompareNet& net, const RunConfig& rc,
                       const data::EventDataset& ds, const Split& split,
                       int overfit = 0);
TrainStats train_model(models::StackedNet& net, const RunConfig& rc,
                       const data::TeamDataset& ds, const Split& split,
                       int overfit = 0);

/// Runs the model over the chosen samples. Event predictions use the
/// annotated key when `known_key`; otherwise the average-pool unknown-key
/// path.
std::vector<eval::Prediction> predict(const models::SharedCompareNet& net,
                                      const data::EventDataset& ds,
                                      const std::vector<int>& idx,
                                      bool known_key);
std::vector<eval::Prediction> predict(const models::StackedNet& net,
                                      const data::TeamDataset& ds,
                                      const std::vector<int>& idx);

/// Resolved per-class loss weights for a run (config override or task
/// default), validated.
nn::LossWeights resolve_loss_weights(const RunConfig& rc, int num_classes);

struct SweepRow {
  std::string name;
  bool ok = false;
  std::string error;
  std::size_t params = 0;
  double acc = 0, hit2 = 0, hit3 = 0, game_acc = 0;
};

/// Trains every variant with the shared seed and game split, evaluating
/// accuracy / hit@2 / hit@3 / game accuracy on the test games. A variant
/// that fails to type-check is reported and skipped.
std::vector<SweepRow> run_sweep(const RunConfig& base,
                                const data::TeamDataset& normalized,
                                const std::vector<models::VariantSpec>& variants);

std::string sweep_table_text(const std::vector<SweepRow>& rows);
void write_sweep_files(const std::vector<SweepRow>& rows,
                       const std::string& txt_path,
                       const std::string& tsv_path);

}  // namespace trajnet::train
