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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace trajnet::eval {

struct ScoredItem {
  double score = 0;
  bool positive = false;
};

/// Un-interpolated average precision: mean of precision-at-rank over the
/// positive ranks, with score ties kept in input order (stable sort).
/// Empty when there is no positive (undefined; excluded from mAP).
std::optional<double> average_precision(std::span<const ScoredItem> items);

struct PrPoint {
  double recall = 0;
  double precision = 0;
};

/// One operating point per rank cut, in stable score order, so the
/// step-integrated area reproduces average_precision. Recall is
/// non-decreasing along the list.
std::vector<PrPoint> pr_curve(std::span<const ScoredItem> items);

/// Step integration (no trapezoids): sum of delta-recall times precision.
double pr_step_area(std::span<const PrPoint> curve);

/// True iff `label` is among the k highest-probability classes; probability
/// ties go to the smaller class id.
bool hit_at_k(std::span<const double> probs, int label, int k);

/// Argmax class, smaller id on ties (the hit@1 rule, so hit@1 == accuracy).
int top1_class(std::span<const double> probs);

struct VoteResult {
  int winner = -1;
  bool tie = false;  // winner was the smallest id among tied modes
};

/// Modal class id of a non-empty prediction list.
VoteResult majority_vote(std::span<const int> predictions);

/// One evaluated sample: class distribution, ground truth, source game.
struct Prediction {
  std::vector<double> probs;
  int label = -1;
  int game = -1;
};

struct GameVote {
  int game = -1;
  int predicted = -1;
  int truth = -1;
  bool tie = false;
  int possessions = 0;
};

struct EvalReport {
  std::vector<std::string> classes;
  std::string ap_variant = "uninterpolated";

  // Ranking metrics (one-vs-rest on the softmax probability of each class).
  std::vector<double> per_class_ap;  // NaN where undefined (no positives)
  double map = 0;                    // mean over defined classes
  int undefined_ap_classes = 0;
  std::vector<std::vector<PrPoint>> pr;  // per class

  // Classification metrics.
  double accuracy = 0;             // top-1
  std::map<int, double> hit_at;    // k -> rate
  std::vector<std::vector<int>> confusion;  // sample level, true x predicted

  // Game-level majority voting (team task).
  std::vector<GameVote> game_votes;
  double game_accuracy = 0;
  std::vector<std::vector<int>> game_confusion;
  bool has_game_votes = false;

  int n_samples = 0;
};

/// Sample-level metrics common to both tasks; adds per-game majority voting
/// when `with_game_votes` is set (game id < 0 disables a sample's vote).
EvalReport build_report(const std::vector<Prediction>& preds,
                        const std::vector<std::string>& classes,
                        const std::vector<int>& k_list, bool with_game_votes);

/// Plot-ready two-column (recall, precision) file per class:
/// <prefix>pr_<class>.txt.
void write_pr_files(const EvalReport& report, const std::string& prefix);
/// Human-readable table.
std::string report_to_text(const EvalReport& report);
void write_report_text(const EvalReport& report, const std::string& path);
/// Machine-readable line-delimited records.
void write_report_records(const EvalReport& report, const std::string& path);

}  // namespace trajnet::eval
