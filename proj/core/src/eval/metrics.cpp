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

#include "trajnet/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "trajnet/errors.hpp"

namespace trajnet::eval {

using nlohmann::json;

namespace {

/// Indices of `items` in decreasing score order, ties in input order.
std::vector<std::size_t> ranking(std::span<const ScoredItem> items) {
  std::vector<std::size_t> idx(items.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return items[a].score > items[b].score;
  });
  return idx;
}

int count_positives(std::span<const ScoredItem> items) {
  int p = 0;
  for (const auto& it : items) p += it.positive;
  return p;
}

}  // namespace

std::optional<double> average_precision(std::span<const ScoredItem> items) {
  const int positives = count_positives(items);
  if (positives == 0) return std::nullopt;
  const auto order = ranking(items);
  double acc = 0.0;
  int tp = 0;
  for (std::size_t r = 0; r < order.size(); ++r) {
    if (items[order[r]].positive) {
      ++tp;
      acc += static_cast<double>(tp) / static_cast<double>(r + 1);
    }
  }
  return acc / positives;
}

std::vector<PrPoint> pr_curve(std::span<const ScoredItem> items) {
  const int positives = count_positives(items);
  if (positives == 0) {
    throw InvalidArgument("pr_curve: no positive items");
  }
  const auto order = ranking(items);
  std::vector<PrPoint> curve;
  curve.reserve(order.size());
  int tp = 0;
  for (std::size_t r = 0; r < order.size(); ++r) {
    tp += items[order[r]].positive;
    curve.push_back({static_cast<double>(tp) / positives,
                     static_cast<double>(tp) / static_cast<double>(r + 1)});
  }
  return curve;
}

double pr_step_area(std::span<const PrPoint> curve) {
  double area = 0.0;
  double prev_recall = 0.0;
  for (const auto& pt : curve) {
    area += (pt.recall - prev_recall) * pt.precision;
    prev_recall = pt.recall;
  }
  return area;
}

bool hit_at_k(std::span<const double> probs, int label, int k) {
  const int n = static_cast<int>(probs.size());
  if (label < 0 || label >= n) throw InvalidArgument("hit_at_k: label out of range");
  if (k < 1 || k > n) throw InvalidArgument("hit_at_k: k out of range");
  int better = 0;
  for (int c = 0; c < n; ++c) {
    if (c == label) continue;
    if (probs[c] > probs[label] || (probs[c] == probs[label] && c < label)) {
      ++better;
    }
  }
  return better < k;
}

int top1_class(std::span<const double> probs) {
  if (probs.empty()) throw InvalidArgument("top1_class: empty distribution");
  int best = 0;
  for (int c = 1; c < static_cast<int>(probs.size()); ++c) {
    if (probs[c] > probs[best]) best = c;
  }
  return best;
}

VoteResult majority_vote(std::span<const int> predictions) {
  if (predictions.empty()) throw InvalidArgument("majority_vote: empty list");
  std::map<int, int> counts;
  for (int p : predictions) counts[p]++;
  int best = -1, best_count = -1, modes = 0;
  for (const auto& [cls, count] : counts) {
    if (count > best_count) {
      best = cls;
      best_count = count;
      modes = 1;
    } else if (count == best_count) {
      ++modes;
    }
  }
  return {best, modes > 1};
}

EvalReport build_report(const std::vector<Prediction>& preds,
                        const std::vector<std::string>& classes,
                        const std::vector<int>& k_list, bool with_game_votes) {
  const int nc = static_cast<int>(classes.size());
  EvalReport rep;
  rep.classes = classes;
  rep.n_samples = static_cast<int>(preds.size());
  rep.per_class_ap.assign(nc, std::numeric_limits<double>::quiet_NaN());
  rep.pr.resize(nc);
  rep.confusion.assign(nc, std::vector<int>(nc, 0));

  // One-vs-rest ranking per class; the positive score for class c is the
  // predicted probability of c.
  double ap_sum = 0.0;
  int ap_defined = 0;
  for (int c = 0; c < nc; ++c) {
    std::vector<ScoredItem> items;
    items.reserve(preds.size());
    for (const auto& p : preds) {
      items.push_back({p.probs[c], p.label == c});
    }
    const auto ap = average_precision(items);
    if (ap) {
      rep.per_class_ap[c] = *ap;
      rep.pr[c] = pr_curve(items);
      ap_sum += *ap;
      ++ap_defined;
    } else {
      ++rep.undefined_ap_classes;
    }
  }
  rep.map = ap_defined > 0 ? ap_sum / ap_defined
                           : std::numeric_limits<double>::quiet_NaN();

  int correct = 0;
  std::map<int, int> hits;
  for (int k : k_list) hits[k] = 0;
  for (const auto& p : preds) {
    const int pred = top1_class(p.probs);
    if (p.label >= 0 && p.label < nc) rep.confusion[p.label][pred]++;
    correct += pred == p.label;
    for (int k : k_list) hits[k] += hit_at_k(p.probs, p.label, k);
  }
  rep.accuracy = preds.empty() ? 0.0 : static_cast<double>(correct) / preds.size();
  for (int k : k_list) {
    rep.hit_at[k] = preds.empty() ? 0.0 : static_cast<double>(hits[k]) / preds.size();
  }

  if (with_game_votes) {
    rep.has_game_votes = true;
    rep.game_confusion.assign(nc, std::vector<int>(nc, 0));
    std::map<int, std::vector<int>> by_game;  // game -> predictions
    std::map<int, int> game_truth;
    for (const auto& p : preds) {
      if (p.game < 0) continue;
      by_game[p.game].push_back(top1_class(p.probs));
      game_truth[p.game] = p.label;
    }
    int game_correct = 0;
    for (const auto& [game, votes] : by_game) {
      const VoteResult v = majority_vote(votes);
      rep.game_votes.push_back({game, v.winner, game_truth[game], v.tie,
                                static_cast<int>(votes.size())});
      rep.game_confusion[game_truth[game]][v.winner]++;
      game_correct += v.winner == game_truth[game];
    }
    rep.game_accuracy = by_game.empty()
                            ? 0.0
                            : static_cast<double>(game_correct) / by_game.size();
  }
  return rep;
}

void write_pr_files(const EvalReport& report, const std::string& prefix) {
  for (std::size_t c = 0; c < report.classes.size(); ++c) {
    if (report.pr[c].empty()) continue;
    const std::string path = prefix + "pr_" + report.classes[c] + ".txt";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << "# recall precision\n";
    out.precision(17);
    for (const auto& pt : report.pr[c]) {
      out << pt.recall << " " << pt.precision << "\n";
    }
  }
}

std::string report_to_text(const EvalReport& report) {
  std::ostringstream os;
  os.precision(4);
  os << std::fixed;
  os << "samples: " << report.n_samples << "\n";
  os << "accuracy: " << report.accuracy << "\n";
  for (const auto& [k, v] : report.hit_at) {
    os << "hit@" << k << ": " << v << "\n";
  }
  os << "ap (" << report.ap_variant << "):\n";
  for (std::size_t c = 0; c < report.classes.size(); ++c) {
    os << "  " << report.classes[c] << ": ";
    if (std::isnan(report.per_class_ap[c])) {
      os << "n/a (no positives)";
    } else {
      os << report.per_class_ap[c];
    }
    os << "\n";
  }
  os << "mAP: " << report.map << "\n";
  if (report.has_game_votes) {
    os << "game accuracy: " << report.game_accuracy << " ("
       << report.game_votes.size() << " games)\n";
    os << "game votes (game predicted truth tie n):\n";
    for (const auto& g : report.game_votes) {
      os << "  " << g.game << " " << report.classes[g.predicted] << " "
         << report.classes[g.truth] << " " << (g.tie ? 1 : 0) << " "
         << g.possessions << "\n";
    }
    os << "game confusion (rows true, cols predicted):\n";
    for (const auto& row : report.game_confusion) {
      os << " ";
      for (int v : row) os << " " << v;
      os << "\n";
    }
  }
  os << "confusion (rows true, cols predicted):\n";
  for (const auto& row : report.confusion) {
    os << " ";
    for (int v : row) os << " " << v;
    os << "\n";
  }
  return os.str();
}

void write_report_text(const EvalReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << report_to_text(report);
}

void write_report_records(const EvalReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  {
    json j;
    j["record"] = "summary";
    j["n_samples"] = report.n_samples;
    j["accuracy"] = report.accuracy;
    j["map"] = std::isnan(report.map) ? json() : json(report.map);
    j["ap_variant"] = report.ap_variant;
    j["undefined_ap_classes"] = report.undefined_ap_classes;
    if (report.has_game_votes) j["game_accuracy"] = report.game_accuracy;
    for (const auto& [k, v] : report.hit_at) j["hit@" + std::to_string(k)] = v;
    out << j.dump() << "\n";
  }
  for (std::size_t c = 0; c < report.classes.size(); ++c) {
    json j;
    j["record"] = "class";
    j["class"] = report.classes[c];
    j["ap"] = std::isnan(report.per_class_ap[c]) ? json()
                                                 : json(report.per_class_ap[c]);
    j["confusion_row"] = report.confusion[c];
    out << j.dump() << "\n";
  }
  for (const auto& g : report.game_votes) {
    json j;
    j["record"] = "game_vote";
    j["game"] = g.game;
    j["predicted"] = report.classes[g.predicted];
    j["truth"] = report.classes[g.truth];
    j["tie"] = g.tie;
    j["possessions"] = g.possessions;
    out << j.dump() << "\n";
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace trajnet::eval
