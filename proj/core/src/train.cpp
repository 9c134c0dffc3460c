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

#include "trajnet/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "trajnet/errors.hpp"
#include "trajnet/nn/optim.hpp"
#include "trajnet/rng.hpp"

namespace trajnet::train {

using nlohmann::json;

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::vector<int> apportion3(int n, double a, double b, double c) {
  const double exact[3] = {a * n, b * n, c * n};
  int counts[3];
  double rem[3];
  int assigned = 0;
  for (int i = 0; i < 3; ++i) {
    counts[i] = static_cast<int>(exact[i]);
    rem[i] = exact[i] - counts[i];
    assigned += counts[i];
  }
  while (assigned < n) {
    int best = 0;
    for (int i = 1; i < 3; ++i) {
      if (rem[i] > rem[best]) best = i;
    }
    counts[best]++;
    rem[best] = -1;
    ++assigned;
  }
  return {counts[0], counts[1], counts[2]};
}

}  // namespace

Split split_games(std::vector<int> games, double train_frac, double val_frac,
                  double test_frac, std::uint64_t seed) {
  if (games.empty()) throw TrainError("dataset has no game ids to split by");
  std::sort(games.begin(), games.end());
  games.erase(std::unique(games.begin(), games.end()), games.end());
  Rng rng(derive_seed(seed, 0x53504c4954ull));  // split-shuffle substream
  std::shuffle(games.begin(), games.end(), rng.engine());
  const auto counts =
      apportion3(static_cast<int>(games.size()), train_frac, val_frac, test_frac);
  Split s;
  auto it = games.begin();
  s.train_games.assign(it, it + counts[0]);
  it += counts[0];
  s.val_games.assign(it, it + counts[1]);
  it += counts[1];
  s.test_games.assign(it, it + counts[2]);
  std::sort(s.train_games.begin(), s.train_games.end());
  std::sort(s.val_games.begin(), s.val_games.end());
  std::sort(s.test_games.begin(), s.test_games.end());
  return s;
}

std::vector<int> distinct_games(const data::EventDataset& ds) {
  std::set<int> g;
  for (const auto& s : ds.samples) g.insert(s.game);
  return {g.begin(), g.end()};
}

std::vector<int> distinct_games(const data::TeamDataset& ds) {
  std::set<int> g;
  for (const auto& s : ds.samples) g.insert(s.game);
  return {g.begin(), g.end()};
}

std::vector<int> samples_in_games(const data::EventDataset& ds,
                                  const std::vector<int>& games) {
  const std::set<int> gs(games.begin(), games.end());
  std::vector<int> idx;
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    if (gs.count(ds.samples[i].game)) idx.push_back(static_cast<int>(i));
  }
  return idx;
}

std::vector<int> samples_in_games(const data::TeamDataset& ds,
                                  const std::vector<int>& games) {
  const std::set<int> gs(games.begin(), games.end());
  std::vector<int> idx;
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    if (gs.count(ds.samples[i].game)) idx.push_back(static_cast<int>(i));
  }
  return idx;
}

nn::LossWeights resolve_loss_weights(const RunConfig& rc, int num_classes) {
  nn::LossWeights lw;
  lw.w = rc.loss_weights.empty() ? default_loss_weights(rc.task, num_classes)
                                 : rc.loss_weights;
  lw.validate(num_classes);
  return lw;
}

namespace {

/// Uniform view of the two models for the shared training loop.
struct EventAdapter {
  models::SharedCompareNet& net;
  const data::EventDataset& ds;
  using Trace = models::SharedCompareNet::Trace;

  int size() const { return static_cast<int>(ds.samples.size()); }
  double forward_backward(int i, const nn::LossWeights& lw, nn::GradBuffer& g,
                          Trace& tr) const {
    const auto& s = ds.samples[i];
    if (s.key < 0) {
      throw TrainError("event training requires key annotations (sample " +
                       std::to_string(i) + " has none)");
    }
    const PersonOrdering ord = models::proximity_order(s, s.key);
    return net.forward_backward(s, ord, s.label, lw, g, tr);
  }
  double validation_metric(const std::vector<int>& idx) const {
    const auto preds = predict(net, ds, idx, /*known_key=*/true);
    const auto rep = eval::build_report(preds, ds.header.classes, {}, false);
    return rep.map;  // best-checkpoint selection by validation mAP
  }
  nn::ParamStore& params() const { return net.params(); }
};

struct TeamAdapter {
  models::StackedNet& net;
  const data::TeamDataset& ds;
  using Trace = models::StackedNet::Trace;

  int size() const { return static_cast<int>(ds.samples.size()); }
  double forward_backward(int i, const nn::LossWeights& lw, nn::GradBuffer& g,
                          Trace& tr) const {
    const auto& s = ds.samples[i];
    return net.forward_backward(s, s.team, lw, g, tr);
  }
  double validation_metric(const std::vector<int>& idx) const {
    const auto preds = predict(net, ds, idx);
    const auto rep = eval::build_report(preds, ds.header.classes, {}, false);
    return rep.accuracy;  // best-checkpoint selection by validation accuracy
  }
  nn::ParamStore& params() const { return net.params(); }
};

template <typename Adapter>
double run_batch(const Adapter& ad, std::span<const int> idx,
                 const nn::LossWeights& lw, nn::SgdOptimizer& opt,
                 int threads) {
  nn::ParamStore& store = ad.params();
  store.zero_grad();
  double total = 0.0;

  const int nt = std::min<int>(threads, static_cast<int>(idx.size()));
  if (nt <= 1) {
    typename Adapter::Trace tr;
    for (int i : idx) total += ad.forward_backward(i, lw, store.grads(), tr);
  } else {
    // Per-thread accumulators over contiguous chunks, reduced in thread
    // order: deterministic for a fixed thread count.
    std::vector<nn::GradBuffer> buffers;
    buffers.reserve(nt);
    for (int k = 0; k < nt; ++k) buffers.emplace_back(store);
    std::vector<double> losses(nt, 0.0);
    std::vector<std::exception_ptr> errors(nt);
    std::vector<std::thread> workers;
    for (int k = 0; k < nt; ++k) {
      workers.emplace_back([&, k] {
        try {
          typename Adapter::Trace tr;
          const std::size_t lo = idx.size() * k / nt;
          const std::size_t hi = idx.size() * (k + 1) / nt;
          for (std::size_t q = lo; q < hi; ++q) {
            losses[k] += ad.forward_backward(idx[q], lw, buffers[k], tr);
          }
        } catch (...) {
          errors[k] = std::current_exception();
        }
      });
    }
    for (auto& w : workers) w.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    for (int k = 0; k < nt; ++k) {
      store.accumulate(buffers[k]);
      total += losses[k];
    }
  }

  const double mean_loss = total / static_cast<double>(idx.size());
  if (!std::isfinite(mean_loss)) {
    throw TrainError("non-finite training loss (diverged); lower the lr or "
                     "check the data");
  }
  store.grads().scale(1.0 / static_cast<double>(idx.size()));
  opt.step(store);
  return mean_loss;
}

template <typename Adapter>
TrainStats run_training(const Adapter& ad, const RunConfig& rc,
                        const Split& split,
                        const std::vector<int>& train_idx,
                        const std::vector<int>& val_idx, int overfit,
                        int num_classes) {
  const nn::LossWeights lw = resolve_loss_weights(rc, num_classes);
  nn::SgdOptimizer opt(ad.params(), {rc.lr, rc.momentum});
  TrainStats stats;

  if (overfit > 0) {
    std::vector<int> idx(std::min(overfit, ad.size()));
    std::iota(idx.begin(), idx.end(), 0);
    if (idx.empty()) throw TrainError("overfit mode: dataset is empty");
    double loss = std::numeric_limits<double>::infinity();
    int steps = 0;
    const int max_steps = 500;
    while (steps < max_steps) {
      loss = run_batch(ad, idx, lw, opt, rc.threads);
      ++steps;
      if (loss < 0.005) break;  // margin under the 0.01 sanity gate
    }
    stats.overfit_steps = steps;
    stats.overfit_final_loss = loss;
    stats.final_train_loss = loss;
    stats.best_epoch = 0;
    return stats;
  }

  if (train_idx.empty()) throw TrainError("no training samples in the split");

  double best_val = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> best_weights;
  int since_best = 0;

  for (int epoch = 0; epoch < rc.epochs; ++epoch) {
    const double t0 = now_ms();
    std::vector<int> order = train_idx;
    Rng rng(derive_seed(rc.seed, 0x45504f43ull + static_cast<std::uint64_t>(epoch)));
    std::shuffle(order.begin(), order.end(), rng.engine());

    double loss_sum = 0.0;
    for (std::size_t off = 0; off < order.size(); off += rc.batch) {
      const std::size_t n = std::min<std::size_t>(rc.batch, order.size() - off);
      const double bl =
          run_batch(ad, std::span<const int>(order.data() + off, n), lw, opt,
                    rc.threads);
      loss_sum += bl * static_cast<double>(n);
    }
    EpochStats es;
    es.epoch = epoch;
    es.train_loss = loss_sum / static_cast<double>(order.size());
    es.val_metric = std::numeric_limits<double>::quiet_NaN();
    if (!val_idx.empty()) {
      es.val_metric = ad.validation_metric(val_idx);
      if (es.val_metric > best_val) {
        best_val = es.val_metric;
        stats.best_epoch = epoch;
        best_weights = ad.params().snapshot_weights();
        since_best = 0;
      } else {
        ++since_best;
      }
    }
    es.wall_ms = now_ms() - t0;
    stats.history.push_back(es);
    if (!val_idx.empty() && rc.patience > 0 && since_best >= rc.patience) break;
  }

  if (!best_weights.empty()) {
    ad.params().restore_weights(best_weights);
  } else {
    stats.best_epoch = static_cast<int>(stats.history.size()) - 1;
  }
  stats.final_train_loss =
      stats.history.empty() ? 0.0 : stats.history.back().train_loss;
  (void)split;
  return stats;
}

}  // namespace

TrainStats train_model(models::SharedCompareNet& net, const RunConfig& rc,
                       const data::EventDataset& ds, const Split& split,
                       int overfit) {
  const EventAdapter ad{net, ds};
  return run_training(ad, rc, split, samples_in_games(ds, split.train_games),
                      samples_in_games(ds, split.val_games), overfit,
                      ds.header.num_classes());
}

TrainStats train_model(models::StackedNet& net, const RunConfig& rc,
                       const data::TeamDataset& ds, const Split& split,
                       int overfit) {
  const TeamAdapter ad{net, ds};
  return run_training(ad, rc, split, samples_in_games(ds, split.train_games),
                      samples_in_games(ds, split.val_games), overfit,
                      ds.header.num_classes());
}

std::vector<eval::Prediction> predict(const models::SharedCompareNet& net,
                                      const data::EventDataset& ds,
                                      const std::vector<int>& idx,
                                      bool known_key) {
  std::vector<eval::Prediction> preds;
  preds.reserve(idx.size());
  for (int i : idx) {
    const auto& s = ds.samples[i];
    eval::Prediction p;
    if (known_key) {
      if (s.key < 0) {
        throw InvalidArgument("sample " + std::to_string(i) +
                              " has no key annotation; use the key-unknown "
                              "regime");
      }
      p.probs = net.forward(s, models::proximity_order(s, s.key));
    } else {
      p.probs = net.predict_unknown_key(s);
    }
    p.label = s.label;
    p.game = s.game;
    preds.push_back(std::move(p));
  }
  return preds;
}

std::vector<eval::Prediction> predict(const models::StackedNet& net,
                                      const data::TeamDataset& ds,
                                      const std::vector<int>& idx) {
  std::vector<eval::Prediction> preds;
  preds.reserve(idx.size());
  for (int i : idx) {
    const auto& s = ds.samples[i];
    preds.push_back({net.forward(s), s.team, s.game});
  }
  return preds;
}

void save_manifest(const RunManifest& m, const std::string& path) {
  json j;
  j["task"] = m.task;
  j["config"] = m.config_ini;
  j["seed"] = m.seed;
  j["dataset"] = {{"path", m.dataset_path},
                  {"checksum", m.dataset_checksum},
                  {"n_samples", m.n_samples}};
  j["split"] = {{"train_games", m.split.train_games},
                {"val_games", m.split.val_games},
                {"test_games", m.split.test_games}};
  json hist = json::array();
  for (const auto& e : m.history) {
    hist.push_back({{"epoch", e.epoch},
                    {"train_loss", e.train_loss},
                    {"val_metric", std::isnan(e.val_metric) ? json() : json(e.val_metric)},
                    {"wall_ms", e.wall_ms}});
  }
  j["history"] = std::move(hist);
  j["best_epoch"] = m.best_epoch;
  j["final_train_loss"] = m.final_train_loss;
  if (m.overfit_steps >= 0) {
    j["overfit"] = {{"steps", m.overfit_steps},
                    {"final_loss", m.overfit_final_loss}};
  }
  j["checkpoint"] = m.checkpoint_path;
  j["wall_total_ms"] = m.wall_total_ms;
  j["threads"] = m.threads;
  j["deterministic"] = m.deterministic;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

std::vector<SweepRow> run_sweep(const RunConfig& base,
                                const data::TeamDataset& ds,
                                const std::vector<models::VariantSpec>& variants) {
  const Split split = split_games(distinct_games(ds), base.train_frac,
                                  base.val_frac, base.test_frac, base.seed);
  const std::vector<int> test_idx = samples_in_games(ds, split.test_games);
  std::vector<SweepRow> rows;
  for (const auto& v : variants) {
    SweepRow row;
    row.name = v.name;
    try {
      models::StackedConfig mc = v.cfg;
      mc.np = ds.header.np;
      mc.t = ds.header.t;
      mc.num_classes = ds.header.num_classes();
      models::StackedNet net(mc, base.seed);
      row.params = net.param_count();
      train_model(net, base, ds, split);
      const auto preds = predict(net, ds, test_idx);
      const auto rep = eval::build_report(preds, ds.header.classes, {2, 3}, true);
      row.acc = rep.accuracy;
      row.hit2 = rep.hit_at.at(2);
      row.hit3 = rep.hit_at.at(3);
      row.game_acc = rep.game_accuracy;
      row.ok = true;
    } catch (const Error& e) {
      row.ok = false;
      row.error = e.kind() + ": " + e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sweep_table_text(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "variant        params      acc     hit@2    hit@3   game acc\n";
  char buf[160];
  for (const auto& r : rows) {
    if (r.ok) {
      std::snprintf(buf, sizeof(buf),
                    "%-13s %9zu  %6.2f%%  %6.2f%%  %6.2f%%  %7.2f%%\n",
                    r.name.c_str(), r.params, 100 * r.acc, 100 * r.hit2,
                    100 * r.hit3, 100 * r.game_acc);
      os << buf;
    } else {
      os << r.name << "  SKIPPED (" << r.error << ")\n";
    }
  }
  return os.str();
}

void write_sweep_files(const std::vector<SweepRow>& rows,
                       const std::string& txt_path,
                       const std::string& tsv_path) {
  {
    std::ofstream out(txt_path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + txt_path + "'");
    out << sweep_table_text(rows);
  }
  std::ofstream out(tsv_path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + tsv_path + "'");
  out << "variant\tacc\thit2\thit3\tgame_acc\tparams\tstatus\n";
  out.precision(17);
  for (const auto& r : rows) {
    out << r.name << "\t" << r.acc << "\t" << r.hit2 << "\t" << r.hit3 << "\t"
        << r.game_acc << "\t" << r.params << "\t"
        << (r.ok ? "ok" : r.error) << "\n";
  }
}

}  // namespace trajnet::train
