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

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "trajnet/config.hpp"
#include "trajnet/data/generator.hpp"
#include "trajnet/data/tracks.hpp"
#include "trajnet/errors.hpp"
#include "trajnet/train.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace trajnet;

namespace {

int exit_code_for(const Error& e) {
  if (e.kind() == "io") return 3;
  if (e.kind() == "format") return 4;
  if (e.kind() == "config") return 5;
  if (e.kind() == "shape") return 6;
  if (e.kind() == "train") return 7;
  if (e.kind() == "invalid-argument") return 8;
  return 1;
}

std::string timestamp_utc() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", &tm);
  return buf;
}

std::vector<double> parse_mix(const std::string& text) {
  // "pass=0.5,shot=0.1,..." over the 6 event classes; unnamed mass is
  // spread over the remaining classes proportional to the default mix.
  auto mix = data::EventGenOptions::default_mix();
  if (text.empty()) return mix;
  double named_total = 0.0;
  std::vector<bool> named(mix.size(), false);
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("bad --mix entry '" + part + "' (want class=frac)");
    }
    const std::string cls = part.substr(0, eq);
    const double frac = std::stod(part.substr(eq + 1));
    bool found = false;
    for (std::size_t c = 0; c < data::kEventClasses.size(); ++c) {
      if (cls == data::kEventClasses[c]) {
        mix[c] = frac;
        named[c] = true;
        named_total += frac;
        found = true;
        break;
      }
    }
    if (!found) throw ConfigError("unknown event class '" + cls + "' in --mix");
  }
  double rest_default = 0.0;
  for (std::size_t c = 0; c < mix.size(); ++c) {
    if (!named[c]) rest_default += mix[c];
  }
  const double remaining = std::max(0.0, 1.0 - named_total);
  for (std::size_t c = 0; c < mix.size(); ++c) {
    if (!named[c]) {
      mix[c] = rest_default > 0 ? mix[c] / rest_default * remaining : 0.0;
    }
  }
  return mix;
}

void write_generate_manifest(const std::string& out_path, std::uint64_t seed,
                             const json& flags) {
  json j;
  j["seed"] = seed;
  j["flags"] = flags;
  j["output"] = out_path;
  j["checksum"] = data::file_checksum(out_path);
  std::ofstream out(out_path + ".manifest.json", std::ios::binary);
  if (!out) throw IoError("cannot write '" + out_path + ".manifest.json'");
  out << j.dump(2) << "\n";
}

struct TrainCli {
  std::string config_path, data_path, out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  int overfit = 0;
  bool verbose = false;
};

int cmd_train(const TrainCli& cli) {
  RunConfig rc = parse_run_config(cli.config_path);
  if (cli.seed_set) rc.seed = cli.seed;
  if (cli.threads > 0) rc.threads = cli.threads;

  const data::DatasetHeader head = data::peek_header(cli.data_path);
  if (head.task != rc.task) {
    throw ConfigError("config declares task '" +
                      std::string(data::task_name(rc.task)) +
                      "' but dataset is '" +
                      std::string(data::task_name(head.task)) + "'");
  }

  std::string out_dir = cli.out_dir;
  if (out_dir.empty()) {
    out_dir = "runs/" + timestamp_utc() + "-seed" + std::to_string(rc.seed);
  }
  fs::create_directories(out_dir);

  train::RunManifest manifest;
  manifest.task = data::task_name(rc.task);
  manifest.seed = rc.seed;
  manifest.dataset_path = cli.data_path;
  manifest.dataset_checksum = data::file_checksum(cli.data_path);
  manifest.threads = rc.threads;
  manifest.deterministic = rc.deterministic;
  const std::string ck_path = out_dir + "/checkpoint.tjn";

  const auto t0 = std::chrono::steady_clock::now();

  auto finish = [&](const train::TrainStats& stats, auto& net,
                    int n_samples) {
    if (!net.params().all_weights_finite()) {
      throw TrainError("refusing to write a checkpoint with non-finite weights");
    }
    models::save_checkpoint(ck_path, net, rc.seed);
    manifest.n_samples = n_samples;
    manifest.history = stats.history;
    manifest.best_epoch = stats.best_epoch;
    manifest.final_train_loss = stats.final_train_loss;
    manifest.overfit_steps = stats.overfit_steps;
    manifest.overfit_final_loss = stats.overfit_final_loss;
    manifest.checkpoint_path = ck_path;
    manifest.config_ini = run_config_to_ini(rc);
    manifest.wall_total_ms = std::chrono::duration<double, std::milli>(
                                 std::chrono::steady_clock::now() - t0)
                                 .count();
    train::save_manifest(manifest, out_dir + "/manifest.json");
    std::cout << "checkpoint: " << ck_path << "\n";
    std::cout << "manifest: " << out_dir << "/manifest.json\n";
    if (stats.overfit_steps >= 0) {
      std::cout << "overfit: loss " << stats.overfit_final_loss << " after "
                << stats.overfit_steps << " steps\n";
    } else if (!stats.history.empty()) {
      std::cout << "trained " << stats.history.size() << " epochs, best epoch "
                << stats.best_epoch << ", final train loss "
                << stats.final_train_loss << "\n";
    }
  };

  if (rc.task == data::Task::Event) {
    data::EventDataset ds = data::load_event_dataset(cli.data_path);
    if (!rc.classes.empty() && rc.classes != ds.header.classes) {
      throw ConfigError("config class list does not match the dataset's");
    }
    rc.classes = ds.header.classes;
    data::normalize(ds);
    models::SharedCompareNet net(build_shared_compare_config(rc), rc.seed);
    train::Split split;
    if (cli.overfit == 0) {
      split = train::split_games(train::distinct_games(ds), rc.train_frac,
                                 rc.val_frac, rc.test_frac, rc.seed);
    }
    manifest.split = split;
    const auto stats = train::train_model(net, rc, ds, split, cli.overfit);
    finish(stats, net, static_cast<int>(ds.samples.size()));
  } else {
    data::TeamDataset ds = data::load_team_dataset(cli.data_path);
    if (!rc.classes.empty() && rc.classes != ds.header.classes) {
      throw ConfigError("config class list does not match the dataset's");
    }
    rc.classes = ds.header.classes;
    data::normalize(ds);
    models::StackedNet net(build_stacked_config(rc), rc.seed);
    train::Split split;
    if (cli.overfit == 0) {
      split = train::split_games(train::distinct_games(ds), rc.train_frac,
                                 rc.val_frac, rc.test_frac, rc.seed);
    }
    manifest.split = split;
    const auto stats = train::train_model(net, rc, ds, split, cli.overfit);
    finish(stats, net, static_cast<int>(ds.samples.size()));
  }
  return 0;
}

struct EvalCli {
  std::string checkpoint, data_path, out_dir = ".", key_mode = "both";
  std::vector<int> k_list = {2, 3};
};

int cmd_eval(const EvalCli& cli) {
  fs::create_directories(cli.out_dir);
  auto loaded = models::load_checkpoint(cli.checkpoint);
  const data::DatasetHeader head = data::peek_header(cli.data_path);

  if (std::holds_alternative<models::SharedCompareNet>(loaded.model)) {
    if (head.task != data::Task::Event) {
      throw ConfigError("checkpoint is an event model but dataset is '" +
                        std::string(data::task_name(head.task)) + "'");
    }
    const auto& net = std::get<models::SharedCompareNet>(loaded.model);
    data::EventDataset ds = data::load_event_dataset(cli.data_path);
    if (net.config().num_classes != ds.header.num_classes()) {
      throw ConfigError("model has " + std::to_string(net.config().num_classes) +
                        " classes, dataset " +
                        std::to_string(ds.header.num_classes()));
    }
    data::normalize(ds);
    std::vector<int> all(ds.samples.size());
    std::iota(all.begin(), all.end(), 0);

    auto emit = [&](bool known, const std::string& tag) {
      const auto preds = train::predict(net, ds, all, known);
      const auto rep = eval::build_report(preds, ds.header.classes, cli.k_list,
                                          false);
      eval::write_report_text(rep, cli.out_dir + "/report_" + tag + ".txt");
      eval::write_report_records(rep, cli.out_dir + "/report_" + tag + ".jsonl");
      eval::write_pr_files(rep, cli.out_dir + "/" + tag + "_");
      std::cout << tag << " mAP: " << rep.map << "\n";
    };
    if (cli.key_mode == "known" || cli.key_mode == "both") emit(true, "known");
    if (cli.key_mode == "unknown" || cli.key_mode == "both") {
      emit(false, "unknown");
    }
  } else {
    if (head.task != data::Task::Team) {
      throw ConfigError("checkpoint is a team model but dataset is '" +
                        std::string(data::task_name(head.task)) + "'");
    }
    const auto& net = std::get<models::StackedNet>(loaded.model);
    data::TeamDataset ds = data::load_team_dataset(cli.data_path);
    if (net.config().num_classes != ds.header.num_classes()) {
      throw ConfigError("model has " + std::to_string(net.config().num_classes) +
                        " classes, dataset " +
                        std::to_string(ds.header.num_classes()));
    }
    data::normalize(ds);
    std::vector<int> all(ds.samples.size());
    std::iota(all.begin(), all.end(), 0);
    const auto preds = train::predict(net, ds, all);
    const auto rep = eval::build_report(preds, ds.header.classes, cli.k_list,
                                        true);
    eval::write_report_text(rep, cli.out_dir + "/report.txt");
    eval::write_report_records(rep, cli.out_dir + "/report.jsonl");
    eval::write_pr_files(rep, cli.out_dir + "/");
    std::cout << "accuracy: " << rep.accuracy
              << "  game accuracy: " << rep.game_accuracy << "\n";
  }
  return 0;
}

int cmd_predict(const std::string& checkpoint, const std::string& data_path,
                const std::string& out_path, const std::string& key_mode) {
  auto loaded = models::load_checkpoint(checkpoint);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + out_path + "'");

  if (std::holds_alternative<models::SharedCompareNet>(loaded.model)) {
    const auto& net = std::get<models::SharedCompareNet>(loaded.model);
    data::EventDataset ds = data::load_event_dataset(data_path);
    data::normalize(ds);
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
      const auto& s = ds.samples[i];
      const bool known = key_mode == "known" && s.key >= 0;
      const auto probs =
          known ? net.forward(s, models::proximity_order(s, s.key))
                : net.predict_unknown_key(s);
      json j;
      j["index"] = i;
      j["game"] = s.game;
      j["label"] = ds.header.classes[s.label];
      j["pred"] = ds.header.classes[eval::top1_class(probs)];
      j["probs"] = probs;
      out << j.dump() << "\n";
    }
  } else {
    const auto& net = std::get<models::StackedNet>(loaded.model);
    data::TeamDataset ds = data::load_team_dataset(data_path);
    data::normalize(ds);
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
      const auto& s = ds.samples[i];
      const auto probs = net.forward(s);
      json j;
      j["index"] = i;
      j["game"] = s.game;
      j["label"] = ds.header.classes[s.team];
      j["pred"] = ds.header.classes[eval::top1_class(probs)];
      j["probs"] = probs;
      out << j.dump() << "\n";
    }
  }
  std::cout << "predictions: " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trajnet: person-trajectory networks for event recognition "
               "and team identification"};
  app.require_subcommand(1);

  // generate ----------------------------------------------------------
  auto* gen = app.add_subcommand("generate", "Emit a synthetic dataset");
  std::string gen_task = "event", gen_out, gen_mix;
  std::uint64_t gen_seed = 1;
  int gen_samples = 1000, gen_games = 8, gen_teams = 6, gen_per_team = 200,
      gen_per_game = 20;
  double gen_noise = -1.0;
  gen->add_option("--task", gen_task, "event | team")
      ->check(CLI::IsMember({"event", "team"}));
  gen->add_option("--out", gen_out, "output dataset path")->required();
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--samples", gen_samples, "event: number of samples");
  gen->add_option("--games", gen_games, "event: number of synthetic games");
  gen->add_option("--teams", gen_teams, "team: number of team profiles (2-6)");
  gen->add_option("--per-team", gen_per_team, "team: possessions per team");
  gen->add_option("--per-game", gen_per_game, "team: possessions per game");
  gen->add_option("--noise", gen_noise, "positional jitter std, feet");
  gen->add_option("--mix", gen_mix, "event class mix, e.g. pass=0.5,shot=0.1");

  // preprocess --------------------------------------------------------
  auto* pre = app.add_subcommand("preprocess",
                                 "Window events / extract possessions from "
                                 "raw tracks");
  std::string pre_task = "event", pre_in, pre_out;
  int pre_np = 5, pre_t = 0;
  pre->add_option("--task", pre_task, "event | team")
      ->check(CLI::IsMember({"event", "team"}));
  pre->add_option("--in", pre_in, "raw tracks file")->required();
  pre->add_option("--out", pre_out, "output dataset path")->required();
  pre->add_option("--np", pre_np, "person/player slots");
  pre->add_option("--t", pre_t, "window length (event 16, team 200)");

  // train ---------------------------------------------------------------
  auto* tr = app.add_subcommand("train", "Train a model from a config");
  TrainCli tcli;
  tr->add_option("--config", tcli.config_path, "run config (ini)")->required();
  tr->add_option("--data", tcli.data_path, "dataset path")->required();
  tr->add_option("--out-dir", tcli.out_dir,
                 "run directory (default runs/<timestamp>-seed<seed>)");
  auto* seed_opt = tr->add_option("--seed", tcli.seed, "override config seed");
  tr->add_option("--threads", tcli.threads, "override config threads");
  tr->add_option("--overfit", tcli.overfit,
                 "sanity mode: full-batch training on the first N samples");
  tr->add_flag("--verbose", tcli.verbose, "per-epoch progress on stderr");

  // eval ---------------------------------------------------------------
  auto* ev = app.add_subcommand("eval", "Evaluate a checkpoint on a dataset");
  EvalCli ecli;
  ev->add_option("--checkpoint", ecli.checkpoint, "checkpoint path")->required();
  ev->add_option("--data", ecli.data_path, "dataset path")->required();
  ev->add_option("--out-dir", ecli.out_dir, "report directory");
  ev->add_option("--key-mode", ecli.key_mode, "known | unknown | both (event)")
      ->check(CLI::IsMember({"known", "unknown", "both"}));
  ev->add_option("--k", ecli.k_list, "hit@k list");

  // predict ------------------------------------------------------------
  auto* pr = app.add_subcommand("predict", "Per-sample predictions as JSONL");
  std::string p_ck, p_data, p_out, p_key = "known";
  pr->add_option("--checkpoint", p_ck, "checkpoint path")->required();
  pr->add_option("--data", p_data, "dataset path")->required();
  pr->add_option("--out", p_out, "output JSONL path")->required();
  pr->add_option("--key-mode", p_key, "known | unknown")
      ->check(CLI::IsMember({"known", "unknown"}));

  // sweep ----------------------------------------------------------------
  auto* sw = app.add_subcommand("sweep", "Architecture sweep on the team task");
  std::string s_cfg, s_data, s_out = ".", s_preset = "all";
  sw->add_option("--config", s_cfg, "base run config (ini)")->required();
  sw->add_option("--data", s_data, "team dataset path")->required();
  sw->add_option("--out-dir", s_out, "output directory");
  sw->add_option("--preset", s_preset,
                 "layers | filter_sizes | base_filters | all")
      ->check(CLI::IsMember({"layers", "filter_sizes", "base_filters", "all"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      json flags;
      flags["task"] = gen_task;
      if (gen_task == "event") {
        data::EventGenOptions opts;
        opts.games = gen_games;
        if (gen_noise >= 0) opts.noise_std = gen_noise;
        opts.class_mix = parse_mix(gen_mix);
        flags["samples"] = gen_samples;
        flags["games"] = gen_games;
        flags["noise"] = opts.noise_std;
        const auto ds = data::generate_events(gen_seed, gen_samples, opts);
        data::save_dataset(ds, gen_out);
      } else {
        data::TeamGenOptions opts;
        opts.possessions_per_game = gen_per_game;
        if (gen_noise >= 0) opts.noise_std = gen_noise;
        flags["teams"] = gen_teams;
        flags["per_team"] = gen_per_team;
        flags["per_game"] = gen_per_game;
        flags["noise"] = opts.noise_std;
        const auto ds = data::generate_possessions(
            gen_seed, data::default_profiles(gen_teams), gen_per_team, opts);
        data::save_dataset(ds, gen_out);
      }
      write_generate_manifest(gen_out, gen_seed, flags);
      std::cout << "dataset: " << gen_out << "\n";
      return 0;
    }
    if (pre->parsed()) {
      const data::RawTracks raw = data::load_tracks(pre_in);
      if (pre_task == "event") {
        data::WindowStats stats;
        const auto ds = data::window_events(raw.table, raw.events, pre_np,
                                            pre_t > 0 ? pre_t : 16, &stats);
        data::save_dataset(ds, pre_out);
        std::cout << "windows: " << stats.emitted << " emitted, "
                  << stats.dropped_proximity << " dropped (15-frame rule), "
                  << stats.dropped_no_key << " dropped (no key track)\n";
      } else {
        const auto ds = data::extract_possessions(raw.table, raw.possessions,
                                                  pre_np,
                                                  pre_t > 0 ? pre_t : 200);
        data::save_dataset(ds, pre_out);
        std::cout << "possessions: " << ds.samples.size() << "\n";
      }
      return 0;
    }
    if (tr->parsed()) {
      tcli.seed_set = seed_opt->count() > 0;
      return cmd_train(tcli);
    }
    if (ev->parsed()) return cmd_eval(ecli);
    if (pr->parsed()) return cmd_predict(p_ck, p_data, p_out, p_key);
    if (sw->parsed()) {
      RunConfig rc = parse_run_config(s_cfg);
      if (rc.task != data::Task::Team) {
        throw ConfigError("sweep runs on the team task");
      }
      data::TeamDataset ds = data::load_team_dataset(s_data);
      rc.classes = ds.header.classes;
      data::normalize(ds);
      std::vector<models::VariantSpec> variants;
      const int nc = ds.header.num_classes();
      if (s_preset == "all") {
        for (const char* p : {"layers", "filter_sizes", "base_filters"}) {
          for (auto& v : models::sweep_preset(p, nc)) variants.push_back(v);
        }
      } else {
        variants = models::sweep_preset(s_preset, nc);
      }
      fs::create_directories(s_out);
      const auto rows = train::run_sweep(rc, ds, variants);
      train::write_sweep_files(rows, s_out + "/sweep.txt", s_out + "/sweep.tsv");
      std::cout << train::sweep_table_text(rows);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
