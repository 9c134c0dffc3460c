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

#include "trajnet/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "trajnet/data/generator.hpp"
#include "trajnet/errors.hpp"

namespace trajnet {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

int to_int(const std::string& v, const std::string& what) {
  try {
    std::size_t pos = 0;
    const int r = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw ConfigError(what + ": not an integer: '" + v + "'");
  }
}

double to_double(const std::string& v, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double r = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw ConfigError(what + ": not a number: '" + v + "'");
  }
}

bool to_bool(const std::string& v, const std::string& what) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(what + ": not a boolean: '" + v + "'");
}

std::vector<int> to_int_list(const std::string& v, const std::string& what) {
  std::vector<int> out;
  for (const auto& part : split_list(v)) out.push_back(to_int(part, what));
  return out;
}

std::vector<double> to_double_list(const std::string& v, const std::string& what) {
  std::vector<double> out;
  for (const auto& part : split_list(v)) out.push_back(to_double(part, what));
  return out;
}

}  // namespace

IniFile IniFile::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_string(text.str(), path);
}

IniFile IniFile::parse_string(const std::string& text,
                              const std::string& origin) {
  IniFile ini;
  std::istringstream in(text);
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (std::find(ini.section_order_.begin(), ini.section_order_.end(),
                    section) == ini.section_order_.end()) {
        ini.section_order_.push_back(section);
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected key = value");
    }
    ini.entries_.push_back(
        {section, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
  }
  return ini;
}

std::optional<std::string> IniFile::get(const std::string& section,
                                        const std::string& key) const {
  std::optional<std::string> found;
  for (const auto& e : entries_) {
    if (e.section == section && e.key == key) found = e.value;
  }
  return found;
}

bool IniFile::has_section(const std::string& section) const {
  return std::find(section_order_.begin(), section_order_.end(), section) !=
         section_order_.end();
}

std::vector<std::string> IniFile::keys(const std::string& section) const {
  std::vector<std::string> out;
  for (const auto& e : entries_) {
    if (e.section == section &&
        std::find(out.begin(), out.end(), e.key) == out.end()) {
      out.push_back(e.key);
    }
  }
  return out;
}

void RunConfig::finish(data::Task task_hint) {
  task = task_hint;
  if (t <= 0) t = task == data::Task::Event ? 16 : 200;
  if (train_frac < 0) train_frac = task == data::Task::Event ? 0.5 : 0.6;
  if (val_frac < 0) val_frac = task == data::Task::Event ? 0.25 : 0.2;
  if (test_frac < 0) test_frac = task == data::Task::Event ? 0.25 : 0.2;
  const double sum = train_frac + val_frac + test_frac;
  if (std::fabs(sum - 1.0) > 1e-6) {
    throw ConfigError("split fractions must sum to 1 (got " +
                      std::to_string(sum) + ")");
  }
  if (batch < 1 || epochs < 1 || patience < 0 || threads < 1) {
    throw ConfigError("train: batch/epochs >= 1, patience/threads >= 0/1");
  }
  if (!(lr > 0.0)) throw ConfigError("train: lr must be > 0");
  if (momentum < 0.0 || momentum >= 1.0) {
    throw ConfigError("train: momentum must be in [0, 1)");
  }
}

RunConfig parse_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config_text(text.str(), path);
}

RunConfig parse_run_config_text(const std::string& text,
                                const std::string& origin) {
  const IniFile ini = IniFile::parse_string(text, origin);

  static const std::set<std::string> kModelKeys = {
      "task",    "np",      "t",       "classes", "variant",
      "include_self_pair",  "filters", "widths",  "fc_tail"};
  static const std::set<std::string> kLossKeys = {"weights"};
  static const std::set<std::string> kTrainKeys = {
      "lr",      "momentum",   "batch",      "epochs",    "patience",
      "seed",    "threads",    "deterministic", "train_frac", "val_frac",
      "test_frac"};
  for (const auto& [section, known] :
       std::vector<std::pair<std::string, const std::set<std::string>*>>{
           {"model", &kModelKeys}, {"loss", &kLossKeys}, {"train", &kTrainKeys}}) {
    for (const auto& key : ini.keys(section)) {
      if (!known->count(key)) {
        throw ConfigError(origin + ": unknown key '" + key + "' in [" +
                          section + "]");
      }
    }
  }

  RunConfig rc;
  data::Task task = data::Task::Event;
  if (auto v = ini.get("model", "task")) {
    try {
      task = data::task_from_name(*v);
    } catch (const FormatError& e) {
      throw ConfigError(origin + ": " + e.what());
    }
  }
  rc.t = -1;
  if (auto v = ini.get("model", "np")) rc.np = to_int(*v, "model.np");
  if (auto v = ini.get("model", "t")) rc.t = to_int(*v, "model.t");
  if (auto v = ini.get("model", "classes")) rc.classes = split_list(*v);
  if (auto v = ini.get("model", "variant")) rc.variant = *v;
  if (auto v = ini.get("model", "include_self_pair")) {
    rc.include_self_pair = to_bool(*v, "model.include_self_pair");
  }
  if (auto v = ini.get("model", "filters")) rc.filters = to_int_list(*v, "model.filters");
  if (auto v = ini.get("model", "widths")) rc.widths = to_int_list(*v, "model.widths");
  if (auto v = ini.get("model", "fc_tail")) rc.fc_tail = to_int_list(*v, "model.fc_tail");

  if (auto v = ini.get("loss", "weights")) {
    rc.loss_weights = to_double_list(*v, "loss.weights");
  }

  if (auto v = ini.get("train", "lr")) rc.lr = to_double(*v, "train.lr");
  if (auto v = ini.get("train", "momentum")) rc.momentum = to_double(*v, "train.momentum");
  if (auto v = ini.get("train", "batch")) rc.batch = to_int(*v, "train.batch");
  if (auto v = ini.get("train", "epochs")) rc.epochs = to_int(*v, "train.epochs");
  if (auto v = ini.get("train", "patience")) rc.patience = to_int(*v, "train.patience");
  if (auto v = ini.get("train", "seed")) {
    rc.seed = static_cast<std::uint64_t>(std::stoull(*v));
  }
  if (auto v = ini.get("train", "threads")) rc.threads = to_int(*v, "train.threads");
  if (auto v = ini.get("train", "deterministic")) {
    rc.deterministic = to_bool(*v, "train.deterministic");
  }
  if (auto v = ini.get("train", "train_frac")) rc.train_frac = to_double(*v, "train.train_frac");
  if (auto v = ini.get("train", "val_frac")) rc.val_frac = to_double(*v, "train.val_frac");
  if (auto v = ini.get("train", "test_frac")) rc.test_frac = to_double(*v, "train.test_frac");

  rc.finish(task);
  return rc;
}

std::string run_config_to_ini(const RunConfig& rc) {
  std::ostringstream os;
  os.precision(17);
  os << "[model]\n";
  os << "task = " << data::task_name(rc.task) << "\n";
  os << "np = " << rc.np << "\n";
  os << "t = " << rc.t << "\n";
  auto join = [](const auto& list) {
    std::ostringstream js;
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (i) js << ",";
      js << list[i];
    }
    return js.str();
  };
  if (!rc.classes.empty()) os << "classes = " << join(rc.classes) << "\n";
  os << "variant = " << rc.variant << "\n";
  if (rc.include_self_pair) os << "include_self_pair = true\n";
  if (!rc.filters.empty()) os << "filters = " << join(rc.filters) << "\n";
  if (!rc.widths.empty()) os << "widths = " << join(rc.widths) << "\n";
  if (!rc.fc_tail.empty()) os << "fc_tail = " << join(rc.fc_tail) << "\n";
  if (!rc.loss_weights.empty()) {
    os << "\n[loss]\nweights = " << join(rc.loss_weights) << "\n";
  }
  os << "\n[train]\n";
  os << "lr = " << rc.lr << "\n";
  os << "momentum = " << rc.momentum << "\n";
  os << "batch = " << rc.batch << "\n";
  os << "epochs = " << rc.epochs << "\n";
  os << "patience = " << rc.patience << "\n";
  os << "seed = " << rc.seed << "\n";
  os << "threads = " << rc.threads << "\n";
  os << "deterministic = " << (rc.deterministic ? "true" : "false") << "\n";
  os << "train_frac = " << rc.train_frac << "\n";
  os << "val_frac = " << rc.val_frac << "\n";
  os << "test_frac = " << rc.test_frac << "\n";
  return os.str();
}

std::vector<double> default_loss_weights(data::Task task, int num_classes) {
  if (task == data::Task::Event && num_classes == 6) {
    return data::default_event_weights();
  }
  return std::vector<double>(num_classes, 1.0);
}

models::SharedCompareConfig build_shared_compare_config(const RunConfig& rc) {
  if (rc.classes.empty()) {
    throw ConfigError("shared-compare config: class list not resolved");
  }
  models::SharedCompareConfig cfg =
      models::SharedCompareConfig::defaults(static_cast<int>(rc.classes.size()));
  cfg.np = rc.np;
  cfg.t = rc.t;
  cfg.include_self_pair = rc.include_self_pair;
  return cfg;
}

models::StackedConfig build_stacked_config(const RunConfig& rc) {
  if (rc.classes.empty()) {
    throw ConfigError("stacked config: class list not resolved");
  }
  const int nc = static_cast<int>(rc.classes.size());
  models::StackedConfig cfg;
  if (!rc.filters.empty() || !rc.widths.empty()) {
    cfg = models::StackedConfig::conv_stack(rc.filters, rc.widths, rc.fc_tail, nc);
  } else if (rc.variant == "default" || rc.variant == "5conv") {
    cfg = models::StackedConfig::five_conv(nc);
    cfg.fc_tail = rc.fc_tail;
  } else {
    bool found = false;
    for (const char* preset : {"layers", "filter_sizes", "base_filters"}) {
      for (auto& v : models::sweep_preset(preset, nc)) {
        if (v.name == rc.variant) {
          cfg = v.cfg;
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found) {
      throw ConfigError("unknown stacked variant '" + rc.variant + "'");
    }
  }
  cfg.np = rc.np;
  cfg.t = rc.t;
  return cfg;
}

}  // namespace trajnet
