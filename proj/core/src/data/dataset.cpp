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

#include "trajnet/data/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "trajnet/errors.hpp"

namespace trajnet::data {

using nlohmann::json;

namespace {

[[noreturn]] void fail_line(const std::string& path, std::size_t line,
                            const std::string& msg) {
  throw FormatError(path + ":" + std::to_string(line) + ": " + msg);
}

json series_to_json(const AgentSeries& a, bool with_mask) {
  json j;
  j["x"] = a.x;
  j["y"] = a.y;
  if (with_mask) {
    std::vector<int> m(a.mask.begin(), a.mask.end());
    j["m"] = m;
  }
  return j;
}

AgentSeries series_from_json(const json& j, bool with_mask) {
  AgentSeries a;
  a.x = j.at("x").get<std::vector<double>>();
  a.y = j.at("y").get<std::vector<double>>();
  if (with_mask) {
    auto m = j.at("m").get<std::vector<int>>();
    a.mask.assign(m.begin(), m.end());
  }
  return a;
}

void check_series(const AgentSeries& a, int t, bool with_mask,
                  const std::string& who, const std::string& path,
                  std::size_t line) {
  if (static_cast<int>(a.x.size()) != t || static_cast<int>(a.y.size()) != t) {
    fail_line(path, line,
              who + " series has " + std::to_string(a.x.size()) +
                  " frames, header declares t=" + std::to_string(t));
  }
  if (with_mask && static_cast<int>(a.mask.size()) != t) {
    fail_line(path, line, who + " mask length mismatch");
  }
  for (int i = 0; i < t; ++i) {
    if (!std::isfinite(a.x[i]) || !std::isfinite(a.y[i])) {
      fail_line(path, line, who + " has a non-finite coordinate");
    }
    if (with_mask && a.mask[i] == 0 && (a.x[i] != 0.0 || a.y[i] != 0.0)) {
      fail_line(path, line,
                who + " frame " + std::to_string(i) +
                    " is masked absent but has nonzero coordinates");
    }
  }
}

json header_to_json(const DatasetHeader& h) {
  json j;
  j["format_version"] = h.format_version;
  j["task"] = task_name(h.task);
  j["np"] = h.np;
  j["t"] = h.t;
  j["bounds"] = {h.bounds.xmin, h.bounds.xmax, h.bounds.ymin, h.bounds.ymax};
  j["classes"] = h.classes;
  j["normalized"] = h.normalized;
  return j;
}

DatasetHeader header_from_json(const json& j, const std::string& path) {
  DatasetHeader h;
  h.format_version = j.at("format_version").get<int>();
  if (h.format_version != 1) {
    throw FormatError(path + ":1: unsupported format_version " +
                      std::to_string(h.format_version));
  }
  h.task = task_from_name(j.at("task").get<std::string>());
  h.np = j.at("np").get<int>();
  h.t = j.at("t").get<int>();
  auto b = j.at("bounds").get<std::vector<double>>();
  if (b.size() != 4) throw FormatError(path + ":1: bounds must be [xmin,xmax,ymin,ymax]");
  h.bounds = {b[0], b[1], b[2], b[3]};
  h.classes = j.at("classes").get<std::vector<std::string>>();
  h.normalized = j.value("normalized", false);
  if (h.np < 1 || h.t < 0) throw FormatError(path + ":1: bad np/t");
  if (h.classes.empty()) throw FormatError(path + ":1: empty class list");
  return h;
}

json parse_line(const std::string& text, const std::string& path,
                std::size_t line) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail_line(path, line, "not valid JSON");
  return j;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  return in;
}

}  // namespace

bool AgentSeries::fully_absent() const {
  if (mask.empty()) return false;
  return std::all_of(mask.begin(), mask.end(),
                     [](std::uint8_t m) { return m == 0; });
}

SignalTensor AgentSeries::to_tensor() const {
  std::vector<double> v;
  v.reserve(x.size() * 2);
  v.insert(v.end(), x.begin(), x.end());
  v.insert(v.end(), y.begin(), y.end());
  return SignalTensor::from_raw(2, static_cast<int>(x.size()), std::move(v));
}

int possession_pad_length(const PossessionSample& s) {
  const int t = static_cast<int>(s.ball.x.size());
  for (int f = 0; f < t; ++f) {
    bool all_zero = s.ball.x[f] == 0.0 && s.ball.y[f] == 0.0;
    for (const auto& p : s.players) {
      if (!all_zero) break;
      all_zero = p.x[f] == 0.0 && p.y[f] == 0.0;
    }
    if (!all_zero) return f;
  }
  return t;
}

const char* task_name(Task t) { return t == Task::Event ? "event" : "team"; }

Task task_from_name(const std::string& name) {
  if (name == "event") return Task::Event;
  if (name == "team") return Task::Team;
  throw FormatError("unknown task '" + name + "'");
}

int DatasetHeader::class_id(const std::string& label) const {
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i] == label) return static_cast<int>(i);
  }
  throw FormatError("unknown class label '" + label + "'");
}

void save_dataset(const EventDataset& ds, const std::string& path) {
  auto out = open_out(path);
  out << header_to_json(ds.header).dump() << "\n";
  for (const auto& s : ds.samples) {
    json j;
    j["label"] = ds.header.classes.at(s.label);
    if (s.key >= 0) j["key"] = s.key;
    j["game"] = s.game;
    j["center"] = s.center;
    json persons = json::array();
    for (const auto& p : s.persons) persons.push_back(series_to_json(p, true));
    j["persons"] = std::move(persons);
    out << j.dump() << "\n";
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

void save_dataset(const TeamDataset& ds, const std::string& path) {
  auto out = open_out(path);
  out << header_to_json(ds.header).dump() << "\n";
  for (const auto& s : ds.samples) {
    json j;
    j["label"] = ds.header.classes.at(s.team);
    j["game"] = s.game;
    j["possession"] = s.possession;
    j["ball"] = series_to_json(s.ball, false);
    json players = json::array();
    for (const auto& p : s.players) players.push_back(series_to_json(p, false));
    j["players"] = std::move(players);
    out << j.dump() << "\n";
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

DatasetHeader peek_header(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ":1: missing header line");
  return header_from_json(parse_line(line, path, 1), path);
}

EventDataset load_event_dataset(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ":1: missing header line");
  EventDataset ds;
  ds.header = header_from_json(parse_line(line, path, 1), path);
  if (ds.header.task != Task::Event) {
    throw FormatError(path + ":1: expected an event dataset, header says '" +
                      std::string(task_name(ds.header.task)) + "'");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = parse_line(line, path, lineno);
    TrajectorySample s;
    try {
      s.label = ds.header.class_id(j.at("label").get<std::string>());
      s.key = j.value("key", -1);
      s.game = j.value("game", -1);
      s.center = j.value("center", static_cast<std::int64_t>(-1));
      for (const auto& pj : j.at("persons")) {
        s.persons.push_back(series_from_json(pj, true));
      }
    } catch (const FormatError& e) {
      fail_line(path, lineno, e.what());
    } catch (const json::exception& e) {
      fail_line(path, lineno, e.what());
    }
    if (static_cast<int>(s.persons.size()) != ds.header.np) {
      fail_line(path, lineno,
                "record has " + std::to_string(s.persons.size()) +
                    " person slots, header declares np=" +
                    std::to_string(ds.header.np));
    }
    for (std::size_t p = 0; p < s.persons.size(); ++p) {
      check_series(s.persons[p], ds.header.t, true,
                   "person " + std::to_string(p), path, lineno);
    }
    if (s.key >= ds.header.np || s.key < -1) {
      fail_line(path, lineno, "key index out of range");
    }
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

TeamDataset load_team_dataset(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ":1: missing header line");
  TeamDataset ds;
  ds.header = header_from_json(parse_line(line, path, 1), path);
  if (ds.header.task != Task::Team) {
    throw FormatError(path + ":1: expected a team dataset, header says '" +
                      std::string(task_name(ds.header.task)) + "'");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = parse_line(line, path, lineno);
    PossessionSample s;
    try {
      s.team = ds.header.class_id(j.at("label").get<std::string>());
      s.game = j.value("game", -1);
      s.possession = j.value("possession", -1);
      s.ball = series_from_json(j.at("ball"), false);
      for (const auto& pj : j.at("players")) {
        s.players.push_back(series_from_json(pj, false));
      }
    } catch (const FormatError& e) {
      fail_line(path, lineno, e.what());
    } catch (const json::exception& e) {
      fail_line(path, lineno, e.what());
    }
    if (static_cast<int>(s.players.size()) != ds.header.np) {
      fail_line(path, lineno,
                "record has " + std::to_string(s.players.size()) +
                    " players, header declares np=" + std::to_string(ds.header.np));
    }
    check_series(s.ball, ds.header.t, false, "ball", path, lineno);
    for (std::size_t p = 0; p < s.players.size(); ++p) {
      check_series(s.players[p], ds.header.t, false,
                   "player " + std::to_string(p), path, lineno);
    }
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

namespace {

struct AffineMap {
  double ax, bx, ay, by;
  double x(double v) const { return ax * v + bx; }
  double y(double v) const { return ay * v + by; }
};

AffineMap unit_map(const Bounds& b) {
  if (!(b.xmax > b.xmin) || !(b.ymax > b.ymin)) {
    throw InvalidArgument("normalize: degenerate coordinate bounds");
  }
  return {2.0 / (b.xmax - b.xmin), -(b.xmax + b.xmin) / (b.xmax - b.xmin),
          2.0 / (b.ymax - b.ymin), -(b.ymax + b.ymin) / (b.ymax - b.ymin)};
}

}  // namespace

void normalize(EventDataset& ds) {
  if (ds.header.normalized) return;
  const AffineMap m = unit_map(ds.header.bounds);
  for (auto& s : ds.samples) {
    for (auto& p : s.persons) {
      for (std::size_t f = 0; f < p.x.size(); ++f) {
        if (!p.present_at(static_cast<int>(f))) continue;  // absent stays 0
        p.x[f] = m.x(p.x[f]);
        p.y[f] = m.y(p.y[f]);
      }
    }
  }
  ds.header.bounds = {-1.0, 1.0, -1.0, 1.0};
  ds.header.normalized = true;
}

void normalize(TeamDataset& ds) {
  if (ds.header.normalized) return;
  const AffineMap m = unit_map(ds.header.bounds);
  for (auto& s : ds.samples) {
    const int pad = possession_pad_length(s);
    auto apply = [&](AgentSeries& a) {
      for (std::size_t f = pad; f < a.x.size(); ++f) {
        a.x[f] = m.x(a.x[f]);
        a.y[f] = m.y(a.y[f]);
      }
    };
    apply(s.ball);
    for (auto& p : s.players) apply(p);
  }
  ds.header.bounds = {-1.0, 1.0, -1.0, 1.0};
  ds.header.normalized = true;
}

std::string file_checksum(const std::string& path) {
  auto in = open_in(path);
  std::uint64_t h = 1469598103934665603ull;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    const std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace trajnet::data
