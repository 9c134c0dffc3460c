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

#include "trajnet/data/tracks.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include <json.hpp>

#include "trajnet/errors.hpp"

namespace trajnet::data {

using nlohmann::json;

namespace {

[[noreturn]] void fail_line(const std::string& path, std::size_t line,
                            const std::string& msg) {
  throw FormatError(path + ":" + std::to_string(line) + ": " + msg);
}

/// Position of `track` at `frame`; false if untracked there.
bool track_at(const Track& tr, std::int64_t frame, double* px, double* py) {
  auto it = std::lower_bound(tr.frames.begin(), tr.frames.end(), frame);
  if (it == tr.frames.end() || *it != frame) return false;
  const std::size_t i = static_cast<std::size_t>(it - tr.frames.begin());
  *px = tr.x[i];
  *py = tr.y[i];
  return true;
}

/// Nearest tracked frame to `frame` within [lo, hi]; earlier wins ties.
bool track_near(const Track& tr, std::int64_t frame, std::int64_t lo,
                std::int64_t hi, double* px, double* py) {
  std::int64_t best = -1;
  std::int64_t best_d = std::numeric_limits<std::int64_t>::max();
  for (std::size_t i = 0; i < tr.frames.size(); ++i) {
    const std::int64_t f = tr.frames[i];
    if (f < lo || f > hi) continue;
    const std::int64_t d = std::llabs(f - frame);
    if (d < best_d) {
      best_d = d;
      best = static_cast<std::int64_t>(i);
    }
  }
  if (best < 0) return false;
  *px = tr.x[static_cast<std::size_t>(best)];
  *py = tr.y[static_cast<std::size_t>(best)];
  return true;
}

AgentSeries cut_window(const Track* tr, std::int64_t first, int t) {
  AgentSeries s;
  s.x.assign(t, 0.0);
  s.y.assign(t, 0.0);
  s.mask.assign(t, 0);
  if (!tr) return s;
  for (int f = 0; f < t; ++f) {
    double px, py;
    if (track_at(*tr, first + f, &px, &py)) {
      s.x[f] = px;
      s.y[f] = py;
      s.mask[f] = 1;
    }
  }
  return s;
}

}  // namespace

void save_tracks(const RawTracks& raw, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  json h;
  h["format_version"] = 1;
  h["kind"] = "tracks";
  h["fps"] = raw.table.fps;
  h["bounds"] = {raw.table.bounds.xmin, raw.table.bounds.xmax,
                 raw.table.bounds.ymin, raw.table.bounds.ymax};
  h["classes"] = raw.table.classes;
  out << h.dump() << "\n";
  for (const auto& tr : raw.table.tracks) {
    json j;
    j["type"] = "track";
    j["agent"] = tr.agent;
    j["ball"] = tr.is_ball;
    j["game"] = tr.game;
    j["frames"] = tr.frames;
    j["x"] = tr.x;
    j["y"] = tr.y;
    out << j.dump() << "\n";
  }
  for (const auto& e : raw.events) {
    json j;
    j["type"] = "event";
    j["game"] = e.game;
    j["center"] = e.center;
    j["label"] = e.label;
    j["key"] = e.key_agent;
    out << j.dump() << "\n";
  }
  for (const auto& p : raw.possessions) {
    json j;
    j["type"] = "possession";
    j["game"] = p.game;
    j["index"] = p.index;
    j["start"] = p.start;
    j["end"] = p.end;
    j["team"] = p.team;
    j["players"] = p.players;
    out << j.dump() << "\n";
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

RawTracks load_tracks(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ":1: missing header line");
  json h = json::parse(line, nullptr, false);
  if (h.is_discarded()) fail_line(path, 1, "not valid JSON");
  RawTracks raw;
  try {
    if (h.at("kind").get<std::string>() != "tracks") {
      fail_line(path, 1, "not a tracks file");
    }
    raw.table.fps = h.at("fps").get<double>();
    auto b = h.at("bounds").get<std::vector<double>>();
    if (b.size() != 4) fail_line(path, 1, "bounds must be [xmin,xmax,ymin,ymax]");
    raw.table.bounds = {b[0], b[1], b[2], b[3]};
    raw.table.classes = h.at("classes").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    fail_line(path, 1, e.what());
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) fail_line(path, lineno, "not valid JSON");
    try {
      const std::string type = j.at("type").get<std::string>();
      if (type == "track") {
        Track tr;
        tr.agent = j.at("agent").get<int>();
        tr.is_ball = j.value("ball", false);
        tr.game = j.at("game").get<int>();
        tr.frames = j.at("frames").get<std::vector<std::int64_t>>();
        tr.x = j.at("x").get<std::vector<double>>();
        tr.y = j.at("y").get<std::vector<double>>();
        if (tr.x.size() != tr.frames.size() || tr.y.size() != tr.frames.size()) {
          fail_line(path, lineno, "track arrays disagree in length");
        }
        if (!std::is_sorted(tr.frames.begin(), tr.frames.end())) {
          fail_line(path, lineno, "track frames must be ascending");
        }
        raw.table.tracks.push_back(std::move(tr));
      } else if (type == "event") {
        raw.events.push_back({j.at("game").get<int>(),
                              j.at("center").get<std::int64_t>(),
                              j.at("label").get<std::string>(),
                              j.at("key").get<int>()});
      } else if (type == "possession") {
        raw.possessions.push_back(
            {j.at("game").get<int>(), j.at("index").get<int>(),
             j.at("start").get<std::int64_t>(), j.at("end").get<std::int64_t>(),
             j.at("team").get<std::string>(),
             j.at("players").get<std::vector<int>>()});
      } else {
        fail_line(path, lineno, "unknown record type '" + type + "'");
      }
    } catch (const json::exception& e) {
      fail_line(path, lineno, e.what());
    }
  }
  return raw;
}

EventDataset window_events(const TrackTable& table,
                           const std::vector<EventMark>& events, int np, int t,
                           WindowStats* stats) {
  if (np < 1 || t < 1) throw InvalidArgument("window_events: np and t must be >= 1");
  WindowStats local;
  WindowStats& st = stats ? *stats : local;

  EventDataset ds;
  ds.header.task = Task::Event;
  ds.header.np = np;
  ds.header.t = t;
  ds.header.bounds = table.bounds;
  ds.header.classes = table.classes;

  const int before = (t - 1) / 2;

  std::map<int, std::vector<const Track*>> by_game;
  for (const auto& tr : table.tracks) by_game[tr.game].push_back(&tr);

  for (std::size_t ei = 0; ei < events.size(); ++ei) {
    const EventMark& e = events[ei];
    bool close = false;
    for (std::size_t oj = 0; oj < events.size() && !close; ++oj) {
      if (oj == ei || events[oj].game != e.game) continue;
      close = std::llabs(events[oj].center - e.center) <= 15;
    }
    if (close) {
      ++st.dropped_proximity;
      continue;
    }

    const std::int64_t first = e.center - before;
    const std::int64_t last = first + t - 1;
    const auto git = by_game.find(e.game);
    const Track* key_track = nullptr;
    if (git != by_game.end()) {
      for (const Track* tr : git->second) {
        if (!tr->is_ball && tr->agent == e.key_agent) {
          key_track = tr;
          break;
        }
      }
    }
    double kx = 0, ky = 0;
    if (!key_track || !track_near(*key_track, e.center, first, last, &kx, &ky)) {
      ++st.dropped_no_key;
      continue;
    }

    // Others ranked by distance to the key at the center frame (nearest
    // tracked frame stands in when the center itself is a gap).
    struct Cand {
      const Track* track;
      double dist2;
    };
    std::vector<Cand> cands;
    for (const Track* tr : git->second) {
      if (tr->is_ball || tr == key_track) continue;
      double px, py;
      if (!track_near(*tr, e.center, first, last, &px, &py)) continue;
      const double dx = px - kx, dy = py - ky;
      cands.push_back({tr, dx * dx + dy * dy});
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
      return a.track->agent < b.track->agent;
    });

    std::vector<const Track*> chosen = {key_track};
    for (const auto& c : cands) {
      if (static_cast<int>(chosen.size()) >= np) break;
      chosen.push_back(c.track);
    }
    // Stored slot order is ascending agent id; the model reorders by
    // geometry anyway.
    std::sort(chosen.begin(), chosen.end(),
              [](const Track* a, const Track* b) { return a->agent < b->agent; });

    TrajectorySample s;
    s.game = e.game;
    s.center = e.center;
    s.label = ds.header.class_id(e.label);
    for (int slot = 0; slot < np; ++slot) {
      const Track* tr = slot < static_cast<int>(chosen.size()) ? chosen[slot] : nullptr;
      if (tr == key_track) s.key = slot;
      s.persons.push_back(cut_window(tr, first, t));
    }
    ds.samples.push_back(std::move(s));
    ++st.emitted;
  }
  return ds;
}

TeamDataset extract_possessions(const TrackTable& table,
                                const std::vector<PossessionMark>& marks,
                                int np, int t) {
  if (np < 1 || t < 1) throw InvalidArgument("extract_possessions: np and t must be >= 1");
  TeamDataset ds;
  ds.header.task = Task::Team;
  ds.header.np = np;
  ds.header.t = t;
  ds.header.bounds = table.bounds;
  ds.header.classes = table.classes;

  std::map<int, std::vector<const Track*>> by_game;
  for (const auto& tr : table.tracks) by_game[tr.game].push_back(&tr);

  for (const auto& m : marks) {
    if (m.end < m.start) {
      throw InvalidArgument("possession " + std::to_string(m.index) +
                            ": empty frame range");
    }
    // Half-rate sampling with a fixed phase: even native frame ids.
    std::vector<std::int64_t> sampled;
    for (std::int64_t f = m.start; f <= m.end; ++f) {
      if (f % 2 == 0) sampled.push_back(f);
    }
    if (sampled.empty()) {
      throw InvalidArgument("possession " + std::to_string(m.index) +
                            ": no frames survive sampling");
    }
    // Crop backward from the last frame; the shot stays in view.
    if (static_cast<int>(sampled.size()) > t) {
      sampled.erase(sampled.begin(), sampled.end() - t);
    }
    const int pad = t - static_cast<int>(sampled.size());

    const auto git = by_game.find(m.game);
    if (git == by_game.end()) {
      throw FormatError("possession " + std::to_string(m.index) +
                        ": game " + std::to_string(m.game) + " has no tracks");
    }
    const Track* ball = nullptr;
    for (const Track* tr : git->second) {
      if (tr->is_ball) {
        ball = tr;
        break;
      }
    }
    if (!ball) {
      throw FormatError("possession " + std::to_string(m.index) +
                        ": missing ball track");
    }
    if (static_cast<int>(m.players.size()) != np) {
      throw FormatError("possession " + std::to_string(m.index) + ": has " +
                        std::to_string(m.players.size()) +
                        " player ids, expected " + std::to_string(np));
    }

    auto cut = [&](const Track& tr) {
      AgentSeries s;
      s.x.assign(t, 0.0);
      s.y.assign(t, 0.0);
      for (std::size_t i = 0; i < sampled.size(); ++i) {
        double px, py;
        if (track_at(tr, sampled[i], &px, &py)) {
          s.x[pad + i] = px;
          s.y[pad + i] = py;
        }
      }
      return s;
    };

    PossessionSample s;
    s.game = m.game;
    s.possession = m.index;
    s.team = ds.header.class_id(m.team);
    s.ball = cut(*ball);
    for (int pid : m.players) {
      const Track* tr = nullptr;
      for (const Track* cand : git->second) {
        if (!cand->is_ball && cand->agent == pid) {
          tr = cand;
          break;
        }
      }
      if (!tr) {
        throw FormatError("possession " + std::to_string(m.index) +
                          ": player " + std::to_string(pid) + " has no track");
      }
      s.players.push_back(cut(*tr));
    }
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

}  // namespace trajnet::data
