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

#include "trajnet/data/dataset.hpp"

namespace trajnet::data {

/// One agent's raw track inside a game: per-frame positions at the native
/// rate, gaps allowed. Frames are strictly ascending.
struct Track {
  int agent = 0;
  bool is_ball = false;
  int game = 0;
  std::vector<std::int64_t> frames;
  std::vector<double> x;
  std::vector<double> y;
};

struct TrackTable {
  double fps = 25.0;
  Bounds bounds;
  std::vector<std::string> classes;
  std::vector<Track> tracks;
};

/// Annotated event: center frame, label, and the acting (key) agent.
struct EventMark {
  int game = 0;
  std::int64_t center = 0;
  std::string label;
  int key_agent = 0;
};

/// Possession span at the native frame rate, inclusive on both ends.
struct PossessionMark {
  int game = 0;
  int index = 0;
  std::int64_t start = 0;
  std::int64_t end = 0;
  std::string team;
  std::vector<int> players;  // offensive agent ids, ball excluded
};

struct RawTracks {
  TrackTable table;
  std::vector<EventMark> events;
  std::vector<PossessionMark> possessions;
};

void save_tracks(const RawTracks& raw, const std::string& path);
RawTracks load_tracks(const std::string& path);

struct WindowStats {
  int emitted = 0;
  int dropped_proximity = 0;  // another event's center within 15 frames
  int dropped_no_key = 0;     // key agent never tracked in that game
};

/// Event windowing: t frames per sample ((t-1)/2 before the center frame,
/// the rest after). An event is dropped when another event in the same game
/// has |delta center| <= 15 (both go). Participants are the key agent plus
/// the np-1 agents nearest to it at the center frame; untracked frames are
/// zero-filled with mask false, so windows crossing a sequence boundary pad
/// instead of dropping.
EventDataset window_events(const TrackTable& table,
                           const std::vector<EventMark>& events, int np = 5,
                           int t = 16, WindowStats* stats = nullptr);

/// Possession extraction: keeps even native frames (half-rate sampling),
/// crops long possessions backward from the last frame to t samples, and
/// zero-pads short ones at the front.
TeamDataset extract_possessions(const TrackTable& table,
                                const std::vector<PossessionMark>& marks,
                                int np = 5, int t = 200);

}  // namespace trajnet::data
