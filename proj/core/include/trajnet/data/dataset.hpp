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

#include "trajnet/tensor.hpp"

namespace trajnet::data {

/// One agent's (x, y) series. For event samples `mask[t]` says whether the
/// agent was tracked at frame t; untracked frames carry exactly 0.0 in both
/// coordinates. Possession samples leave `mask` empty (presence is implied
/// by the shared leading zero pad).
struct AgentSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<std::uint8_t> mask;

  bool present_at(int t) const { return mask.empty() || mask[t] != 0; }
  bool fully_absent() const;
  /// 2 x T tensor, channels (x, y).
  SignalTensor to_tensor() const;

  bool operator==(const AgentSeries&) const = default;
};

/// One event window: Np person slots, optional key person, event label.
struct TrajectorySample {
  std::vector<AgentSeries> persons;
  int key = -1;    // slot index of the key person; -1 = unknown
  int label = -1;  // class id (index into the dataset's class list)
  int game = -1;
  std::int64_t center = -1;  // source center frame id

  bool operator==(const TrajectorySample&) const = default;
};

/// One possession: ball plus Np player series, group (team) label.
struct PossessionSample {
  AgentSeries ball;
  std::vector<AgentSeries> players;
  int team = -1;  // class id
  int game = -1;
  int possession = -1;

  bool operator==(const PossessionSample&) const = default;
};

/// Longest prefix of frames on which every series (ball and players) is
/// exactly (0, 0); that prefix is the zero pad of a short possession.
int possession_pad_length(const PossessionSample& s);

struct Bounds {
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool operator==(const Bounds&) const = default;
};

enum class Task { Event, Team };

const char* task_name(Task t);
Task task_from_name(const std::string& name);

struct DatasetHeader {
  int format_version = 1;
  Task task = Task::Event;
  int np = 5;
  int t = 16;
  Bounds bounds;
  std::vector<std::string> classes;
  bool normalized = false;  // true once coordinates are mapped to [-1,1]^2

  int num_classes() const { return static_cast<int>(classes.size()); }
  /// Index of `label` in the class list; throws FormatError if unknown.
  int class_id(const std::string& label) const;
};

struct EventDataset {
  DatasetHeader header;
  std::vector<TrajectorySample> samples;
};

struct TeamDataset {
  DatasetHeader header;
  std::vector<PossessionSample> samples;
};

// Line-delimited file format: first line is a header record, each further
// line one sample. Coordinates round-trip exactly (shortest-representation
// decimal doubles). Loading validates every sample invariant and reports
// the offending line number.

void save_dataset(const EventDataset& ds, const std::string& path);
void save_dataset(const TeamDataset& ds, const std::string& path);
EventDataset load_event_dataset(const std::string& path);
TeamDataset load_team_dataset(const std::string& path);
/// Reads just the header line.
DatasetHeader peek_header(const std::string& path);

/// Affinely maps present coordinates so the playing surface spans [-1,1]^2;
/// absent/padded frames stay exactly 0. Updates header bounds and sets
/// `normalized`. No-op when already normalized.
void normalize(EventDataset& ds);
void normalize(TeamDataset& ds);

/// FNV-1a 64 over the file bytes, hex-encoded; used in run manifests.
std::string file_checksum(const std::string& path);

}  // namespace trajnet::data
