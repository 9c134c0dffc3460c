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

#include "trajnet/data/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trajnet/data/tracks.hpp"
#include "trajnet/errors.hpp"
#include "trajnet/rng.hpp"

namespace trajnet::data {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kFps = 25.0;
constexpr double kDt = 1.0 / kFps;

// NHL rink and NBA court extents, feet.
constexpr double kRinkW = 200.0, kRinkH = 85.0;
constexpr double kCourtW = 94.0, kCourtH = 50.0;

struct Vec {
  double x = 0, y = 0;
  Vec operator+(const Vec& o) const { return {x + o.x, y + o.y}; }
  Vec operator-(const Vec& o) const { return {x - o.x, y - o.y}; }
  Vec operator*(double s) const { return {x * s, y * s}; }
  double norm() const { return std::sqrt(x * x + y * y); }
};

Vec polar(double r, double angle) {
  return {r * std::cos(angle), r * std::sin(angle)};
}

Vec clamp_speed(Vec v, double cap) {
  const double n = v.norm();
  return n > cap ? v * (cap / n) : v;
}

double clampd(double v, double lo, double hi) {
  return std::min(std::max(v, lo), hi);
}

/// Largest-remainder apportionment of n into the given proportions; the
/// realized counts are always within one of mix*n.
std::vector<int> apportion(const std::vector<double>& mix, int n) {
  const double total = std::accumulate(mix.begin(), mix.end(), 0.0);
  if (!(total > 0.0)) throw InvalidArgument("class mix must have positive mass");
  std::vector<int> counts(mix.size(), 0);
  std::vector<std::pair<double, std::size_t>> rem;
  int assigned = 0;
  for (std::size_t c = 0; c < mix.size(); ++c) {
    const double exact = mix[c] / total * n;
    counts[c] = static_cast<int>(exact);
    assigned += counts[c];
    rem.push_back({exact - counts[c], c});
  }
  std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (int i = 0; i < n - assigned; ++i) counts[rem[i % rem.size()].second]++;
  return counts;
}

// ---------------------------------------------------------------------------
// Event motifs
// ---------------------------------------------------------------------------

struct Path {
  std::vector<double> x, y;
  explicit Path(int t) : x(t, 0.0), y(t, 0.0) {}
  void set(int f, Vec p) {
    x[f] = p.x;
    y[f] = p.y;
  }
  Vec at(int f) const { return {x[f], y[f]}; }
};

/// Walks p0 forward with a per-step velocity callback.
template <typename VelFn>
Path walk(int t, Vec p0, VelFn vel) {
  Path path(t);
  Vec p = p0;
  path.set(0, p);
  for (int f = 1; f < t; ++f) {
    p = p + vel(f - 1) * kDt;
    path.set(f, p);
  }
  return path;
}

Path background_skater(Rng& rng, Vec anchor, int t) {
  Vec v = polar(rng.uniform(4.0, 14.0), rng.uniform(0.0, 2 * kPi));
  Path path(t);
  Vec p = anchor;
  path.set(0, p);
  for (int f = 1; f < t; ++f) {
    v.x += rng.normal(0.0, 1.2);
    v.y += rng.normal(0.0, 1.2);
    v = clamp_speed(v, 30.0);
    p = p + v * kDt;
    path.set(f, p);
  }
  return path;
}

struct EventScene {
  std::vector<Path> roles;  // role 0 = key, role 1 = partner (if any)
  bool has_partner = false;
};

EventScene make_event_scene(Rng& rng, int label, int np, int t) {
  const int center = (t - 1) / 2;
  EventScene scene;

  Vec kc;  // key position at the center frame
  switch (label) {
    case 0: {  // pass: the key's motion vector hands off to a receiver
      kc = {rng.uniform(40.0, kRinkW - 40.0), rng.uniform(25.0, kRinkH - 25.0)};
      const double th = rng.uniform(0.0, 2 * kPi);
      const Vec v = polar(rng.uniform(15.0, 25.0), th);
      scene.roles.push_back(walk(t, kc - v * (center * kDt), [&](int s) {
        if (s < center) return v;
        return v * std::pow(0.7, s - center + 1);  // brakes after the release
      }));
      const Vec rc = kc + polar(rng.uniform(12.0, 25.0),
                                th + rng.uniform(-0.6, 0.6));
      const Vec drift = polar(rng.uniform(1.0, 4.0), rng.uniform(0.0, 2 * kPi));
      scene.roles.push_back(walk(t, rc - drift * (center * kDt), [&](int s) {
        return s < center ? drift : v;  // receiver picks up the key's velocity
      }));
      scene.has_partner = true;
      break;
    }
    case 1: {  // dump_out: burst away from the defensive end boundary
      kc = {rng.uniform(15.0, 55.0), rng.uniform(18.0, kRinkH - 18.0)};
      const Vec pre = polar(rng.uniform(5.0, 9.0), rng.uniform(-0.35, 0.35));
      const Vec post = polar(rng.uniform(26.0, 34.0), rng.uniform(-0.25, 0.25));
      scene.roles.push_back(walk(t, kc - pre * (center * kDt), [&](int s) {
        return s < center ? pre : post;
      }));
      break;
    }
    case 2: {  // dump_in: burst from neutral ice toward a far zone corner
      kc = {rng.uniform(95.0, 125.0), rng.uniform(22.0, kRinkH - 22.0)};
      const Vec pre = polar(rng.uniform(5.0, 9.0), rng.uniform(-0.35, 0.35));
      const Vec corner = {kRinkW - 3.0,
                          rng.uniform_int(0, 1) ? kRinkH - 6.0 : 6.0};
      Vec dir = corner - kc;
      dir = dir * (1.0 / dir.norm());
      const Vec post = dir * rng.uniform(26.0, 34.0);
      scene.roles.push_back(walk(t, kc - pre * (center * kDt), [&](int s) {
        return s < center ? pre : post;
      }));
      break;
    }
    case 3: {  // shot: goal-directed acceleration
      const Vec goal = {kRinkW - 11.0, kRinkH / 2.0};
      kc = goal + polar(rng.uniform(25.0, 55.0),
                        kPi + rng.uniform(-1.0, 1.0));
      const double s0 = rng.uniform(8.0, 12.0);
      Path path(t);
      Vec dir = goal - kc;
      dir = dir * (1.0 / dir.norm());
      Vec p = kc - dir * (s0 * center * kDt);
      path.set(0, p);
      for (int f = 1; f < t; ++f) {
        const int s = f - 1;
        Vec aim = goal - p;
        const double dn = aim.norm();
        if (dn > 1e-9) aim = aim * (1.0 / dn);
        const double speed =
            s < center ? s0 : std::min(s0 + 3.2 * (s - center + 1), 38.0);
        p = p + aim * (speed * kDt);
        path.set(f, p);
      }
      scene.roles.push_back(std::move(path));
      break;
    }
    case 4: {  // carry: sustained smooth velocity
      kc = {rng.uniform(30.0, kRinkW - 30.0), rng.uniform(25.0, kRinkH - 25.0)};
      const double speed = rng.uniform(12.0, 22.0);
      double th = rng.uniform(0.0, 2 * kPi);
      const double turn = rng.uniform(-0.06, 0.06);
      Path path(t);
      Vec p = kc - polar(speed, th) * (center * kDt);
      path.set(0, p);
      for (int f = 1; f < t; ++f) {
        p = p + polar(speed, th) * kDt;
        th += turn;
        path.set(f, p);
      }
      scene.roles.push_back(std::move(path));
      break;
    }
    default: {  // puck_protection: tight low-speed orbit, opponent shadowing
      const Vec pivot = {rng.uniform(25.0, kRinkW - 25.0),
                         rng.uniform(20.0, kRinkH - 20.0)};
      const double r = rng.uniform(2.5, 5.0);
      const double w =
          (rng.uniform_int(0, 1) ? 1.0 : -1.0) * rng.uniform(1.2, 2.2);
      const double phase = rng.uniform(0.0, 2 * kPi);
      const double dr = rng.uniform(2.5, 5.0);
      const double dphi = rng.uniform(-0.5, 0.5);
      Path key(t), opp(t);
      for (int f = 0; f < t; ++f) {
        key.set(f, pivot + polar(r, phase + w * f * kDt));
        opp.set(f, pivot + polar(r + dr, phase + w * f * kDt + dphi));
      }
      scene.roles.push_back(std::move(key));
      scene.roles.push_back(std::move(opp));
      scene.has_partner = true;
      kc = pivot;
      break;
    }
  }

  while (static_cast<int>(scene.roles.size()) < np) {
    const Vec anchor =
        kc + polar(rng.uniform(15.0, 45.0), rng.uniform(0.0, 2 * kPi));
    scene.roles.push_back(background_skater(rng, anchor, t));
  }
  return scene;
}

}  // namespace

std::vector<double> default_event_weights() {
  return {0.07, 0.6, 1.0, 0.4, 0.2, 0.7};
}

std::vector<double> EventGenOptions::default_mix() {
  // Imbalanced like a real rink-event log: frequency inverse to the stock
  // loss weights, pass-heavy.
  const auto w = default_event_weights();
  std::vector<double> mix(w.size());
  double total = 0.0;
  for (std::size_t c = 0; c < w.size(); ++c) total += 1.0 / w[c];
  for (std::size_t c = 0; c < w.size(); ++c) mix[c] = (1.0 / w[c]) / total;
  return mix;
}

EventDataset generate_events(std::uint64_t seed, int n_samples,
                             const EventGenOptions& opts) {
  if (n_samples < 0) throw InvalidArgument("generate_events: negative count");
  if (opts.np < 1 || opts.t < 2 || opts.games < 1) {
    throw InvalidArgument("generate_events: bad np/t/games");
  }
  const std::vector<double> mix =
      opts.class_mix.empty() ? EventGenOptions::default_mix() : opts.class_mix;
  if (mix.size() != kEventClasses.size()) {
    throw InvalidArgument("generate_events: class mix must cover all 6 classes");
  }

  EventDataset ds;
  ds.header.task = Task::Event;
  ds.header.np = opts.np;
  ds.header.t = opts.t;
  ds.header.bounds = {0.0, kRinkW, 0.0, kRinkH};
  ds.header.classes.assign(kEventClasses.begin(), kEventClasses.end());

  // Exact class counts, then a seeded shuffle of the label order.
  const std::vector<int> counts = apportion(mix, n_samples);
  std::vector<int> labels;
  labels.reserve(n_samples);
  for (std::size_t c = 0; c < counts.size(); ++c) {
    labels.insert(labels.end(), counts[c], static_cast<int>(c));
  }
  Rng shuffle_rng(derive_seed(seed, 0xffffffff00000001ull));
  std::shuffle(labels.begin(), labels.end(), shuffle_rng.engine());

  for (int i = 0; i < n_samples; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    const int label = labels[i];
    EventScene scene = make_event_scene(rng, label, opts.np, opts.t);

    // Role -> slot permutation, so storage order carries no information.
    std::vector<int> slot_of_role(opts.np);
    std::iota(slot_of_role.begin(), slot_of_role.end(), 0);
    std::shuffle(slot_of_role.begin(), slot_of_role.end(), rng.engine());

    TrajectorySample s;
    s.label = label;
    s.game = static_cast<int>(static_cast<std::int64_t>(i) * opts.games /
                              std::max(n_samples, 1));
    s.center = 1000 + i;
    s.persons.resize(opts.np);
    for (int role = 0; role < opts.np; ++role) {
      AgentSeries a;
      a.x = std::move(scene.roles[role].x);
      a.y = std::move(scene.roles[role].y);
      a.mask.assign(opts.t, 1);
      s.persons[slot_of_role[role]] = std::move(a);
    }
    s.key = slot_of_role[0];
    const int partner_slot = scene.has_partner ? slot_of_role[1] : -1;

    for (int p = 0; p < opts.np; ++p) {
      auto& a = s.persons[p];
      for (int f = 0; f < opts.t; ++f) {
        if (opts.noise_std > 0.0) {
          a.x[f] += rng.normal(0.0, opts.noise_std);
          a.y[f] += rng.normal(0.0, opts.noise_std);
        }
        a.x[f] = clampd(a.x[f], 0.5, kRinkW - 0.5);
        a.y[f] = clampd(a.y[f], 0.5, kRinkH - 0.5);
      }
      // Tracking gaps in slots that carry no label information.
      if (p != s.key && p != partner_slot &&
          rng.uniform(0.0, 1.0) < opts.absent_prob) {
        const int g0 = static_cast<int>(rng.uniform_int(0, opts.t - 4));
        const int glen =
            static_cast<int>(rng.uniform_int(3, std::min(10, opts.t - g0)));
        for (int f = g0; f < g0 + glen; ++f) {
          a.x[f] = 0.0;
          a.y[f] = 0.0;
          a.mask[f] = 0;
        }
      }
    }
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

// ---------------------------------------------------------------------------
// Possession generator
// ---------------------------------------------------------------------------

namespace {

// Shared formation template bank (unit offsets: +x toward the hoop).
const std::array<std::array<Vec, 5>, 6> kFormations = {{
    {{{0.0, -0.2}, {-1.0, -1.0}, {1.0, -1.0}, {-1.0, 1.0}, {1.0, 1.0}}},
    {{{-1.2, 0.0}, {-1.2, 1.0}, {-1.2, -1.0}, {0.0, 0.5}, {0.4, -0.8}}},
    {{{0.0, 0.0}, {0.0, 1.3}, {0.0, -1.3}, {-1.2, 0.6}, {1.2, -0.6}}},
    {{{0.2, 1.4}, {0.2, -1.4}, {1.3, 1.1}, {1.3, -1.1}, {-0.6, 0.0}}},
    {{{1.2, 0.8}, {1.2, -0.2}, {0.5, 1.2}, {-0.5, 0.4}, {-0.9, -0.9}}},
    {{{-0.8, 1.1}, {-0.8, -1.1}, {0.8, 1.1}, {0.8, -1.1}, {0.0, 0.1}}},
}};

constexpr Vec kHoop = {kCourtW - 5.25, kCourtH / 2.0};

struct SimResult {
  std::vector<std::vector<double>> x, y;  // [agent][frame]; agent 0 = ball
};

SimResult simulate_possession(Rng& rng, const StyleProfile& prof, int np,
                              int native_len, double noise_std) {
  SimResult sim;
  sim.x.assign(np + 1, std::vector<double>(native_len, 0.0));
  sim.y.assign(np + 1, std::vector<double>(native_len, 0.0));

  const auto& motif =
      prof.motifs[static_cast<std::size_t>(rng.uniform_int(
          0, static_cast<std::int64_t>(prof.motifs.size()) - 1))];

  Vec center = {rng.uniform(18.0, 26.0), rng.uniform(20.0, 30.0)};
  const double adv_speed = prof.speed_mean * 0.22;
  double heading = prof.lane_angle;

  std::vector<Vec> p(np), v(np), jitter(np);
  std::vector<double> cap(np);
  int step_idx = 0;
  auto step_of = [&](int idx) { return motif[idx % motif.size()]; };

  auto redraw_segment = [&]() {
    for (int i = 0; i < np; ++i) {
      cap[i] = clampd(rng.normal(prof.speed_mean, prof.speed_std), 5.0, 30.0);
      jitter[i] = {rng.normal(0.0, 1.2), rng.normal(0.0, 1.2)};
    }
  };

  auto target_of = [&](int i) {
    const MotifStep st = step_of(step_idx);
    const Vec off = kFormations[st.formation % kFormations.size()][i % 5];
    return center + off * prof.spread + jitter[i];
  };

  redraw_segment();
  for (int i = 0; i < np; ++i) {
    p[i] = target_of(i) + Vec{rng.normal(0.0, 2.0), rng.normal(0.0, 2.0)};
    v[i] = {0.0, 0.0};
  }
  Vec ball = p[step_of(0).ball_slot % np];
  int fly_frames = 0;

  const int seg_native = std::max(
      6, static_cast<int>(prof.pass_period * kFps * rng.uniform(0.88, 1.12)));
  int next_switch = seg_native;
  const int shot_start = std::max(0, native_len - 24);

  for (int f = 0; f < native_len; ++f) {
    if (f >= next_switch && f < shot_start) {
      ++step_idx;
      redraw_segment();
      next_switch =
          f + std::max(6, static_cast<int>(prof.pass_period * kFps *
                                           rng.uniform(0.88, 1.12)));
      const Vec hp = p[step_of(step_idx).ball_slot % np];
      const double dist = (hp - ball).norm();
      fly_frames = static_cast<int>(clampd(dist / (45.0 * kDt), 4.0, 20.0));
    }

    heading = prof.lane_angle +
              0.75 * (heading - prof.lane_angle) + rng.normal(0.0, 0.05);
    if (center.x < 64.0) center = center + polar(adv_speed, heading) * kDt;
    center.y = clampd(center.y, 14.0, kCourtH - 14.0);

    for (int i = 0; i < np; ++i) {
      const Vec want = (target_of(i) - p[i]) * 2.2;
      v[i] = (v[i] * 0.75) + clamp_speed(want, cap[i]) * 0.25;
      p[i] = p[i] + v[i] * kDt;
    }

    if (f >= shot_start) {
      const int remaining = native_len - f;
      ball = ball + (kHoop - ball) * (1.0 / remaining);
    } else if (fly_frames > 0) {
      const Vec hp = p[step_of(step_idx).ball_slot % np];
      ball = ball + (hp - ball) * (1.0 / fly_frames);
      --fly_frames;
    } else {
      ball = p[step_of(step_idx).ball_slot % np] + Vec{1.2, 0.0};
    }

    auto put = [&](int agent, Vec q) {
      const double nx =
          clampd(q.x + (noise_std > 0 ? rng.normal(0.0, noise_std) : 0.0), 0.5,
                 kCourtW - 0.5);
      const double ny =
          clampd(q.y + (noise_std > 0 ? rng.normal(0.0, noise_std) : 0.0), 0.5,
                 kCourtH - 0.5);
      sim.x[agent][f] = nx;
      sim.y[agent][f] = ny;
    };
    put(0, ball);
    for (int i = 0; i < np; ++i) put(i + 1, p[i]);
  }
  return sim;
}

}  // namespace

bool same_style(const StyleProfile& a, const StyleProfile& b) {
  return a.lane_angle == b.lane_angle && a.speed_mean == b.speed_mean &&
         a.speed_std == b.speed_std && a.pass_period == b.pass_period &&
         a.spread == b.spread && a.motifs == b.motifs;
}

std::vector<StyleProfile> default_profiles(int n) {
  if (n < 1 || n > 6) {
    throw ConfigError("default_profiles: stock set covers 1..6 teams");
  }
  using Steps = std::vector<MotifStep>;
  std::vector<StyleProfile> all;
  // Twin pair A: identical statistics, different formation order and ball
  // routes.
  all.push_back({"team_a1", -0.25, 15.0, 2.2, 1.8, 10.0,
                 {Steps{{0, 0}, {1, 2}, {2, 4}, {1, 1}}}});
  all.push_back({"team_a2", -0.25, 15.0, 2.2, 1.8, 10.0,
                 {Steps{{0, 4}, {2, 1}, {1, 3}, {2, 0}}}});
  // Twin pair B: identical motif, tempo apart.
  all.push_back({"team_b1", 0.0, 16.5, 2.2, 1.1, 12.0,
                 {Steps{{3, 1}, {4, 3}, {3, 0}, {4, 2}}}});
  all.push_back({"team_b2", 0.0, 16.5, 2.2, 2.3, 12.0,
                 {Steps{{3, 1}, {4, 3}, {3, 0}, {4, 2}}}});
  // Twin pair C: the same cycle walked in opposite directions.
  all.push_back({"team_c1", 0.25, 18.0, 2.2, 1.5, 14.0,
                 {Steps{{5, 0}, {2, 2}, {3, 4}}}});
  all.push_back({"team_c2", 0.25, 18.0, 2.2, 1.5, 14.0,
                 {Steps{{3, 4}, {2, 2}, {5, 0}}}});
  all.resize(n);
  return all;
}

TeamDataset generate_possessions(std::uint64_t seed,
                                 const std::vector<StyleProfile>& profiles,
                                 int n_per_team, const TeamGenOptions& opts) {
  if (profiles.size() < 2) {
    throw InvalidArgument("generate_possessions: need at least 2 profiles");
  }
  if (n_per_team < 1) throw InvalidArgument("generate_possessions: n_per_team < 1");
  if (opts.np < 1 || opts.np > 5 || opts.t < 2 || opts.possessions_per_game < 1) {
    throw InvalidArgument("generate_possessions: bad options");
  }
  for (std::size_t a = 0; a < profiles.size(); ++a) {
    for (std::size_t b = a + 1; b < profiles.size(); ++b) {
      if (same_style(profiles[a], profiles[b]) ||
          profiles[a].name == profiles[b].name) {
        throw InvalidArgument("generate_possessions: duplicate profiles '" +
                              profiles[a].name + "' / " + profiles[b].name);
      }
      if (profiles[a].motifs.empty() || profiles[b].motifs.empty()) {
        throw InvalidArgument("generate_possessions: profile without motifs");
      }
    }
  }

  TeamDataset ds;
  ds.header.task = Task::Team;
  ds.header.np = opts.np;
  ds.header.t = opts.t;
  ds.header.bounds = {0.0, kCourtW, 0.0, kCourtH};
  for (const auto& p : profiles) ds.header.classes.push_back(p.name);

  for (std::size_t ti = 0; ti < profiles.size(); ++ti) {
    for (int j = 0; j < n_per_team; ++j) {
      Rng rng(derive_seed(seed, ti * 1000003ull + static_cast<std::uint64_t>(j)));
      // Native length varies so both crop (long) and pad (short) happen.
      const int native_len = static_cast<int>(rng.uniform_int(320, 560));
      const std::int64_t start = rng.uniform_int(0, 999);
      SimResult sim =
          simulate_possession(rng, profiles[ti], opts.np, native_len,
                              opts.noise_std);

      // Feed the simulated tracks through the production sampling path.
      RawTracks raw;
      raw.table.fps = kFps;
      raw.table.bounds = ds.header.bounds;
      raw.table.classes = ds.header.classes;
      const int game =
          static_cast<int>(ti) * 10000 + j / opts.possessions_per_game;
      std::vector<std::int64_t> frames(native_len);
      std::iota(frames.begin(), frames.end(), start);
      for (int a = 0; a <= opts.np; ++a) {
        Track tr;
        tr.agent = a;
        tr.is_ball = a == 0;
        tr.game = game;
        tr.frames = frames;
        tr.x = std::move(sim.x[a]);
        tr.y = std::move(sim.y[a]);
        raw.table.tracks.push_back(std::move(tr));
      }
      PossessionMark mark;
      mark.game = game;
      mark.index = j;
      mark.start = start;
      mark.end = start + native_len - 1;
      mark.team = profiles[ti].name;
      for (int a = 1; a <= opts.np; ++a) mark.players.push_back(a);

      TeamDataset one = extract_possessions(raw.table, {mark}, opts.np, opts.t);
      ds.samples.push_back(std::move(one.samples.front()));
    }
  }
  return ds;
}

}  // namespace trajnet::data
