#include "mosaic/vision.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "mosaic/error.hpp"

namespace mosaic::vision {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kGimbalEps = 1.7453292519057e-8;  // sin(1e-6 degrees)

double wrap180(double deg) {
  // Angles are reported in (-180, 180].
  return deg <= -180.0 ? deg + 360.0 : deg;
}

Mat3 mul(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        c[i][j] += a[i][k] * b[k][j];
      }
    }
  }
  return c;
}

}  // namespace

// R = Ry(yaw) * Rx(-pitch) * Rz(-roll) in a head frame with x to the presenter's
// left, y up and z forward.
Mat3 rotation_from_euler(const HeadPose& pose) {
  const double a = pose.yaw * kDeg;
  const double b = -pose.pitch * kDeg;
  const double g = -pose.roll * kDeg;
  const Mat3 ry{{{std::cos(a), 0, std::sin(a)}, {0, 1, 0}, {-std::sin(a), 0, std::cos(a)}}};
  const Mat3 rx{{{1, 0, 0}, {0, std::cos(b), -std::sin(b)}, {0, std::sin(b), std::cos(b)}}};
  const Mat3 rz{{{std::cos(g), -std::sin(g), 0}, {std::sin(g), std::cos(g), 0}, {0, 0, 1}}};
  return mul(mul(ry, rx), rz);
}

HeadPose euler_from_rotation(const Mat3& r) {
  if (!is_rotation(r)) {
    throw Error(Errc::not_a_rotation, "matrix is not orthonormal with determinant +1");
  }
  const double cb = std::hypot(r[1][0], r[1][1]);
  HeadPose p;
  p.pitch = std::atan2(r[1][2], cb) / kDeg;
  if (cb < kGimbalEps) {
    p.roll = 0.0;
    p.yaw = wrap180(std::atan2(-r[2][0], r[0][0]) / kDeg);
  } else {
    p.yaw = wrap180(std::atan2(r[0][2], r[2][2]) / kDeg);
    p.roll = wrap180(-std::atan2(r[1][0], r[1][1]) / kDeg);
  }
  return p;
}

ConeMap default_presenter_cones(SlideSide slide_side) {
  ConeMap m;
  const bool left = slide_side == SlideSide::left;
  m.cones = {
      {"audience", -20, 20, -15, 25},
      {"slides", left ? 25.0 : -90.0, left ? 90.0 : -25.0, -30, 30},
      {"notes", -25, 25, -60, -20},
      {"floor", -180, 180, -90, -60},
  };
  m.fallback = "other";
  m.focus = "audience";
  return m;
}

ConeMap default_evaluator_cones(SlideSide screen_side) {
  ConeMap m;
  const bool left = screen_side == SlideSide::left;
  m.cones = {
      {"presenter", -25, 25, -20, 25},
      {"screen", left ? 25.0 : -70.0, left ? 70.0 : -25.0, -20, 35},
  };
  m.fallback = "distracted";
  m.focus = "presenter";
  return m;
}

ConeMap cone_map_from_json(const Json& config, std::string_view role) {
  SlideSide side = SlideSide::left;
  if (config.is_object() && config.value("slide_side", std::string("left")) == "right") {
    side = SlideSide::right;
  }
  ConeMap m = role == "evaluator" ? default_evaluator_cones(side) : default_presenter_cones(side);
  if (!config.is_object()) {
    return m;
  }
  auto it = config.find(std::string(role));
  if (it == config.end() || !it->is_array()) {
    return m;
  }
  m.cones.clear();
  for (const auto& c : *it) {
    Cone cone;
    cone.target = c.at("target").get<std::string>();
    if (auto y = c.find("yaw"); y != c.end()) {
      cone.yaw_lo = y->at(0).get<double>();
      cone.yaw_hi = y->at(1).get<double>();
    }
    if (auto p = c.find("pitch"); p != c.end()) {
      cone.pitch_lo = p->at(0).get<double>();
      cone.pitch_hi = p->at(1).get<double>();
    }
    m.cones.push_back(std::move(cone));
  }
  if (auto f = config.find(std::string(role) + "_fallback"); f != config.end()) {
    m.fallback = f->get<std::string>();
  }
  if (auto f = config.find(std::string(role) + "_focus"); f != config.end()) {
    m.focus = f->get<std::string>();
  }
  return m;
}

std::string classify_attention(const HeadPose& pose, const ConeMap& cones) {
  for (const auto& c : cones.cones) {
    if (pose.yaw >= c.yaw_lo && pose.yaw <= c.yaw_hi && pose.pitch >= c.pitch_lo && pose.pitch <= c.pitch_hi) {
      return c.target;
    }
  }
  return cones.fallback;
}

namespace {

std::optional<HeadPose> pose_of(const ingest::HeadPoseFrame& f) {
  if (const auto* m = std::get_if<Mat3>(&f.rotation)) {
    return euler_from_rotation(*m);
  }
  if (const auto* p = std::get_if<HeadPose>(&f.rotation)) {
    return *p;
  }
  return std::nullopt;
}

Millis median_period(std::span<const Millis> ts) {
  if (ts.size() < 2) {
    return 0;
  }
  std::vector<double> d;
  d.reserve(ts.size() - 1);
  for (std::size_t i = 1; i < ts.size(); ++i) {
    d.push_back(static_cast<double>(ts[i] - ts[i - 1]));
  }
  return static_cast<Millis>(std::llround(stats::median(std::move(d))));
}

void normalize(std::map<std::string, double>& shares) {
  double total = 0.0;
  for (const auto& [k, v] : shares) {
    total += v;
  }
  if (total <= 0.0) {
    shares.clear();
    return;
  }
  for (auto& [k, v] : shares) {
    v /= total;
  }
}

}  // namespace

AttentionSummary attention_summary(std::span<const ingest::HeadPoseFrame> frames, const ConeMap& cones,
                                   const core::PhaseSchedule& phases, std::size_t max_away) {
  if (frames.empty()) {
    throw Error(Errc::empty_stream, "head pose");
  }
  std::vector<Millis> ts;
  ts.reserve(frames.size());
  for (const auto& f : frames) {
    ts.push_back(f.ts_ms);
  }
  const Millis period = median_period(ts);
  const Millis cap = 5 * period;

  AttentionSummary out;
  out.frames = frames.size();
  std::map<std::string, double> ms_by_target;
  std::vector<AwayInterval> away;
  std::optional<AwayInterval> run;

  for (std::size_t i = 0; i < frames.size(); ++i) {
    Millis w = i + 1 < frames.size() ? frames[i + 1].ts_ms - frames[i].ts_ms : period;
    if (period > 0) {
      w = std::min(w, cap);
    }
    const auto pose = pose_of(frames[i]);
    if (!pose) {
      ++out.missing_frames;
      out.missing_ms += w;
      if (run) {
        away.push_back(*run);
        run.reset();
      }
      continue;
    }
    const std::string target = classify_attention(*pose, cones);
    ms_by_target[target] += static_cast<double>(w);
    out.classified_ms += w;
    if (const auto* ph = core::phase_at(phases, frames[i].ts_ms)) {
      out.per_phase[std::string(core::to_string(ph->name))][target] += static_cast<double>(w);
    }
    if (target != cones.focus) {
      if (!run) {
        run = AwayInterval{frames[i].ts_ms, frames[i].ts_ms + w, target};
      } else {
        run->end_ms = frames[i].ts_ms + w;
        if (run->target != target) {
          run->target = "mixed";
        }
      }
    } else if (run) {
      away.push_back(*run);
      run.reset();
    }
  }
  if (run) {
    away.push_back(*run);
  }
  out.shares = ms_by_target;
  normalize(out.shares);
  for (auto& [phase, shares] : out.per_phase) {
    normalize(shares);
  }
  if (auto it = out.shares.find(cones.focus); it != out.shares.end()) {
    out.eye_contact_ratio = it->second;
  }
  std::stable_sort(away.begin(), away.end(), [](const AwayInterval& a, const AwayInterval& b) {
    return (a.end_ms - a.start_ms) > (b.end_ms - b.start_ms);
  });
  if (away.size() > max_away) {
    away.resize(max_away);
  }
  out.longest_away = std::move(away);
  return out;
}

namespace {

using ingest::Joint;
using ingest::LandmarkFrame;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

Point mid(const ingest::Keypoint& a, const ingest::Keypoint& b) { return {(a.x + b.x) / 2, (a.y + b.y) / 2}; }

// Per-joint validity after bridging short low-confidence gaps by linear interpolation.
struct CleanFrames {
  std::vector<LandmarkFrame> frames;
  std::vector<std::array<bool, ingest::kJointCount>> ok;

  bool has(std::size_t i, std::initializer_list<Joint> joints) const {
    return std::all_of(joints.begin(), joints.end(), [&](Joint j) { return ok[i][static_cast<std::size_t>(j)]; });
  }
};

CleanFrames interpolate(std::span<const LandmarkFrame> in, const PostureConfig& cfg) {
  CleanFrames c;
  c.frames.assign(in.begin(), in.end());
  c.ok.resize(in.size());
  for (std::size_t j = 0; j < ingest::kJointCount; ++j) {
    std::optional<std::size_t> prev;
    for (std::size_t i = 0; i < in.size(); ++i) {
      const bool good = in[i].joints[j].confidence >= cfg.min_confidence;
      c.ok[i][j] = good;
      if (!good) {
        continue;
      }
      if (prev && i > *prev + 1 && in[i].ts_ms - in[*prev].ts_ms <= cfg.max_interpolation_gap_ms) {
        const auto& a = in[*prev].joints[j];
        const auto& b = in[i].joints[j];
        const double span = static_cast<double>(in[i].ts_ms - in[*prev].ts_ms);
        for (std::size_t k = *prev + 1; k < i; ++k) {
          const double t = span > 0 ? static_cast<double>(in[k].ts_ms - in[*prev].ts_ms) / span : 0.0;
          c.frames[k].joints[j] = {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y), cfg.min_confidence};
          c.ok[k][j] = true;
        }
      }
      prev = i;
    }
  }
  return c;
}

// Turns per-frame flags (nullopt = not computable) into sustained intervals.
std::vector<Interval> sustained(const std::vector<LandmarkFrame>& frames, const std::vector<std::optional<bool>>& flag,
                                Millis min_ms) {
  std::vector<Interval> out;
  std::optional<Millis> start;
  for (std::size_t i = 0; i <= frames.size(); ++i) {
    const bool on = i < frames.size() && flag[i].value_or(false);
    if (on && !start) {
      start = frames[i].ts_ms;
    } else if (!on && start) {
      const Millis end = i < frames.size() ? frames[i].ts_ms : frames.back().ts_ms;
      if (end - *start >= min_ms) {
        out.push_back({*start, end});
      }
      start.reset();
    }
  }
  return out;
}

Millis total(const std::vector<Interval>& v) {
  Millis t = 0;
  for (const auto& i : v) {
    t += i.end_ms - i.start_ms;
  }
  return t;
}

bool overlaps(const std::vector<Interval>& v, Millis lo, Millis hi) {
  return std::any_of(v.begin(), v.end(), [&](const Interval& i) { return i.start_ms < hi && i.end_ms > lo; });
}

struct Excursion {
  Millis ts = 0;
  int sign = 0;
  Millis end = 0;  // last sample still beyond the threshold
};

std::vector<Interval> pacing(const CleanFrames& c, double torso, const PostureConfig& cfg) {
  std::vector<Millis> ts;
  std::vector<double> x;
  for (std::size_t i = 0; i < c.frames.size(); ++i) {
    if (c.has(i, {Joint::hip_l, Joint::hip_r})) {
      ts.push_back(c.frames[i].ts_ms);
      x.push_back(mid(c.frames[i][Joint::hip_l], c.frames[i][Joint::hip_r]).x);
    }
  }
  // Centered moving mean over +-detrend_half_window_ms, two-pointer prefix sums.
  std::vector<double> prefix(x.size() + 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    prefix[i + 1] = prefix[i] + x[i];
  }
  std::vector<Excursion> events;
  std::size_t lo = 0;
  std::size_t hi = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    while (ts[lo] < ts[i] - cfg.detrend_half_window_ms) {
      ++lo;
    }
    while (hi < x.size() && ts[hi] <= ts[i] + cfg.detrend_half_window_ms) {
      ++hi;
    }
    const double trend = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
    const double d = (x[i] - trend) / torso;
    const int sign = d > cfg.pacing_amplitude ? 1 : (d < -cfg.pacing_amplitude ? -1 : 0);
    if (sign == 0) {
      continue;
    }
    if (events.empty() || events.back().sign != sign) {
      events.push_back({ts[i], sign, ts[i]});
    } else {
      events.back().end = ts[i];
    }
  }
  std::vector<Interval> raw;
  const auto need = static_cast<std::size_t>(cfg.pacing_alternations) + 1;
  for (std::size_t i = 0; i + need <= events.size(); ++i) {
    const auto& last = events[i + need - 1];
    if (last.ts - events[i].ts <= cfg.pacing_window_ms) {
      raw.push_back({events[i].ts, last.end});
    }
  }
  std::vector<Interval> merged;
  for (const auto& r : raw) {
    if (!merged.empty() && r.start_ms <= merged.back().end_ms) {
      merged.back().end_ms = std::max(merged.back().end_ms, r.end_ms);
    } else {
      merged.push_back(r);
    }
  }
  return merged;
}

}  // namespace

PostureReport posture_report(std::span<const LandmarkFrame> frames, const PostureConfig& cfg) {
  if (frames.size() < 2) {
    throw Error(Errc::insufficient_landmarks, "fewer than 2 frames");
  }
  const CleanFrames c = interpolate(frames, cfg);
  const auto n = c.frames.size();
  std::size_t torso_ok = 0;
  double torso_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (c.has(i, {Joint::shoulder_l, Joint::shoulder_r, Joint::hip_l, Joint::hip_r})) {
      const auto& f = c.frames[i];
      const Point s = mid(f[Joint::shoulder_l], f[Joint::shoulder_r]);
      const Point h = mid(f[Joint::hip_l], f[Joint::hip_r]);
      torso_sum += std::hypot(s.x - h.x, s.y - h.y);
      ++torso_ok;
    }
  }
  if (torso_ok < 2 || 2 * torso_ok < n) {
    throw Error(Errc::insufficient_landmarks,
                "shoulders and hips visible in " + std::to_string(torso_ok) + " of " + std::to_string(n) + " frames");
  }
  const double torso = torso_sum / static_cast<double>(torso_ok);
  if (!(torso > 0.0)) {
    throw Error(Errc::insufficient_landmarks, "zero torso length");
  }

  PostureReport r;
  r.frames = n;
  r.usable_frames = torso_ok;
  r.torso_length = torso;
  r.first_ms = c.frames.front().ts_ms;
  r.last_ms = c.frames.back().ts_ms;

  std::vector<std::optional<bool>> crossed(n);
  std::vector<std::optional<bool>> hunched(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = c.frames[i];
    if (!c.has(i, {Joint::shoulder_l, Joint::shoulder_r, Joint::hip_l, Joint::hip_r})) {
      continue;
    }
    const Point sh = mid(f[Joint::shoulder_l], f[Joint::shoulder_r]);
    const Point hp = mid(f[Joint::hip_l], f[Joint::hip_r]);
    if (c.has(i, {Joint::wrist_l, Joint::wrist_r})) {
      // Lateral axis pointing to the presenter's left, in image units.
      const double side = f[Joint::shoulder_l].x >= f[Joint::shoulder_r].x ? 1.0 : -1.0;
      const double mid_x = (sh.x + hp.x) / 2;
      const double margin = cfg.arm_margin * torso;
      const double top = std::min(sh.y, hp.y);
      const double bottom = std::max(sh.y, hp.y);
      const auto& wl = f[Joint::wrist_l];
      const auto& wr = f[Joint::wrist_r];
      const bool lateral = side * (wl.x - mid_x) < -margin && side * (wr.x - mid_x) > margin;
      const bool height = wl.y >= top && wl.y <= bottom && wr.y >= top && wr.y <= bottom;
      crossed[i] = lateral && height;
    }
    if (c.has(i, {Joint::ear_l, Joint::ear_r})) {
      const Point ear = mid(f[Joint::ear_l], f[Joint::ear_r]);
      hunched[i] = (sh.y - ear.y) < cfg.hunch_gap * torso;
    }
  }
  r.crossed_arm_intervals = sustained(c.frames, crossed, cfg.sustain_ms);
  r.hunched_intervals = sustained(c.frames, hunched, cfg.sustain_ms);
  r.pacing_episodes = pacing(c, torso, cfg);

  const auto seconds = static_cast<std::size_t>((r.last_ms - r.first_ms) / 1000 + 1);
  std::vector<double> disp(seconds, 0.0);
  std::vector<double> covered(seconds, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    double sum = 0.0;
    int joints = 0;
    for (std::size_t j = 0; j < ingest::kJointCount; ++j) {
      if (c.ok[i][j] && c.ok[i - 1][j]) {
        const auto& a = c.frames[i - 1].joints[j];
        const auto& b = c.frames[i].joints[j];
        sum += std::hypot(b.x - a.x, b.y - a.y);
        ++joints;
      }
    }
    const auto bucket = static_cast<std::size_t>((c.frames[i].ts_ms - r.first_ms) / 1000);
    covered[bucket] += static_cast<double>(c.frames[i].ts_ms - c.frames[i - 1].ts_ms) / 1000.0;
    if (joints > 0) {
      disp[bucket] += sum / joints;
    }
  }
  r.movement_energy_series.resize(seconds);
  r.openness_series.resize(seconds);
  for (std::size_t k = 0; k < seconds; ++k) {
    r.movement_energy_series[k] = covered[k] > 0 ? disp[k] / covered[k] / torso : 0.0;
    const Millis lo = r.first_ms + static_cast<Millis>(k) * 1000;
    r.openness_series[k] = !overlaps(r.crossed_arm_intervals, lo, lo + 1000) && !overlaps(r.hunched_intervals, lo, lo + 1000);
  }
  const double span = std::max<double>(1.0, static_cast<double>(r.last_ms - r.first_ms));
  r.crossed_ratio = static_cast<double>(total(r.crossed_arm_intervals)) / span;
  r.hunched_ratio = static_cast<double>(total(r.hunched_intervals)) / span;
  r.pacing_ratio = static_cast<double>(total(r.pacing_episodes)) / span;
  r.open_ratio = static_cast<double>(std::count(r.openness_series.begin(), r.openness_series.end(), true)) /
                 static_cast<double>(seconds);
  r.mean_energy = stats::mean(r.movement_energy_series);
  return r;
}

}  // namespace mosaic::vision
