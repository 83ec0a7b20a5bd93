#include "mosaic/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "mosaic/core.hpp"
#include "mosaic/error.hpp"
#include "mosaic/gaze.hpp"
#include "mosaic/rng.hpp"
#include "mosaic/vision.hpp"

namespace mosaic::synth {

namespace fs = std::filesystem;
using ingest::GazeSample;
using ingest::HeadPoseFrame;
using ingest::HeartSample;
using ingest::InteractionEvent;
using ingest::Joint;
using ingest::LandmarkFrame;
using ingest::TranscriptWord;

std::string_view to_string(Profile profile) noexcept { return profile == Profile::noisy ? "noisy" : "easy"; }

std::optional<Profile> profile_from_string(std::string_view text) noexcept {
  if (text == "easy") return Profile::easy;
  if (text == "noisy") return Profile::noisy;
  return std::nullopt;
}

PhaseBounds phase_bounds(const SynthConfig& cfg) noexcept {
  PhaseBounds b;
  b.opening_end = std::llround(0.1 * static_cast<double>(cfg.talk_ms));
  b.body_end = b.opening_end + std::llround(0.7 * static_cast<double>(cfg.talk_ms));
  b.talk_end = cfg.talk_ms;
  b.span = cfg.talk_ms + cfg.qa_ms;
  return b;
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng stream_rng(const SynthConfig& cfg, std::uint64_t salt) { return Rng(splitmix(splitmix(cfg.seed) ^ salt)); }

double round_to(double v, int decimals) {
  const double f = std::pow(10.0, decimals);
  return std::round(v * f) / f;
}

Millis rand_ms(Rng& rng, Millis lo, Millis hi) { return rng.uniform_int(lo, hi); }

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(v.size()) - 1))];
}

// k distinct indices in [0, n), sorted.
std::vector<std::size_t> sample_indices(Rng& rng, std::size_t n, std::size_t k) {
  if (k > n) throw Error(Errc::invalid_argument, "cannot place " + std::to_string(k) + " items in " + std::to_string(n) + " slots");
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(n) - 1));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> words = {
      "the",      "data",     "results",  "model",    "students", "feedback", "presentation", "analysis",
      "shows",    "we",       "our",      "study",    "method",   "sensors",  "signal",       "evaluation",
      "rubric",   "class",    "time",     "slides",   "audience", "question", "important",    "first",
      "second",   "finally",  "because",  "therefore", "project", "team",     "design",       "users",
      "learning", "course",   "research", "approach", "system",   "figure",   "table",        "number",
      "increase", "compare",  "measure",  "improve",  "value",    "group",    "session",      "topic",
      "goal",     "next",     "section",  "summary",  "example",  "problem",  "solution",     "process",
      "result",   "change",   "level",    "score"};
  return words;
}

const std::vector<std::string>& comment_bank() {
  static const std::vector<std::string> c = {
      "Clear and confident, good pacing overall.",     "Needs more eye contact with the audience.",
      "Slides were readable and well organised.",      "Try to reduce filler words between points.",
      "Strong opening that caught my attention.",      "The conclusion could summarise the key ideas.",
      "Answers to questions were short and precise.",  "Good structure with clear transitions.",
      "Voice was steady but a bit monotone at times.", "Body language looked relaxed and open."};
  return c;
}

double heart_level(Millis t, const PhaseBounds& b) {
  auto ramp = [&](Millis a, Millis e, double v0, double v1) { return v0 + (v1 - v0) * static_cast<double>(t - a) / static_cast<double>(e - a); };
  if (t < b.opening_end) return 70.0;
  if (t < b.opening_end + 30000) return ramp(b.opening_end, b.opening_end + 30000, 70.0, 75.0);
  if (t < b.body_end - 30000) return 75.0;
  if (t < b.body_end) return ramp(b.body_end - 30000, b.body_end, 75.0, 85.0);
  if (t < b.talk_end) return 85.0;
  if (t < b.talk_end + 30000) return ramp(b.talk_end, b.talk_end + 30000, 85.0, 80.0);
  return 80.0;
}

constexpr double kSurgeBpm = 15.0;
constexpr Millis kSurgeHalfWidth = 10000;

// Non-overlapping intervals of length dur inside [lo, hi], at least gap apart.
std::vector<std::pair<Millis, Millis>> place_intervals(Rng& rng, int count, Millis dur, Millis lo, Millis hi, Millis gap,
                                                       std::vector<std::pair<Millis, Millis>>& taken) {
  std::vector<std::pair<Millis, Millis>> out;
  for (int k = 0; k < count; ++k) {
    bool placed = false;
    for (int attempt = 0; attempt < 10000 && !placed; ++attempt) {
      const Millis s = rand_ms(rng, lo, hi - dur) / 100 * 100;
      const Millis e = s + dur;
      const bool clear = std::all_of(taken.begin(), taken.end(), [&](const auto& iv) {
        return e + gap <= iv.first || s >= iv.second + gap;
      });
      if (clear) {
        taken.emplace_back(s, e);
        out.emplace_back(s, e);
        placed = true;
      }
    }
    if (!placed) throw Error(Errc::invalid_argument, "session too short for the scripted intervals");
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

HeartTrack heart_track(const SynthConfig& cfg) {
  Rng rng = stream_rng(cfg, 1);
  const auto b = phase_bounds(cfg);
  const bool noisy = cfg.profile == Profile::noisy;
  HeartTrack h;

  std::vector<Millis> candidates;
  for (Millis c = b.opening_end + 50000; c <= b.body_end - 50000; c += 5000) candidates.push_back(c);
  for (Millis c = b.talk_end + 60000; c <= b.span - 30000; c += 5000) candidates.push_back(c);
  if (cfg.heart_surges > 0) {
    bool ok = false;
    for (int attempt = 0; attempt < 10000 && !ok; ++attempt) {
      const auto idx = sample_indices(rng, candidates.size(), static_cast<std::size_t>(cfg.heart_surges));
      h.surges.clear();
      for (auto i : idx) h.surges.push_back(candidates[i]);
      ok = true;
      for (std::size_t i = 1; i < h.surges.size(); ++i) ok = ok && h.surges[i] - h.surges[i - 1] >= 60000;
    }
    if (!ok) throw Error(Errc::invalid_argument, "cannot space the heart-rate surges 60 s apart");
  }

  const double sd = noisy ? 0.75 : 0.5;
  for (Millis t = 0; t < b.span; t += 1000) {
    double bpm = heart_level(t, b) + rng.normal(0.0, sd);
    for (Millis c : h.surges) {
      const Millis d = t - c;
      if (d > -kSurgeHalfWidth && d < kSurgeHalfWidth) {
        bpm += kSurgeBpm * 0.5 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(d) / kSurgeHalfWidth));
      }
    }
    h.samples.push_back({t, round_to(bpm, 2), false});
  }
  if (noisy) {
    const auto drops = sample_indices(rng, h.samples.size(), 8);
    for (auto i : drops) {
      h.samples[i].bpm = 0.0;
      h.samples[i].artifact = true;
    }
    h.dropouts = drops.size();
    for (auto i : sample_indices(rng, h.samples.size(), 6)) {
      if (!h.samples[i].artifact) h.samples[i].bpm = round_to(h.samples[i].bpm + (rng.bernoulli(0.5) ? 25.0 : -25.0), 2);
    }
  }
  return h;
}

namespace {

HeadPose pose_in(Rng& rng, const std::string& target) {
  HeadPose p;
  p.roll = round_to(rng.uniform(-10.0, 10.0), 3);
  if (target == "audience" || target == "presenter") {
    p.yaw = round_to(rng.uniform(-15.0, 15.0), 3);
    p.pitch = round_to(rng.uniform(-10.0, 20.0), 3);
  } else {
    p.yaw = round_to(rng.uniform(35.0, 65.0), 3);
    p.pitch = round_to(rng.uniform(-15.0, 20.0), 3);
  }
  return p;
}

std::vector<HeadPoseFrame> evaluator_headpose(const SynthConfig& cfg) {
  Rng rng = stream_rng(cfg, 21);
  std::vector<HeadPoseFrame> out;
  const auto b = phase_bounds(cfg);
  std::string target = "presenter";
  for (Millis t = 0; t < b.span; t += 200) {
    if (t % 5000 == 0) target = rng.bernoulli(0.85) ? "presenter" : "screen";
    out.push_back({t, pose_in(rng, target)});
  }
  return out;
}

}  // namespace

HeadPoseTrack headpose_track(const SynthConfig& cfg) {
  Rng rng = stream_rng(cfg, 2);
  const auto b = phase_bounds(cfg);
  const double p_missing = cfg.profile == Profile::noisy ? 0.03 : 0.005;
  HeadPoseTrack h;
  std::map<std::string, std::size_t> counts{{"audience", 0}, {"slides", 0}};
  std::size_t seen = 0;
  const auto n = static_cast<std::size_t>(b.span / 100);
  std::size_t i = 0;
  while (i < n) {
    const double audience = seen == 0 ? 0.0 : static_cast<double>(counts["audience"]) / static_cast<double>(seen);
    bool to_audience = audience < cfg.audience_share;
    if (rng.bernoulli(0.2)) to_audience = !to_audience;
    const std::string target = to_audience ? "audience" : "slides";
    const auto len = static_cast<std::size_t>(rng.uniform_int(15, 60));
    for (std::size_t k = 0; k < len && i < n; ++k, ++i) {
      HeadPoseFrame f;
      f.ts_ms = static_cast<Millis>(i) * 100;
      if (rng.bernoulli(p_missing)) {
        ++h.missing_frames;
      } else {
        const HeadPose p = pose_in(rng, target);
        if (i % 2 == 0) {
          f.rotation = p;
        } else {
          f.rotation = vision::rotation_from_euler(p);
        }
        ++counts[target];
        ++seen;
      }
      h.frames.push_back(f);
    }
  }
  for (const auto& [t, c] : counts) h.shares[t] = static_cast<double>(c) / static_cast<double>(seen);
  return h;
}

GazeTrack gaze_track(const SynthConfig& cfg) {
  Rng rng = stream_rng(cfg, 3);
  const auto b = phase_bounds(cfg);
  constexpr Millis kPeriod = 20;
  const auto n = static_cast<std::size_t>(b.span / kPeriod);
  GazeTrack g;
  std::map<std::string, Millis> time{{"presenter_face", 0}, {"slides", 0}};
  std::vector<Millis> losses;
  if (cfg.profile == Profile::noisy) {
    losses = {static_cast<Millis>(0.3 * static_cast<double>(b.span)), static_cast<Millis>(0.7 * static_cast<double>(b.span))};
  }
  std::size_t next_loss = 0;
  std::optional<std::pair<double, double>> prev;
  auto push = [&](double x, double y, bool valid) {
    g.samples.push_back({static_cast<Millis>(g.samples.size()) * kPeriod, valid ? round_to(x, 4) : 0.0,
                         valid ? round_to(y, 4) : 0.0, valid});
  };
  while (true) {
    const Millis fixated = time["presenter_face"] + time["slides"];
    const double face = fixated == 0 ? 0.0 : static_cast<double>(time["presenter_face"]) / static_cast<double>(fixated);
    bool to_face = face < cfg.face_share;
    if (rng.bernoulli(0.15)) to_face = !to_face;
    const std::string aoi = to_face ? "presenter_face" : "slides";
    double x = 0;
    double y = 0;
    for (int attempt = 0; attempt < 1000; ++attempt) {
      if (to_face) {
        x = rng.uniform(0.37, 0.53);
        y = rng.uniform(0.07, 0.38);
      } else {
        x = rng.uniform(0.62, 0.96);
        y = rng.uniform(0.07, 0.63);
      }
      if (!prev || std::abs(x - prev->first) + std::abs(y - prev->second) >= 0.15) break;
    }
    const auto len = static_cast<std::size_t>(rng.uniform_int(10, 40));

    enum class Gap { none, saccade, blink, loss } gap = Gap::none;
    std::size_t gap_len = 0;
    if (prev) {
      const Millis now = static_cast<Millis>(g.samples.size()) * kPeriod;
      if (next_loss < losses.size() && now >= losses[next_loss]) {
        gap = Gap::loss;
        gap_len = static_cast<std::size_t>(rng.uniform_int(50, 75));
      } else if (rng.bernoulli(0.12)) {
        gap = Gap::blink;
        gap_len = static_cast<std::size_t>(rng.uniform_int(5, 15));
      } else {
        gap = Gap::saccade;
        gap_len = 2;
      }
    }
    if (g.samples.size() + gap_len + len > n) break;
    for (std::size_t k = 0; k < gap_len; ++k) {
      if (gap == Gap::saccade) {
        const double f = static_cast<double>(k + 1) / 3.0;
        push(prev->first + f * (x - prev->first), prev->second + f * (y - prev->second), true);
      } else {
        push(0, 0, false);
      }
    }
    if (gap == Gap::blink) ++g.blinks;
    if (gap == Gap::loss) {
      ++g.data_loss_runs;
      ++next_loss;
    }
    for (std::size_t k = 0; k < len; ++k) {
      push(x + rng.uniform(-0.003, 0.003), y + rng.uniform(-0.003, 0.003), true);
    }
    ++g.fixations;
    time[aoi] += static_cast<Millis>(len) * kPeriod;
    prev = std::make_pair(x, y);
  }
  const auto total = static_cast<double>(time["presenter_face"] + time["slides"]);
  for (const auto& [a, t] : time) g.shares[a] = static_cast<double>(t) / total;
  return g;
}

LandmarkTrack landmark_track(const SynthConfig& cfg) {
  Rng rng = stream_rng(cfg, 4);
  const auto b = phase_bounds(cfg);
  const bool noisy = cfg.profile == Profile::noisy;
  LandmarkTrack lt;
  lt.torso_length = 0.25;
  std::vector<std::pair<Millis, Millis>> taken;
  lt.pacing = place_intervals(rng, cfg.pacing_intervals, 16000, b.opening_end + 20000, b.body_end - 20000, 20000, taken);
  lt.crossed_arms =
      place_intervals(rng, cfg.crossed_arm_intervals, 10000, b.opening_end + 20000, b.body_end - 20000, 20000, taken);

  struct Offset {
    double dx, dy;
  };
  constexpr std::array<Offset, ingest::kJointCount> open{{
      {0.0, 0.22},    {0.015, 0.21},  {-0.015, 0.21}, {0.03, 0.22},  {-0.03, 0.22}, {0.08, 0.35},
      {-0.08, 0.35},  {0.10, 0.47},   {-0.10, 0.47},  {0.11, 0.58},  {-0.11, 0.58}, {0.06, 0.60},
      {-0.06, 0.60},  {0.06, 0.78},   {-0.06, 0.78},  {0.06, 0.95},  {-0.06, 0.95},
  }};
  const double sd = noisy ? 0.003 : 0.0015;
  auto inside = [](const std::vector<std::pair<Millis, Millis>>& v, Millis t) {
    for (const auto& [s, e] : v) {
      if (t >= s && t < e) return std::optional<Millis>(s);
    }
    return std::optional<Millis>();
  };
  std::set<std::size_t> dropped;
  const auto n = static_cast<std::size_t>(b.span / 100);
  if (noisy) {
    for (auto start : sample_indices(rng, n - 4, 20)) {
      const auto len = static_cast<std::size_t>(rng.uniform_int(1, 3));
      for (std::size_t k = 0; k < len; ++k) dropped.insert(start + 1 + k);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Millis t = static_cast<Millis>(i) * 100;
    double cx = 0.5;
    if (const auto s = inside(lt.pacing, t)) {
      cx += 0.5 * lt.torso_length * std::sin(2.0 * std::numbers::pi * 0.5 * static_cast<double>(t - *s) / 1000.0);
    }
    const bool crossed = inside(lt.crossed_arms, t).has_value();
    LandmarkFrame f;
    f.ts_ms = t;
    for (std::size_t j = 0; j < ingest::kJointCount; ++j) {
      Offset o = open[j];
      if (crossed) {
        const auto joint = static_cast<Joint>(j);
        if (joint == Joint::wrist_l) o = {-0.05, 0.48};
        if (joint == Joint::wrist_r) o = {0.05, 0.48};
        if (joint == Joint::elbow_l) o = {0.07, 0.45};
        if (joint == Joint::elbow_r) o = {-0.07, 0.45};
      }
      f.joints[j] = {round_to(cx + o.dx + rng.normal(0.0, sd), 4), round_to(o.dy + rng.normal(0.0, sd), 4), 0.9};
    }
    if (dropped.contains(i)) f[Joint::wrist_l].confidence = 0.1;
    lt.frames.push_back(f);
  }
  return lt;
}

TranscriptTrack transcript_track(const SynthConfig& cfg) {
  Rng rng = stream_rng(cfg, 5);
  const auto b = phase_bounds(cfg);
  const auto& vocab = vocabulary();
  TranscriptTrack tr;

  struct Insert {
    std::vector<std::string> tokens;
    bool repeat = false;
    bool cut = false;
  };
  std::vector<Insert> inserts;
  std::size_t insert_tokens = 0;
  for (const auto& [entry, count] : cfg.fillers) {
    std::vector<std::string> toks;
    for (std::size_t i = 0; i < entry.size();) {
      const auto j = std::min(entry.find(' ', i), entry.size());
      if (j > i) toks.push_back(entry.substr(i, j - i));
      i = j + 1;
    }
    for (int k = 0; k < count; ++k) inserts.push_back({toks});
    insert_tokens += toks.size() * static_cast<std::size_t>(count);
    tr.fillers[entry] = count;
  }
  for (int k = 0; k < cfg.false_starts; ++k) {
    inserts.push_back({{}, k % 2 == 1, k % 2 == 0});
    ++insert_tokens;
  }
  tr.false_starts = cfg.false_starts;
  tr.short_pauses = cfg.short_pauses;
  tr.long_pauses = cfg.long_pauses;

  const Millis first_ms = 1500;
  const Millis target_end = b.talk_end - 5000;
  const Millis pause_budget = 1600 * cfg.short_pauses + 4000 * cfg.long_pauses;
  const auto max_tokens = (target_end - first_ms - pause_budget) / 520;
  if (max_tokens < static_cast<Millis>(insert_tokens + inserts.size() + 2)) {
    throw Error(Errc::invalid_argument, "talk too short for the scripted transcript");
  }
  const auto content_n = static_cast<std::size_t>(max_tokens) - insert_tokens;

  std::vector<std::string> content;
  for (std::size_t i = 0; i < content_n; ++i) {
    std::string w = pick(rng, vocab);
    while (!content.empty() && w == content.back()) w = pick(rng, vocab);
    content.push_back(std::move(w));
  }
  std::vector<std::size_t> order(inserts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
  }
  const auto slots = sample_indices(rng, content_n - 1, inserts.size());
  std::map<std::size_t, std::size_t> at;  // content index -> insert
  for (std::size_t k = 0; k < slots.size(); ++k) at[slots[k] + 1] = order[k];

  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < content_n; ++i) {
    if (auto it = at.find(i); it != at.end()) {
      const auto& ins = inserts[it->second];
      if (ins.repeat) {
        tokens.push_back(content[i]);
      } else if (ins.cut) {
        tokens.push_back(content[i].substr(0, std::max<std::size_t>(1, std::min<std::size_t>(3, content[i].size() - 1))) + "-");
      } else {
        tokens.insert(tokens.end(), ins.tokens.begin(), ins.tokens.end());
      }
    }
    tokens.push_back(content[i]);
  }

  const std::size_t gaps = tokens.size() - 1;
  const auto pause_idx = sample_indices(rng, gaps, static_cast<std::size_t>(cfg.short_pauses + cfg.long_pauses));
  std::vector<int> gap_kind(gaps, 0);
  {
    std::vector<std::size_t> shuffled = pause_idx;
    for (std::size_t i = shuffled.size(); i > 1; --i) {
      std::swap(shuffled[i - 1], shuffled[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
    }
    for (std::size_t k = 0; k < shuffled.size(); ++k) gap_kind[shuffled[k]] = static_cast<int>(k) < cfg.short_pauses ? 1 : 2;
  }
  std::vector<Millis> dur(tokens.size());
  std::vector<Millis> gap(gaps);
  Millis total = 0;
  std::size_t normal = 0;
  for (auto& d : dur) total += d = rand_ms(rng, 180, 320);
  for (std::size_t i = 0; i < gaps; ++i) {
    if (gap_kind[i] == 1) {
      gap[i] = rand_ms(rng, 700, 1600);
    } else if (gap_kind[i] == 2) {
      gap[i] = rand_ms(rng, 2500, 4000);
    } else {
      gap[i] = rand_ms(rng, 60, 200);
      ++normal;
    }
    total += gap[i];
  }
  const Millis room = target_end - first_ms - total;
  if (room > 0 && normal > 0) {
    const Millis extra = std::min<Millis>(250, room / static_cast<Millis>(normal));
    for (std::size_t i = 0; i < gaps; ++i) {
      if (gap_kind[i] == 0) gap[i] += extra;
    }
  }
  Millis t = first_ms;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    tr.words.push_back({tokens[i], t, t + dur[i]});
    t += dur[i];
    if (i < gaps) t += gap[i];
  }
  return tr;
}

AudioTrack audio_track(const SynthConfig& cfg, const TranscriptTrack& transcript, Millis offset_ms) {
  Rng rng = stream_rng(cfg, 6);
  const auto b = phase_bounds(cfg);
  constexpr std::uint32_t kRate = 8000;
  AudioTrack a;
  a.signal.sample_rate = kRate;
  const auto n = static_cast<std::size_t>((b.talk_end - offset_ms) * kRate / 1000);
  a.signal.samples.assign(n, 0.0f);
  double pitch = 150.0;
  for (std::size_t w = 0; w < transcript.words.size(); ++w) {
    if (w % 10 == 0) pitch = 150.0 * std::pow(2.0, rng.uniform(-4.0, 4.0) / 12.0);
    a.pitch_plan_hz.push_back(pitch);
    const auto& word = transcript.words[w];
    const auto s0 = static_cast<std::size_t>((word.start_ms - offset_ms) * kRate / 1000);
    const auto s1 = std::min(n, static_cast<std::size_t>((word.end_ms - offset_ms) * kRate / 1000));
    const std::size_t fade = kRate / 200;
    for (std::size_t s = s0; s < s1; ++s) {
      const double k = static_cast<double>(s - s0);
      double env = 1.0;
      if (s - s0 < fade) env = static_cast<double>(s - s0) / fade;
      if (s1 - s < fade) env = std::min(env, static_cast<double>(s1 - s) / fade);
      a.signal.samples[s] = static_cast<float>(0.3 * env * std::sin(2.0 * std::numbers::pi * pitch * k / kRate));
    }
  }
  if (cfg.profile == Profile::noisy) {
    for (auto& s : a.signal.samples) s += static_cast<float>(rng.normal(0.0, 0.002));
  }
  return a;
}

DeckTrack deck_track(const SynthConfig& cfg) {
  Rng rng = stream_rng(cfg, 7);
  const auto& vocab = vocabulary();
  const int count = std::max(1, cfg.slide_count);
  DeckTrack d;
  d.manifest = Json::array();
  int dense = 0;
  int small = 0;
  int untitled = 0;
  if (count >= 4) {
    const auto idx = sample_indices(rng, static_cast<std::size_t>(count - 1), 3);
    std::vector<int> pickv{static_cast<int>(idx[0]) + 2, static_cast<int>(idx[1]) + 2, static_cast<int>(idx[2]) + 2};
    for (std::size_t i = pickv.size(); i > 1; --i) {
      std::swap(pickv[i - 1], pickv[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
    }
    dense = pickv[0];
    small = pickv[1];
    untitled = pickv[2];
  }
  auto phrase = [&](int words) {
    std::string s;
    for (int i = 0; i < words; ++i) {
      if (i) s += ' ';
      s += pick(rng, vocab);
    }
    return s;
  };
  for (int i = 1; i <= count; ++i) {
    slides::SlideSpec s;
    int words = 0;
    int min_sz = 0;
    if (i == 1) {
      s.title = "Synthetic session " + std::to_string(cfg.seed);
      words += 3;
      s.paragraphs.push_back(std::vector<slides::RunSpec>{{phrase(2), 2800}});
      words += 2;
      min_sz = 2800;
    } else {
      if (i != untitled) {
        const int tw = static_cast<int>(rng.uniform_int(1, 3));
        s.title = phrase(tw);
        words += tw;
      }
      const int paras = i == dense ? 7 : static_cast<int>(rng.uniform_int(2, 4));
      for (int p = 0; p < paras; ++p) {
        const int pw = i == dense ? static_cast<int>(rng.uniform_int(6, 8)) : static_cast<int>(rng.uniform_int(4, 8));
        const int sz = i == small && p == 0 ? 1400 : (rng.bernoulli(0.5) ? 2000 : 2400);
        s.paragraphs.push_back(std::vector<slides::RunSpec>{{phrase(pw), sz}});
        words += pw;
        min_sz = min_sz == 0 ? sz : std::min(min_sz, sz);
      }
      s.images = static_cast<std::size_t>(rng.uniform_int(0, 2));
      s.slide_number = true;
    }
    d.manifest.push_back({{"index", i},
                          {"words", words},
                          {"images", s.images},
                          {"title", s.title.has_value()},
                          {"slide_number", s.slide_number},
                          {"small_font", min_sz > 0 && min_sz < 1800},
                          {"text_dense", words > 40},
                          {"min_font_pt", min_sz / 100.0}});
    d.slides.push_back(std::move(s));
  }
  return d;
}

Rubric default_rubric() {
  struct Def {
    const char* id;
    const char* title;
    const char* phase;
    const char* metric;
  };
  const Def defs[] = {
      {"attention_capture", "Attention capture", "opening", nullptr},
      {"clarity_opening", "Clarity of the opening", "opening", nullptr},
      {"eye_contact", "Eye contact", "body", "headpose.eye_contact_ratio"},
      {"body_language", "Body language", "body", "posture.open_ratio"},
      {"voice", "Voice and fluency", "body", "speech.filler_per_minute"},
      {"structure", "Structure", "body", nullptr},
      {"slides_design", "Slide design", "body", "slides.small_font_slides"},
      {"conclusions", "Conclusions", "conclusion", nullptr},
      {"qa_handling", "Question handling", "qa", nullptr},
  };
  const char* levels[] = {"Not demonstrated", "Weak", "Adequate", "Good", "Excellent"};
  Rubric r;
  r.version = "1.0";
  for (const auto& d : defs) {
    RubricItem item;
    item.id = d.id;
    item.title = d.title;
    for (std::size_t k = 0; k < 5; ++k) item.levels[k] = std::string(levels[k]) + ": " + to_lower(d.title);
    item.phase = d.phase;
    if (d.metric) item.metric_link = d.metric;
    r.items.push_back(std::move(item));
  }
  return r;
}

namespace {

struct Scores {
  std::map<std::string, std::map<std::string, int>> score;
  std::map<std::string, std::map<std::string, std::string>> comment;
};

Scores score_matrix(const SynthConfig& cfg, const Rubric& rubric, const std::vector<core::EvaluatorRef>& evaluators) {
  Rng rng = stream_rng(cfg, 9);
  Scores s;
  for (const auto& item : rubric.items) {
    const auto quality = rng.uniform_int(2, 5);
    for (const auto& e : evaluators) {
      const auto jitter = e.role == Role::self ? rng.uniform_int(-2, 1) : rng.uniform_int(-1, 1);
      s.score[e.id][item.id] = static_cast<int>(std::clamp<std::int64_t>(quality + jitter, 1, 5));
      s.comment[e.id][item.id] = pick(rng, comment_bank());
    }
  }
  return s;
}

struct EventScript {
  std::vector<InteractionEvent> slide_events;
  std::vector<InteractionEvent> evaluator_events;
  Json slide_changes = Json::array();
  Json focus_ms = Json::object();
  Json rating_ts = Json::object();
  Json premature;
};

EventScript event_script(const SynthConfig& cfg, const Rubric& rubric, const std::vector<core::EvaluatorRef>& externals,
                         const Scores& scores) {
  EventScript es;
  const auto b = phase_bounds(cfg);
  Rng rng = stream_rng(cfg, 8);

  // Slide visits: forward through the deck with one quick look back.
  const int count = std::max(1, cfg.slide_count);
  std::vector<int> visits;
  int back_at = 0;
  if (count >= 4) back_at = static_cast<int>(rng.uniform_int(3, count - 1));
  for (int i = 1; i <= count; ++i) {
    visits.push_back(i);
    if (i == back_at) {
      visits.push_back(i - 1);
      visits.push_back(i);
    }
  }
  std::vector<double> weight(visits.size());
  double wsum = 0;
  for (std::size_t k = 0; k < visits.size(); ++k) {
    const bool quick = back_at > 0 && k > 0 && visits[k] < visits[k - 1];
    weight[k] = quick ? 0.0 : rng.uniform(0.7, 1.3);
    wsum += weight[k];
  }
  const bool has_back = back_at > 0;
  const Millis budget = b.talk_end - (has_back ? 3000 : 0);
  Millis enter = 0;
  for (std::size_t k = 0; k < visits.size(); ++k) {
    if (k > 0) {
      const bool back = visits[k] < visits[k - 1];
      es.slide_events.push_back({enter, cfg.presenter_id,
                                 back ? ingest::EventKind::slide_back : ingest::EventKind::slide_advance, std::nullopt,
                                 std::nullopt, std::nullopt});
      es.slide_changes.push_back({{"ts_ms", enter}, {"slide", visits[k]}, {"kind", back ? "back" : "advance"}});
    }
    const bool quick = has_back && k > 0 && visits[k] < visits[k - 1];
    enter += quick ? 3000 : static_cast<Millis>(std::llround(static_cast<double>(budget) * weight[k] / wsum));
  }

  // Evaluator rubric sessions.
  std::vector<std::string> late;
  for (const auto& item : rubric.items) {
    if (item.phase && (*item.phase == "conclusion" || *item.phase == "qa")) late.push_back(item.id);
  }
  const std::string premature_actor = pick(rng, externals).id;
  const std::string premature_item = late.empty() ? std::string() : pick(rng, late);
  for (std::size_t ei = 0; ei < externals.size(); ++ei) {
    const auto& actor = externals[ei].id;
    Rng er = stream_rng(cfg, 100 + ei);
    std::map<std::string, std::vector<std::string>> groups;
    for (const auto& item : rubric.items) {
      std::string ph = item.phase.value_or("body");
      if (actor == premature_actor && item.id == premature_item) ph = "body";
      groups[ph].push_back(item.id);
    }
    for (auto& [ph, ids] : groups) {
      for (std::size_t i = ids.size(); i > 1; --i) {
        std::swap(ids[i - 1], ids[static_cast<std::size_t>(er.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
      }
    }
    Millis cursor = rand_ms(er, 15000, 25000);
    const std::pair<const char*, Millis> starts[] = {
        {"opening", 0}, {"body", b.opening_end + 40000}, {"conclusion", b.body_end + 10000}, {"qa", b.talk_end + 50000}};
    for (const auto& [ph, earliest] : starts) {
      cursor = std::max(cursor, earliest);
      for (const auto& id : groups[ph]) {
        const Millis dur = rand_ms(er, 35000, 45000);
        const Millis f = cursor;
        auto ev = [&](Millis ts, ingest::EventKind kind, std::optional<ingest::EventValue> value) {
          es.evaluator_events.push_back({ts, actor, kind, id, std::move(value), std::nullopt});
        };
        ev(f, ingest::EventKind::item_focus, std::nullopt);
        ev(f + 300, ingest::EventKind::click, std::nullopt);
        const std::string& text = scores.comment.at(actor).at(id);
        Millis k = f + 1000;
        for (char c : text) {
          ev(k, ingest::EventKind::keypress, std::string(c == ' ' ? "space" : (std::isalpha(static_cast<unsigned char>(c)) ? "letter" : "other")));
          k += 120;
        }
        ev(k + 200, ingest::EventKind::comment_edit, static_cast<std::int64_t>(text.size()));
        const Millis rated = f + dur - 2000;
        ev(rated, ingest::EventKind::item_rated, static_cast<std::int64_t>(scores.score.at(actor).at(id)));
        ev(f + dur, ingest::EventKind::item_blur, std::nullopt);
        es.focus_ms[actor][id] = dur;
        es.rating_ts[actor][id] = rated;
        if (actor == premature_actor && id == premature_item) {
          es.premature = {{"actor_id", actor}, {"item_id", id}, {"rating_ts_ms", rated}};
        }
        cursor = f + dur + rand_ms(er, 2000, 8000);
      }
    }
  }
  std::stable_sort(es.evaluator_events.begin(), es.evaluator_events.end(),
                   [](const auto& x, const auto& y) { return x.ts_ms < y.ts_ms; });
  return es;
}

std::vector<Annotation> annotation_script(const SynthConfig& cfg, Json& labels) {
  Rng rng = stream_rng(cfg, 11);
  const auto b = phase_bounds(cfg);
  std::vector<Annotation> out;
  auto add = [&](const std::string& label, AnnotationKind kind, Millis ts, const std::string& source) {
    out.push_back({"", label, kind, ts, source, std::nullopt});
  };
  const std::pair<const char*, std::pair<Millis, Millis>> phases[] = {
      {"phase:opening", {0, b.opening_end}},
      {"phase:body", {b.opening_end, b.body_end}},
      {"phase:conclusion", {b.body_end, b.talk_end}},
      {"phase:qa", {b.talk_end, b.span}}};
  for (const auto& [label, range] : phases) {
    if (range.second <= range.first) continue;
    add(label, AnnotationKind::start, range.first, "ra1");
    add(label, AnnotationKind::end, range.second, "ra1");
  }
  const int eye = static_cast<int>(rng.uniform_int(3, 6));
  const int nervous = static_cast<int>(rng.uniform_int(2, 4));
  for (int i = 0; i < eye; ++i) add("eye_contact", AnnotationKind::instant, rand_ms(rng, 5000, b.talk_end - 5000), "obs1");
  for (int i = 0; i < nervous; ++i) {
    add("nervous_movement", AnnotationKind::instant, rand_ms(rng, 5000, b.talk_end - 5000), "obs1");
  }
  const Millis rs = rand_ms(rng, b.opening_end + 10000, b.body_end - 40000);
  add("reading_notes", AnnotationKind::start, rs, "obs1");
  add("reading_notes", AnnotationKind::end, rs + rand_ms(rng, 10000, 20000), "obs1");
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.ts_ms < y.ts_ms; });
  labels = Json::object();
  for (std::size_t i = 0; i < out.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "a%04zu", i + 1);
    out[i].id = id;
    labels[out[i].label] = labels.value(out[i].label, 0) + 1;
  }
  return out;
}

template <typename T, typename F>
std::vector<T> shifted(std::vector<T> v, Millis offset, F&& shift) {
  for (auto& x : v) shift(x, -offset);
  return v;
}

}  // namespace

Json generate_session(const fs::path& dir, const SynthConfig& cfg) {
  const auto b = phase_bounds(cfg);
  const std::string sid = cfg.session_id.empty() ? "synth-" + std::to_string(cfg.seed) : cfg.session_id;
  const Rubric rubric = default_rubric();

  core::Session s;
  s.id = sid;
  s.presenter_id = cfg.presenter_id;
  s.evaluators = {{"prof1", Role::professor}, {"peer1", Role::peer}, {"peer2", Role::peer}, {cfg.presenter_id, Role::self}};
  const std::vector<core::EvaluatorRef> externals(s.evaluators.begin(), s.evaluators.begin() + 3);
  s.observer_ids = {"obs1", "ra1"};
  s.planned_duration_ms = cfg.talk_ms;
  s.planned_qa_ms = cfg.qa_ms;
  s.slide_count = std::max(1, cfg.slide_count);
  s.rubric_path = "rubric.json";
  s.deck_path = "slides/deck.pptx";
  s.annotation_labels = {"eye_contact", "nervous_movement", "reading_notes", "feedback_usefulness"};
  s.aoi_config = Json::array();
  for (const auto& a : gaze::default_aois()) s.aoi_config.push_back({{"name", a.name}, {"rect", {a.x0, a.y0, a.x1, a.y1}}});
  s.cone_map = {{"slide_side", "left"}};

  Rng orng = stream_rng(cfg, 12);
  auto sensor_offset = [&] { return -rand_ms(orng, 1000, 20000); };
  std::map<std::string, Millis> offsets;
  for (const char* id : {"heart_presenter", "heart_prof1", "headpose_presenter", "headpose_prof1", "landmarks_presenter",
                         "gaze_obs1"}) {
    offsets[id] = sensor_offset();
  }
  offsets["audio"] = rand_ms(orng, 0, 1000);
  offsets["transcript"] = offsets["audio"];
  offsets["slide_events"] = 0;
  offsets["interactions"] = 0;
  offsets["annotations"] = 0;

  fs::create_directories(dir / "streams");
  fs::create_directories(dir / "events");
  fs::create_directories(dir / "slides");
  fs::create_directories(dir / "evaluations");
  Json lengths = Json::object();
  auto stream = [&](const std::string& id, ingest::StreamKind kind, const std::string& path, const std::string& subject,
                    const std::string& bytes, std::size_t records) {
    s.streams.push_back({id, kind, path, subject});
    s.sync_map[id] = offsets.at(id);
    write_file(dir / path, bytes);
    lengths[id] = records;
  };
  auto shift_ts = [](auto& x, Millis d) { x.ts_ms += d; };

  const auto heart = heart_track(cfg);
  stream("heart_presenter", ingest::StreamKind::heart_csv, "streams/heart_" + cfg.presenter_id + ".csv", cfg.presenter_id,
         ingest::write_heart_csv(shifted(heart.samples, offsets["heart_presenter"], shift_ts)), heart.samples.size());
  {
    Rng hr = stream_rng(cfg, 22);
    std::vector<HeartSample> ev;
    for (Millis t = 0; t < b.span; t += 1000) ev.push_back({t, round_to(72.0 + hr.normal(0.0, 1.0), 2), false});
    stream("heart_prof1", ingest::StreamKind::heart_csv, "streams/heart_prof1.csv", "prof1",
           ingest::write_heart_csv(shifted(ev, offsets["heart_prof1"], shift_ts)), ev.size());
  }
  const auto head = headpose_track(cfg);
  stream("headpose_presenter", ingest::StreamKind::headpose_jsonl, "streams/headpose_" + cfg.presenter_id + ".jsonl",
         cfg.presenter_id, ingest::write_headpose_jsonl(shifted(head.frames, offsets["headpose_presenter"], shift_ts)),
         head.frames.size());
  {
    const auto ev = evaluator_headpose(cfg);
    stream("headpose_prof1", ingest::StreamKind::headpose_jsonl, "streams/headpose_prof1.jsonl", "prof1",
           ingest::write_headpose_jsonl(shifted(ev, offsets["headpose_prof1"], shift_ts)), ev.size());
  }
  const auto body = landmark_track(cfg);
  stream("landmarks_presenter", ingest::StreamKind::landmarks_jsonl, "streams/landmarks_" + cfg.presenter_id + ".jsonl",
         cfg.presenter_id, ingest::write_landmarks_jsonl(shifted(body.frames, offsets["landmarks_presenter"], shift_ts)),
         body.frames.size());
  const auto gz = gaze_track(cfg);
  stream("gaze_obs1", ingest::StreamKind::gaze_jsonl, "streams/gaze_obs1.jsonl", "obs1",
         ingest::write_gaze_jsonl(shifted(gz.samples, offsets["gaze_obs1"], shift_ts)), gz.samples.size());
  const auto tr = transcript_track(cfg);
  stream("transcript", ingest::StreamKind::transcript_jsonl, "transcript.jsonl", cfg.presenter_id,
         ingest::write_transcript_jsonl(shifted(tr.words, offsets["transcript"],
                                                [](TranscriptWord& w, Millis d) {
                                                  w.start_ms += d;
                                                  w.end_ms += d;
                                                })),
         tr.words.size());

  const auto scores = score_matrix(cfg, rubric, s.evaluators);
  const auto events = event_script(cfg, rubric, externals, scores);
  stream("slide_events", ingest::StreamKind::events_jsonl, "events/slides.jsonl", cfg.presenter_id,
         ingest::write_events_jsonl(events.slide_events), events.slide_events.size());
  stream("interactions", ingest::StreamKind::events_jsonl, "events/interactions.jsonl", "",
         ingest::write_events_jsonl(events.evaluator_events), events.evaluator_events.size());
  Json labels;
  const auto annotations = annotation_script(cfg, labels);
  stream("annotations", ingest::StreamKind::annotations_jsonl, "annotations.jsonl", "",
         ingest::write_annotations_jsonl(annotations), annotations.size());

  Json audio_manifest = nullptr;
  if (cfg.audio) {
    fs::create_directories(dir / "audio");
    const auto audio = audio_track(cfg, tr, offsets["audio"]);
    s.audio = core::MediaRef{"audio", "audio/talk.wav"};
    s.sync_map["audio"] = offsets["audio"];
    write_file(dir / "audio/talk.wav", speech::write_wav(audio.signal.samples, audio.signal.sample_rate));
    audio_manifest = {{"sample_rate", audio.signal.sample_rate},
                      {"offset_ms", offsets["audio"]},
                      {"samples", audio.signal.samples.size()},
                      {"voiced_words", audio.pitch_plan_hz.size()},
                      {"pitch_min_hz", *std::min_element(audio.pitch_plan_hz.begin(), audio.pitch_plan_hz.end())},
                      {"pitch_max_hz", *std::max_element(audio.pitch_plan_hz.begin(), audio.pitch_plan_hz.end())}};
  }

  const auto deck = deck_track(cfg);
  write_file(dir / "slides/deck.pptx", slides::write_deck(deck.slides));
  write_file(dir / "rubric.json", ingest::write_rubric(rubric));

  Json external_means = Json::object();
  for (const auto& item : rubric.items) {
    double sum = 0;
    for (const auto& e : externals) sum += scores.score.at(e.id).at(item.id);
    external_means[item.id] = sum / static_cast<double>(externals.size());
  }
  for (const auto& e : s.evaluators) {
    Evaluation ev;
    ev.evaluator_id = e.id;
    ev.role = e.role;
    ev.session_id = sid;
    for (const auto& item : rubric.items) {
      ev.items.push_back({item.id, scores.score.at(e.id).at(item.id), scores.comment.at(e.id).at(item.id)});
    }
    write_file(dir / "evaluations" / (e.id + ".json"), ingest::write_evaluation(ev));
  }
  write_file(dir / "session.json", core::write_session_descriptor(s));

  auto intervals = [](const std::vector<std::pair<Millis, Millis>>& v) {
    Json a = Json::array();
    for (const auto& [x, y] : v) a.push_back({x, y});
    return a;
  };
  int filler_total = 0;
  for (const auto& [k, v] : tr.fillers) filler_total += v;
  Json phases = Json::array();
  phases.push_back({{"name", "opening"}, {"start_ms", 0}, {"end_ms", b.opening_end}});
  phases.push_back({{"name", "body"}, {"start_ms", b.opening_end}, {"end_ms", b.body_end}});
  phases.push_back({{"name", "conclusion"}, {"start_ms", b.body_end}, {"end_ms", b.talk_end}});
  if (b.span > b.talk_end) phases.push_back({{"name", "qa"}, {"start_ms", b.talk_end}, {"end_ms", b.span}});

  Json manifest{
      {"seed", cfg.seed},
      {"profile", std::string(to_string(cfg.profile))},
      {"session_id", sid},
      {"presenter_id", cfg.presenter_id},
      {"offsets", offsets},
      {"stream_lengths", lengths},
      {"phases", phases},
      {"heart",
       {{"surges_ms", heart.surges},
        {"amplitude_bpm", kSurgeBpm},
        {"noise_sd", cfg.profile == Profile::noisy ? 0.75 : 0.5},
        {"phase_levels", {{"opening", 70.0}, {"body", 75.0}, {"conclusion", 85.0}, {"qa", 80.0}}},
        {"dropouts", heart.dropouts}}},
      {"headpose",
       {{"targets", {{"audience", cfg.audience_share}, {"slides", 1.0 - cfg.audience_share}}},
        {"shares", head.shares},
        {"frames", head.frames.size()},
        {"missing_frames", head.missing_frames}}},
      {"posture",
       {{"pacing", intervals(body.pacing)},
        {"crossed_arms", intervals(body.crossed_arms)},
        {"torso_length", body.torso_length}}},
      {"gaze",
       {{"observer", "obs1"},
        {"fixations", gz.fixations},
        {"blinks", gz.blinks},
        {"data_loss_runs", gz.data_loss_runs},
        {"targets", {{"presenter_face", cfg.face_share}, {"slides", 1.0 - cfg.face_share}}},
        {"shares", gz.shares}}},
      {"transcript",
       {{"fillers", tr.fillers},
        {"filler_total", filler_total},
        {"false_starts", tr.false_starts},
        {"short_pauses", tr.short_pauses},
        {"long_pauses", tr.long_pauses},
        {"words", tr.words.size()}}},
      {"audio", audio_manifest},
      {"slides", {{"count", deck.slides.size()}, {"per_slide", deck.manifest}, {"changes", events.slide_changes}}},
      {"interaction",
       {{"premature", events.premature}, {"focus_ms", events.focus_ms}, {"rating_ts_ms", events.rating_ts}}},
      {"rubric", {{"scores", scores.score}, {"external_means", external_means}}},
      {"annotations", {{"count", annotations.size()}, {"labels", labels}}}};
  write_file(dir / "ground_truth.json", manifest.dump(2) + "\n");
  return manifest;
}

}  // namespace mosaic::synth
