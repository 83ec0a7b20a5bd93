#pragma once

// Head-pose attention classification and posture analysis.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "mosaic/core.hpp"
#include "mosaic/ingest.hpp"
#include "mosaic/types.hpp"

namespace mosaic::vision {

// Throws NotARotation when r is not orthonormal within 1e-6.
HeadPose euler_from_rotation(const Mat3& r);
Mat3 rotation_from_euler(const HeadPose& pose);

struct Interval {
  Millis start_ms = 0;
  Millis end_ms = 0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Closed angular box in degrees.
struct Cone {
  std::string target;
  double yaw_lo = -180.0;
  double yaw_hi = 180.0;
  double pitch_lo = -90.0;
  double pitch_hi = 90.0;
};

struct ConeMap {
  std::vector<Cone> cones;        // first match wins
  std::string fallback = "other";  // matches everything else
  std::string focus = "audience";  // target counted as eye contact
};

enum class SlideSide { left, right };  // presenter's left or right

ConeMap default_presenter_cones(SlideSide slide_side = SlideSide::left);
ConeMap default_evaluator_cones(SlideSide screen_side = SlideSide::left);
// Reads {"slide_side": "left"|"right", "<role>": [{"target", "yaw": [lo, hi], "pitch": [lo, hi]}]}.
// role is "presenter" or "evaluator"; missing entries fall back to the defaults.
ConeMap cone_map_from_json(const Json& config, std::string_view role);

std::string classify_attention(const HeadPose& pose, const ConeMap& cones);

struct AwayInterval {
  Millis start_ms = 0;
  Millis end_ms = 0;
  std::string target;
};

struct AttentionSummary {
  std::map<std::string, double> shares;  // over classified time, sums to 1
  double eye_contact_ratio = 0.0;
  Millis classified_ms = 0;
  Millis missing_ms = 0;
  std::size_t frames = 0;
  std::size_t missing_frames = 0;
  std::map<std::string, std::map<std::string, double>> per_phase;
  std::vector<AwayInterval> longest_away;  // longest first
};

// Each frame is weighted by the time to the next frame, capped at five median
// sample periods; the last frame gets the median period. Throws EmptyStream.
AttentionSummary attention_summary(std::span<const ingest::HeadPoseFrame> frames, const ConeMap& cones,
                                   const core::PhaseSchedule& phases, std::size_t max_away = 5);

struct PostureConfig {
  double arm_margin = 0.10;       // torso lengths
  double hunch_gap = 0.25;        // torso lengths
  Millis sustain_ms = 2000;
  double pacing_amplitude = 0.30;  // torso lengths
  Millis pacing_window_ms = 10000;
  int pacing_alternations = 3;
  Millis detrend_half_window_ms = 5000;
  Millis max_interpolation_gap_ms = 500;
  double min_confidence = ingest::kMinJointConfidence;
};

struct PostureReport {
  Millis first_ms = 0;
  Millis last_ms = 0;
  double torso_length = 0.0;
  std::vector<bool> openness_series;  // per second from first_ms
  std::vector<Interval> crossed_arm_intervals;
  std::vector<Interval> hunched_intervals;
  std::vector<Interval> pacing_episodes;
  std::vector<double> movement_energy_series;  // torso lengths per second
  double open_ratio = 0.0;
  double crossed_ratio = 0.0;
  double hunched_ratio = 0.0;
  double pacing_ratio = 0.0;
  double mean_energy = 0.0;
  std::size_t frames = 0;
  std::size_t usable_frames = 0;
};

// Throws InsufficientLandmarks.
PostureReport posture_report(std::span<const ingest::LandmarkFrame> frames, const PostureConfig& cfg = {});

}  // namespace mosaic::vision
