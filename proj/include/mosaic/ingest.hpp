#pragma once

// Parsers and writers for every stream file in a session bundle. All parsers
// are pure functions over byte buffers. Field names match the bundle format
// documented in docs/bundle-format.md.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mosaic/types.hpp"

namespace mosaic::ingest {

enum class StreamKind {
  heart_csv,
  gaze_jsonl,
  landmarks_jsonl,
  headpose_jsonl,
  transcript_jsonl,
  events_jsonl,
  annotations_jsonl,
};

std::string_view to_string(StreamKind kind) noexcept;
std::optional<StreamKind> stream_kind_from_string(std::string_view text) noexcept;

inline constexpr double kMinPlausibleBpm = 20.0;
inline constexpr double kMaxPlausibleBpm = 250.0;

struct HeartSample {
  Millis ts_ms = 0;
  double bpm = 0.0;
  bool artifact = false;  // outside the physiologic range; kept but excluded from stats

  friend bool operator==(const HeartSample&, const HeartSample&) = default;
};

struct GazeSample {
  Millis ts_ms = 0;
  double x = 0.0;  // normalized scene coordinates
  double y = 0.0;
  bool valid = false;  // eye detected

  friend bool operator==(const GazeSample&, const GazeSample&) = default;
};

enum class Joint : std::uint8_t {
  nose, eye_l, eye_r, ear_l, ear_r,
  shoulder_l, shoulder_r, elbow_l, elbow_r, wrist_l, wrist_r,
  hip_l, hip_r, knee_l, knee_r, ankle_l, ankle_r,
};
inline constexpr std::size_t kJointCount = 17;
inline constexpr std::array<std::string_view, kJointCount> kJointNames = {
    "nose",       "eye_l",      "eye_r",   "ear_l",   "ear_r",   "shoulder_l",
    "shoulder_r", "elbow_l",    "elbow_r", "wrist_l", "wrist_r", "hip_l",
    "hip_r",      "knee_l",     "knee_r",  "ankle_l", "ankle_r"};

// Image coordinates, y grows downward.
struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  double confidence = 0.0;

  friend bool operator==(const Keypoint&, const Keypoint&) = default;
};

inline constexpr double kMinJointConfidence = 0.3;

struct LandmarkFrame {
  Millis ts_ms = 0;
  std::array<Keypoint, kJointCount> joints{};

  const Keypoint& operator[](Joint j) const { return joints[static_cast<std::size_t>(j)]; }
  Keypoint& operator[](Joint j) { return joints[static_cast<std::size_t>(j)]; }
  friend bool operator==(const LandmarkFrame&, const LandmarkFrame&) = default;
};

// Either a rotation matrix, Euler angles, or nothing (face not found).
using HeadRotation = std::variant<std::monostate, Mat3, HeadPose>;

struct HeadPoseFrame {
  Millis ts_ms = 0;
  HeadRotation rotation;

  bool missing() const noexcept { return std::holds_alternative<std::monostate>(rotation); }
  friend bool operator==(const HeadPoseFrame&, const HeadPoseFrame&) = default;
};

struct TranscriptWord {
  std::string word;
  Millis start_ms = 0;
  Millis end_ms = 0;

  friend bool operator==(const TranscriptWord&, const TranscriptWord&) = default;
};

enum class EventKind {
  click, keypress, item_focus, item_blur, item_rated, comment_edit, slide_advance, slide_back,
};

std::string_view to_string(EventKind kind) noexcept;
std::optional<EventKind> event_kind_from_string(std::string_view text) noexcept;

using EventValue = std::variant<std::int64_t, std::string>;

struct InteractionEvent {
  Millis ts_ms = 0;
  std::string actor_id;
  EventKind kind = EventKind::click;
  std::optional<std::string> item_id;
  std::optional<EventValue> value;
  std::optional<Millis> client_ts_ms;

  friend bool operator==(const InteractionEvent&, const InteractionEvent&) = default;
};

using StreamData = std::variant<std::vector<HeartSample>, std::vector<GazeSample>,
                                std::vector<LandmarkFrame>, std::vector<HeadPoseFrame>,
                                std::vector<TranscriptWord>, std::vector<InteractionEvent>,
                                std::vector<Annotation>>;

// Side information produced while parsing.
struct ParseReport {
  std::size_t records = 0;    // non-empty input lines turned into samples
  std::size_t artifacts = 0;  // samples kept but flagged
  std::vector<std::string> warnings;
};

// Throws Error(SchemaError, line, field) or Error(EncodingError).
std::vector<HeartSample> parse_heart_csv(std::string_view bytes, ParseReport* report = nullptr);
std::vector<GazeSample> parse_gaze_jsonl(std::string_view bytes, ParseReport* report = nullptr);
std::vector<LandmarkFrame> parse_landmarks_jsonl(std::string_view bytes, ParseReport* report = nullptr);
std::vector<HeadPoseFrame> parse_headpose_jsonl(std::string_view bytes, ParseReport* report = nullptr);
std::vector<TranscriptWord> parse_transcript_jsonl(std::string_view bytes, ParseReport* report = nullptr);
std::vector<InteractionEvent> parse_events_jsonl(std::string_view bytes, ParseReport* report = nullptr);
std::vector<Annotation> parse_annotations_jsonl(std::string_view bytes, ParseReport* report = nullptr);

StreamData parse_stream(StreamKind kind, std::string_view bytes, ParseReport* report = nullptr);

// Single-record codecs, shared with the capture service.
InteractionEvent parse_event_record(std::string_view json_text, std::size_t line = 1);
std::string write_event_record(const InteractionEvent& event);
Annotation parse_annotation_record(std::string_view json_text, std::size_t line = 1);
std::string write_annotation_record(const Annotation& annotation);

std::string write_heart_csv(std::span<const HeartSample> samples);
std::string write_gaze_jsonl(std::span<const GazeSample> samples);
std::string write_landmarks_jsonl(std::span<const LandmarkFrame> frames);
std::string write_headpose_jsonl(std::span<const HeadPoseFrame> frames);
std::string write_transcript_jsonl(std::span<const TranscriptWord> words);
std::string write_events_jsonl(std::span<const InteractionEvent> events);
std::string write_annotations_jsonl(std::span<const Annotation> annotations);

std::string serialize_stream(const StreamData& data);
std::size_t stream_size(const StreamData& data) noexcept;
StreamKind kind_of(const StreamData& data) noexcept;

Rubric parse_rubric(std::string_view bytes);
std::string write_rubric(const Rubric& rubric);

// Checks rubric closure: each rubric item exactly once, scores integer 1..5.
// Throws MissingItem, ScoreOutOfRange or SchemaError.
Evaluation parse_evaluation(std::string_view bytes, const Rubric& rubric);
std::string write_evaluation(const Evaluation& evaluation);

}  // namespace mosaic::ingest
