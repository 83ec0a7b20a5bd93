#pragma once

// Session model, unified timeline, phase schedule and bundle loading.

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mosaic/ingest.hpp"
#include "mosaic/types.hpp"
#include "mosaic/util.hpp"
#include "mosaic/wav.hpp"

namespace mosaic::core {

// Per-stream clock offset: session_ms = raw_ms + offset.
using SyncMap = std::map<std::string, Millis, std::less<>>;

struct EvaluatorRef {
  std::string id;
  Role role = Role::peer;
  friend bool operator==(const EvaluatorRef&, const EvaluatorRef&) = default;
};

struct StreamRef {
  std::string id;
  ingest::StreamKind kind = ingest::StreamKind::heart_csv;
  std::string path;     // relative to the bundle root
  std::string subject;  // participant the stream belongs to
  friend bool operator==(const StreamRef&, const StreamRef&) = default;
};

struct MediaRef {
  std::string id;
  std::string path;
  friend bool operator==(const MediaRef&, const MediaRef&) = default;
};

struct Session {
  std::string id;
  std::string presenter_id;
  std::vector<EvaluatorRef> evaluators;
  std::vector<std::string> observer_ids;
  Millis planned_duration_ms = 600000;
  Millis planned_qa_ms = 300000;
  int slide_count = 0;  // 0 when only the deck knows
  SyncMap sync_map;
  std::vector<StreamRef> streams;
  std::optional<MediaRef> audio;
  std::optional<std::string> deck_path;
  std::optional<std::string> rubric_path;
  std::optional<std::string> templates_path;
  std::vector<std::string> annotation_labels;
  // Analysis configuration blocks, read by the analysis modules.
  Json aoi_config = Json::array();
  Json cone_map = Json::object();
  Json thresholds = Json::object();

  Millis span_ms() const noexcept { return planned_duration_ms + planned_qa_ms; }
  friend bool operator==(const Session&, const Session&) = default;
};

Session parse_session_descriptor(std::string_view json_text);
std::string write_session_descriptor(const Session& session);

// Throws UnknownStream when stream_id has no offset.
Millis to_session_time(std::string_view stream_id, Millis raw_ts_ms, const SyncMap& sync_map);

enum class PhaseName { opening, body, conclusion, qa, other };

std::string_view to_string(PhaseName name) noexcept;
std::optional<PhaseName> phase_name_from_string(std::string_view text) noexcept;

struct Phase {
  PhaseName name = PhaseName::other;
  Millis start_ms = 0;
  Millis end_ms = 0;  // exclusive
  friend bool operator==(const Phase&, const Phase&) = default;
};

// Non-overlapping, sorted by start_ms, every phase non-empty.
using PhaseSchedule = std::vector<Phase>;

struct PhaseFallback {
  Millis planned_duration_ms = 600000;
  Millis planned_qa_ms = 300000;
  double opening_share = 0.10;
  double body_share = 0.70;
  double conclusion_share = 0.20;
};

// Built from phase:* start/end annotations when any exist, otherwise from the
// proportional fallback. Throws UnpairedPhaseMarker.
PhaseSchedule build_phase_schedule(std::span<const Annotation> annotations, const PhaseFallback& fallback);

const Phase* find_phase(const PhaseSchedule& schedule, std::string_view name) noexcept;
const Phase* phase_at(const PhaseSchedule& schedule, Millis ts_ms) noexcept;

struct LoadOptions {
  bool sort_repair = false;   // stable-sort non-monotonic streams instead of failing
  bool strict_roles = false;  // require 1 professor + 2 peers
};

struct LoadedStream {
  StreamRef ref;
  ingest::StreamData data;
};

// Fully hydrated, immutable session context. All timestamps are session time.
struct SessionContext {
  std::filesystem::path root;
  Session session;
  std::optional<Rubric> rubric;
  std::vector<LoadedStream> streams;
  std::vector<Evaluation> evaluations;
  std::optional<speech::AudioSignal> audio;
  Millis audio_offset_ms = 0;  // session time of the first audio sample
  std::optional<std::string> deck_bytes;
  std::optional<Json> templates;
  std::vector<std::string> warnings;

  // Convenience views; empty when the bundle has no such stream.
  std::vector<const LoadedStream*> streams_of(ingest::StreamKind kind) const;
  std::vector<Annotation> annotations() const;
  std::vector<ingest::InteractionEvent> events() const;  // merged, stable-sorted by ts
  std::vector<ingest::TranscriptWord> transcript() const;
  PhaseSchedule phases() const;
};

// Throws MissingDescriptor, MissingStreamFile, StreamParseError,
// NonMonotonicTimestamps, UnknownStream, RoleRequirement.
SessionContext load_bundle(const std::filesystem::path& root, const LoadOptions& options = {});

}  // namespace mosaic::core
