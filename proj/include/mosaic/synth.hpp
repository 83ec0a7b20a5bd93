#pragma once

// Seeded synthetic sessions: full bundles plus a ground-truth manifest.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mosaic/ingest.hpp"
#include "mosaic/slides.hpp"
#include "mosaic/types.hpp"
#include "mosaic/util.hpp"
#include "mosaic/wav.hpp"

namespace mosaic::synth {

enum class Profile { easy, noisy };

std::string_view to_string(Profile profile) noexcept;
std::optional<Profile> profile_from_string(std::string_view text) noexcept;

struct SynthConfig {
  std::uint64_t seed = 42;
  Profile profile = Profile::easy;
  Millis talk_ms = 600000;
  Millis qa_ms = 300000;
  int heart_surges = 3;
  int pacing_intervals = 2;
  int crossed_arm_intervals = 1;
  std::vector<std::pair<std::string, int>> fillers = {{"um", 7}, {"uh", 5}, {"like", 4}, {"you know", 3}, {"er", 2}};
  int false_starts = 4;
  int short_pauses = 12;
  int long_pauses = 5;
  int slide_count = 10;
  double audience_share = 0.6;  // presenter head pose, rest towards the slides
  double face_share = 0.7;      // observer fixation time on the presenter's face, rest on the slides
  std::string session_id;       // empty gives "synth-<seed>"
  std::string presenter_id = "s01";
  bool audio = true;
};

struct PhaseBounds {
  Millis opening_end = 0;
  Millis body_end = 0;
  Millis talk_end = 0;
  Millis span = 0;
};
PhaseBounds phase_bounds(const SynthConfig& cfg) noexcept;

// Stream generators. All times are session time, before clock offsets.
struct HeartTrack {
  std::vector<ingest::HeartSample> samples;
  std::vector<Millis> surges;
  std::size_t dropouts = 0;
};
HeartTrack heart_track(const SynthConfig& cfg);

struct HeadPoseTrack {
  std::vector<ingest::HeadPoseFrame> frames;
  std::map<std::string, double> shares;  // over frames with a face
  std::size_t missing_frames = 0;
};
HeadPoseTrack headpose_track(const SynthConfig& cfg);

struct GazeTrack {
  std::vector<ingest::GazeSample> samples;
  std::size_t fixations = 0;
  std::size_t blinks = 0;
  std::size_t data_loss_runs = 0;
  std::map<std::string, double> shares;  // fixation time per AOI
};
GazeTrack gaze_track(const SynthConfig& cfg);

struct LandmarkTrack {
  std::vector<ingest::LandmarkFrame> frames;
  std::vector<std::pair<Millis, Millis>> pacing;
  std::vector<std::pair<Millis, Millis>> crossed_arms;
  double torso_length = 0.0;
};
LandmarkTrack landmark_track(const SynthConfig& cfg);

struct TranscriptTrack {
  std::vector<ingest::TranscriptWord> words;
  std::map<std::string, int> fillers;
  int false_starts = 0;
  int short_pauses = 0;
  int long_pauses = 0;
};
TranscriptTrack transcript_track(const SynthConfig& cfg);

// Voiced tones over the transcript words, silence elsewhere. The first sample
// sits at session time offset_ms.
struct AudioTrack {
  speech::AudioSignal signal;
  std::vector<double> pitch_plan_hz;  // one per voiced word
};
AudioTrack audio_track(const SynthConfig& cfg, const TranscriptTrack& transcript, Millis offset_ms);

struct DeckTrack {
  std::vector<slides::SlideSpec> slides;
  Json manifest;  // per slide: words, images, small_font, title, slide_number
};
DeckTrack deck_track(const SynthConfig& cfg);

Rubric default_rubric();

// Writes the bundle and ground_truth.json into dir (created when missing) and
// returns the manifest.
Json generate_session(const std::filesystem::path& dir, const SynthConfig& cfg = {});

}  // namespace mosaic::synth
