#pragma once

// Pitch, loudness and pauses from audio; fillers, false starts and pauses from transcripts.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mosaic/ingest.hpp"
#include "mosaic/types.hpp"
#include "mosaic/wav.hpp"

namespace mosaic::speech {

struct FrameConfig {
  double window_ms = 30.0;
  double hop_ms = 10.0;
  double f0_min_hz = 60.0;
  double f0_max_hz = 400.0;
  double min_correlation = 0.5;
  double floor_margin_db = 10.0;
  double floor_percentile = 5.0;
  double floor_cap_db = -50.0;  // the floor never sits above this level
};

struct AudioFeatureFrame {
  Millis ts_ms = 0;  // window centre
  double rms_db = 0.0;
  std::optional<double> f0_hz;
  bool voiced = false;
};

// Silent frames report kSilenceDb.
inline constexpr double kSilenceDb = -200.0;

std::vector<AudioFeatureFrame> audio_features(const AudioSignal& signal, const FrameConfig& cfg = {});

// Pitch of one frame by normalized autocorrelation; nullopt when no lag reaches min_correlation.
struct PitchEstimate {
  double f0_hz = 0.0;
  double correlation = 0.0;
};
std::optional<PitchEstimate> estimate_pitch(std::span<const float> frame, double sample_rate, const FrameConfig& cfg = {});

struct VocalConfig {
  double monotone_semitone_sd = 2.0;
  Millis pause_min_ms = 300;
  Millis long_pause_ms = 2000;
  Millis hop_ms = 10;
};

struct Silence {
  Millis start_ms = 0;
  Millis end_ms = 0;
  bool long_pause = false;
};

struct VocalSummary {
  std::size_t frames = 0;
  std::size_t voiced_frames = 0;
  double voiced_ratio = 0.0;
  double median_hz = 0.0;
  double semitone_sd = 0.0;
  bool monotone = false;
  std::vector<Silence> silences;
  std::vector<std::optional<double>> modulation_per_minute;  // semitone sd per minute
};

// Throws NoVoicedFrames.
VocalSummary vocal_summary(std::span<const AudioFeatureFrame> frames, const VocalConfig& cfg = {});

// Silence segments only; usable when there are no voiced frames.
std::vector<Silence> silence_segments(std::span<const AudioFeatureFrame> frames, const VocalConfig& cfg = {});

// Each entry is a sequence of normalized tokens.
using Lexicon = std::vector<std::vector<std::string>>;

Lexicon default_lexicon();
// One entry per line; blank lines and lines starting with # are skipped.
Lexicon parse_lexicon(std::string_view text);

// Lower-cased with surrounding punctuation removed.
std::string normalize_token(std::string_view word);

struct TranscriptConfig {
  Millis short_pause_ms = 500;
  Millis long_pause_ms = 2000;
};

struct FillerCount {
  std::size_t count = 0;
  std::vector<Millis> ts_ms;
};

struct FalseStart {
  Millis ts_ms = 0;
  std::string word;
};

struct Pause {
  Millis start_ms = 0;
  Millis end_ms = 0;
  bool long_pause = false;
};

struct SpeechPatternReport {
  std::map<std::string, FillerCount> fillers;  // only entries that occurred
  std::size_t filler_total = 0;
  std::vector<FalseStart> false_starts;
  std::vector<Pause> pauses;
  std::size_t short_pauses = 0;
  std::size_t long_pauses = 0;
  std::size_t words = 0;
  Millis span_ms = 0;
  Millis pause_ms = 0;
  Millis long_pause_ms = 0;
  Millis speaking_ms = 0;  // span minus all pauses
  double words_per_minute = 0.0;
};

SpeechPatternReport transcript_patterns(std::span<const ingest::TranscriptWord> words, const Lexicon& lexicon,
                                        const TranscriptConfig& cfg = {});

}  // namespace mosaic::speech
