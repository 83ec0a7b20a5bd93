#pragma once

// Fixations, saccades and blinks from the observer's eye tracker, and AOI mapping.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "mosaic/core.hpp"
#include "mosaic/ingest.hpp"

namespace mosaic::gaze {

struct FixationConfig {
  double dispersion_threshold = 0.03;  // (max x - min x) + (max y - min y)
  Millis min_fixation_ms = 100;
};

// A fixation spans from its first sample to the next sample in the stream.
struct Fixation {
  Millis start_ms = 0;
  Millis end_ms = 0;
  double x = 0.0;
  double y = 0.0;
  double dispersion = 0.0;
  std::size_t first = 0;  // sample index range [first, last)
  std::size_t last = 0;

  Millis duration_ms() const noexcept { return end_ms - start_ms; }
};

struct Saccade {
  Millis start_ms = 0;  // end of the previous fixation
  Millis end_ms = 0;    // start of the next one
  double amplitude = 0.0;
};

struct FixationResult {
  std::vector<Fixation> fixations;
  std::vector<Saccade> saccades;
};

// Dispersion-threshold identification; invalid samples split windows.
FixationResult detect_fixations(std::span<const ingest::GazeSample> samples, const FixationConfig& cfg = {});

struct BlinkConfig {
  Millis min_ms = 70;
  Millis max_ms = 500;
};

struct Segment {
  Millis start_ms = 0;
  Millis end_ms = 0;
};

struct BlinkResult {
  std::vector<Segment> blinks;
  std::vector<Segment> data_loss;
  Millis tracking_ms = 0;  // stream span minus data loss
  double rate_per_min = 0.0;
};

BlinkResult detect_blinks(std::span<const ingest::GazeSample> samples, const BlinkConfig& cfg = {});

// Closed rectangle in normalized scene coordinates.
struct Aoi {
  std::string name;
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;
};

using AoiConfig = std::vector<Aoi>;

inline constexpr std::string_view kOtherAoi = "other";

AoiConfig default_aois();
// [{"name": ..., "rect": [x0, y0, x1, y1]}]; an empty array gives the defaults.
// Throws SchemaError for rectangles outside the unit square.
AoiConfig aois_from_json(const Json& config);

struct AoiVisit {
  Millis start_ms = 0;
  Millis end_ms = 0;
  std::string aoi;
};

struct AoiSummary {
  std::map<std::string, double> shares;  // every AOI plus "other"
  std::map<std::string, std::map<std::string, double>> per_phase;
  std::vector<AoiVisit> timeline;  // consecutive fixations on one AOI merged
  std::size_t switches = 0;
  Millis fixation_ms = 0;
};

std::string aoi_of(double x, double y, const AoiConfig& aois);
AoiSummary map_aoi(std::span<const Fixation> fixations, const AoiConfig& aois, const core::PhaseSchedule& phases);

}  // namespace mosaic::gaze
