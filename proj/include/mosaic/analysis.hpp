#pragma once

// Runs the per-modality analyses over a loaded bundle and collects their
// results as report-ready JSON.

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mosaic/assessment.hpp"
#include "mosaic/core.hpp"

namespace mosaic::analysis {

inline constexpr std::array<std::string_view, 8> kAnalysisNames = {
    "headpose", "posture", "audio", "speech", "heart", "gaze", "interaction", "slides"};

bool is_analysis_name(std::string_view name) noexcept;

struct TimelineMark {
  Millis ts_ms = 0;
  std::optional<Millis> end_ms;
  std::string kind;  // annotation, hr_peak, pacing, slide_change, premature_rating
  std::string label;
  std::string source;
};

// One entry per analysis, in kAnalysisNames order:
// {"name", "status": "ok"|"absent", "reason", "metrics", "details", "limitations"}.
struct AnalysisSet {
  std::vector<Json> results;
  assessment::MetricMap metrics;  // "analysis.key" -> value, for feedback evidence
  std::vector<TimelineMark> timeline;
  std::vector<std::string> warnings;
};

struct AnalysisOptions {
  std::set<std::string> only;  // empty runs everything
};

AnalysisSet run_analyses(const core::SessionContext& ctx, const AnalysisOptions& options = {});

}  // namespace mosaic::analysis
