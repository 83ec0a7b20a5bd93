#pragma once

// Heart-rate smoothing, peak detection, t-tests and event alignment.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mosaic/core.hpp"
#include "mosaic/ingest.hpp"

namespace mosaic::biosignal {

using ingest::HeartSample;

// Centered moving median over valid samples; artifact samples keep their flag
// but take the median of their valid neighbours.
std::vector<HeartSample> smooth(std::span<const HeartSample> series, int window = 5);

struct PeakConfig {
  Millis baseline_window_ms = 60000;
  double z_threshold = 3.0;
  Millis min_separation_ms = 30000;
  double mad_floor = 0.5;
};

struct PeakEvent {
  Millis ts_ms = 0;
  double bpm = 0.0;
  double z = 0.0;
};

// z = (x - rolling median) / max(rolling MAD, floor). When raw is given (same
// length and timestamps as smoothed), the MAD is taken over its valid samples.
std::vector<PeakEvent> detect_peaks(std::span<const HeartSample> smoothed, const PeakConfig& cfg = {},
                                    std::span<const HeartSample> raw = {});

enum class TestMode { paired, welch };

std::string_view to_string(TestMode mode) noexcept;

struct TestResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // two-sided
  TestMode mode = TestMode::welch;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

// Throws DegenerateSample.
TestResult t_test(std::span<const double> a, std::span<const double> b, TestMode mode);

// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);
double student_t_two_sided_p(double t, double df);

struct PhaseStats {
  std::string phase;
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct PhaseComparison {
  std::string a;
  std::string b;
  TestResult test;
};

struct TimelineEvent {
  Millis ts_ms = 0;
  std::string kind;   // e.g. talk_start, slide_advance, annotation
  std::string label;
};

struct PeakMatch {
  PeakEvent peak;
  std::optional<TimelineEvent> event;  // nearest within the window
  Millis offset_ms = 0;                // peak - event
};

struct PhaseStatsReport {
  std::vector<PhaseStats> phases;
  std::vector<PhaseComparison> comparisons;
  std::vector<PeakMatch> matches;
  std::vector<PeakEvent> unmatched;
};

std::vector<std::pair<std::string, std::string>> default_comparisons();

PhaseStatsReport phase_stats_and_alignment(std::span<const HeartSample> series, const core::PhaseSchedule& phases,
                                           std::span<const PeakEvent> peaks, std::span<const TimelineEvent> events,
                                           Millis window_ms = 10000,
                                           const std::vector<std::pair<std::string, std::string>>& comparisons =
                                               default_comparisons());

}  // namespace mosaic::biosignal
