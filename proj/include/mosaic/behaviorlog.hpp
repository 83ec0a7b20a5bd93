#pragma once

// Slide timeline from presenter device events; audit of evaluator interaction logs.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mosaic/core.hpp"
#include "mosaic/ingest.hpp"
#include "mosaic/types.hpp"

namespace mosaic::behaviorlog {

struct SlideConfig {
  Millis rushed_ms = 5000;
  Millis overlong_ms = 180000;
};

struct SlideVisit {
  int slide = 1;
  Millis enter_ms = 0;
  Millis exit_ms = 0;
  bool rushed = false;
  bool overlong = false;

  Millis dwell_ms() const noexcept { return exit_ms - enter_ms; }
};

struct SlideTimeline {
  std::vector<SlideVisit> visits;  // partition [0, end_ms]
  std::map<int, Millis> dwell_per_slide;
  std::size_t back_navigations = 0;
  std::size_t rushed = 0;
  std::size_t overlong = 0;
};

// slide_count <= 0 leaves the upper bound open. Events at or after end_ms are ignored.
SlideTimeline slide_timeline(std::span<const ingest::InteractionEvent> events, int slide_count, Millis end_ms,
                             const SlideConfig& cfg = {});

struct AuditConfig {
  double min_active_ratio = 0.30;
  double min_median_comment = 20.0;  // characters
};

struct ItemAudit {
  std::string item_id;
  Millis focus_ms = 0;
  std::vector<Millis> rating_ts;
  std::optional<std::int64_t> last_score;
  std::size_t comment_length = 0;
  bool premature = false;
};

struct RatingStep {
  Millis ts_ms = 0;
  std::string item_id;
  std::int64_t score = 0;
};

struct EvaluatorAudit {
  std::string actor_id;
  std::vector<ItemAudit> items;  // rubric order, then unknown items by first appearance
  std::vector<std::string> premature_items;
  Millis active_ms = 0;
  double activity_ratio = 0.0;
  double median_comment_length = 0.0;
  std::vector<std::string> flags;  // premature, rushed, superficial
  std::vector<RatingStep> order;
  std::vector<std::string> warnings;
};

struct EvaluationAudit {
  std::vector<EvaluatorAudit> evaluators;  // sorted by actor_id
  std::vector<std::string> warnings;
};

struct AuditInput {
  std::span<const ingest::InteractionEvent> events;
  const core::PhaseSchedule* phases = nullptr;
  std::map<std::string, std::string> item_phase;  // rubric item -> phase name
  std::vector<std::string> item_order;            // rubric order
  Millis span_ms = 0;                             // presentation span for the activity ratio
  // Final comments from submitted evaluations, by actor then item. Overrides
  // lengths derived from comment_edit events.
  std::map<std::string, std::map<std::string, std::string>> comments;
};

// Unbalanced focus/blur pairs are closed at the next focus or at span end and
// reported as UnbalancedFocusEvents warnings.
EvaluationAudit evaluation_audit(const AuditInput& input, const AuditConfig& cfg = {});

std::size_t utf8_length(std::string_view text) noexcept;

}  // namespace mosaic::behaviorlog
