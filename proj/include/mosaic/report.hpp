#pragma once

// Assembly of the feedback report and the analysis document.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mosaic/analysis.hpp"
#include "mosaic/assessment.hpp"
#include "mosaic/core.hpp"
#include "mosaic/schema.hpp"

namespace mosaic::report {

inline constexpr int kSchemaVersion = 1;

// Published report schema (docs/report-schema.json), compiled in.
const Json& report_schema();
std::vector<schema::Violation> validate_report(const Json& report);

// Replaces every real number with its 6-decimal rounding.
Json round_reals(Json value);

Json to_json(const assessment::RubricAggregates& aggregates);
Json to_json(const assessment::FeedbackSections& sections);
Json to_json(const analysis::TimelineMark& mark);

struct HumanFeedback {
  assessment::RubricAggregates aggregates;
  assessment::FeedbackSections sections;
};

// Throws SchemaViolation when the result breaks the schema and
// InvalidArgument when there is neither human feedback nor an analysis.
Json assemble_report(const core::Session& session, const core::PhaseSchedule& phases,
                     const std::optional<HumanFeedback>& human, const analysis::AnalysisSet& analyses,
                     const std::map<std::string, double>& class_means = {});

struct ReportOptions {
  analysis::AnalysisOptions analyses;
  std::map<std::string, double> class_means;  // item id -> class mean
  assessment::AssessmentConfig assessment;
  assessment::TextGenerator* generator = nullptr;
};

// Aggregates evaluations (when a rubric and evaluations exist), composes
// feedback from the bundle templates or the defaults, runs the analyses and
// assembles the report.
Json build_report(const core::SessionContext& ctx, const ReportOptions& options = {});

// Output of `mosaic analyze`.
Json analysis_document(const core::SessionContext& ctx, const analysis::AnalysisSet& analyses);

// Canonical serialization: sorted keys, two-space indent, trailing newline.
std::string dump(const Json& value);

}  // namespace mosaic::report
