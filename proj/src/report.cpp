#include "mosaic/report.hpp"

#include <algorithm>
#include <set>

#include "mosaic/error.hpp"
#include "mosaic/report_schema_data.hpp"

namespace mosaic::report {

const Json& report_schema() {
  static const Json schema = Json::parse(detail::kReportSchema);
  return schema;
}

std::vector<schema::Violation> validate_report(const Json& report) {
  return schema::validate(report_schema(), report);
}

Json round_reals(Json value) {
  if (value.is_number_float()) return round6(value.get<double>());
  if (value.is_structured()) {
    for (auto& v : value) v = round_reals(std::move(v));
  }
  return value;
}

namespace {

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json to_json(const assessment::RubricAggregates& a) {
  Json items = Json::array();
  for (const auto& i : a.items) {
    items.push_back({{"item_id", i.item_id},
                     {"title", i.title},
                     {"external_mean", opt(i.external_mean)},
                     {"professor_mean", opt(i.professor_mean)},
                     {"peer_mean", opt(i.peer_mean)},
                     {"self_score", opt(i.self_score)},
                     {"spread", i.spread},
                     {"divergent", i.divergent},
                     {"external_count", i.external_count},
                     {"comments", i.comments}});
  }
  return {{"rubric_version", a.rubric_version},
          {"professors", a.professors},
          {"peers", a.peers},
          {"selves", a.selves},
          {"items", items}};
}

Json to_json(const assessment::FeedbackSections& s) {
  Json strengths = Json::array();
  for (const auto& e : s.strengths) strengths.push_back({{"item_id", e.item_id}, {"evidence", e.evidence}});
  Json improvements = Json::array();
  for (const auto& e : s.improvements) improvements.push_back({{"item_id", e.item_id}, {"evidence", e.evidence}});
  Json plan = Json::array();
  for (const auto& e : s.action_plan) {
    plan.push_back({{"item_id", e.item_id},
                    {"recommendation", e.recommendation},
                    {"metric", e.metric ? Json(*e.metric) : Json(nullptr)},
                    {"metric_value", opt(e.metric_value)}});
  }
  return {{"strengths", strengths},
          {"improvements", improvements},
          {"action_plan", plan},
          {"provenance", s.provenance},
          {"review_status", s.review_status}};
}

Json to_json(const analysis::TimelineMark& m) {
  return {{"ts_ms", m.ts_ms},
          {"end_ms", m.end_ms ? Json(*m.end_ms) : Json(nullptr)},
          {"kind", m.kind},
          {"label", m.label},
          {"source", m.source}};
}

namespace {

Json session_json(const core::Session& s, const core::PhaseSchedule& phases) {
  Json evaluators = Json::array();
  for (const auto& e : s.evaluators) evaluators.push_back({{"id", e.id}, {"role", std::string(to_string(e.role))}});
  Json ph = Json::array();
  for (const auto& p : phases) {
    ph.push_back({{"name", std::string(core::to_string(p.name))}, {"start_ms", p.start_ms}, {"end_ms", p.end_ms}});
  }
  return {{"id", s.id},
          {"presenter_id", s.presenter_id},
          {"evaluators", evaluators},
          {"observers", s.observer_ids},
          {"planned_duration_ms", s.planned_duration_ms},
          {"planned_qa_ms", s.planned_qa_ms},
          {"phases", ph}};
}

}  // namespace

Json assemble_report(const core::Session& session, const core::PhaseSchedule& phases,
                     const std::optional<HumanFeedback>& human, const analysis::AnalysisSet& analyses,
                     const std::map<std::string, double>& class_means) {
  const bool any_analysis = std::any_of(analyses.results.begin(), analyses.results.end(),
                                        [](const Json& r) { return r.at("status") == "ok"; });
  if (!human && !any_analysis) {
    throw Error(Errc::invalid_argument, "nothing to report: no evaluations and no analysis produced results");
  }
  Json report;
  report["schema_version"] = kSchemaVersion;
  report["session"] = session_json(session, phases);
  std::vector<std::string> warnings = analyses.warnings;

  Json comparisons = Json::array();
  if (human) {
    Json hf = to_json(human->sections);
    hf["aggregates"] = to_json(human->aggregates);
    report["human_feedback"] = hf;
    warnings.insert(warnings.end(), human->sections.warnings.begin(), human->sections.warnings.end());
    for (const auto& i : human->aggregates.items) {
      const auto c = class_means.find(i.item_id);
      comparisons.push_back({{"item_id", i.item_id},
                             {"title", i.title},
                             {"self", opt(i.self_score)},
                             {"peer", opt(i.peer_mean)},
                             {"professor", opt(i.professor_mean)},
                             {"external", opt(i.external_mean)},
                             {"class", c == class_means.end() ? Json(nullptr) : Json(c->second)}});
    }
  } else {
    report["human_feedback"] = nullptr;
  }
  report["comparisons"] = comparisons;
  report["data_feedback"] = analyses.results;

  Json timeline = Json::array();
  for (const auto& m : analyses.timeline) timeline.push_back(to_json(m));
  report["timeline"] = timeline;

  std::vector<std::string> limitations{
      "Feedback is a draft until reviewed by a professor.",
      "Video is referenced but never decoded; visual analyses use the supplied pose and landmark streams."};
  std::set<std::string> seen(limitations.begin(), limitations.end());
  for (const auto& r : analyses.results) {
    if (r.at("status") != "ok") continue;
    for (const auto& l : r.at("limitations")) {
      if (seen.insert(l.get<std::string>()).second) limitations.push_back(l.get<std::string>());
    }
  }
  report["limitations"] = limitations;
  report["warnings"] = warnings;

  report = round_reals(std::move(report));
  if (const auto v = validate_report(report); !v.empty()) {
    throw Error(Errc::schema_violation, (v.front().path.empty() ? "/" : v.front().path) + ": " + v.front().message);
  }
  return report;
}

Json build_report(const core::SessionContext& ctx, const ReportOptions& options) {
  const auto set = analysis::run_analyses(ctx, options.analyses);
  std::optional<HumanFeedback> human;
  analysis::AnalysisSet with_warnings = set;
  if (ctx.rubric && !ctx.evaluations.empty()) {
    try {
      auto agg = assessment::aggregate_rubric(ctx.evaluations, *ctx.rubric, options.assessment);
      const Json templates = ctx.templates ? *ctx.templates : assessment::default_templates();
      auto sections = assessment::compose_feedback(agg, set.metrics, *ctx.rubric, templates, options.generator,
                                                   options.assessment);
      human = HumanFeedback{std::move(agg), std::move(sections)};
    } catch (const Error& e) {
      if (e.code() != Errc::no_external_evaluations) throw;
      with_warnings.warnings.push_back(std::string("human feedback: ") + e.what());
    }
  }
  with_warnings.warnings.insert(with_warnings.warnings.begin(), ctx.warnings.begin(), ctx.warnings.end());
  return assemble_report(ctx.session, ctx.phases(), human, with_warnings, options.class_means);
}

Json analysis_document(const core::SessionContext& ctx, const analysis::AnalysisSet& analyses) {
  Json timeline = Json::array();
  for (const auto& m : analyses.timeline) timeline.push_back(to_json(m));
  std::vector<std::string> warnings = ctx.warnings;
  warnings.insert(warnings.end(), analyses.warnings.begin(), analyses.warnings.end());
  return round_reals(Json{{"schema_version", kSchemaVersion},
                          {"session_id", ctx.session.id},
                          {"results", analyses.results},
                          {"metrics", analyses.metrics},
                          {"timeline", timeline},
                          {"warnings", warnings}});
}

std::string dump(const Json& value) { return value.dump(2) + "\n"; }

}  // namespace mosaic::report
