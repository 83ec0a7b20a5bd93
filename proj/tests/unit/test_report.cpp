#include <catch_amalgamated.hpp>

#include "mosaic/analysis.hpp"
#include "mosaic/error.hpp"
#include "mosaic/render.hpp"
#include "mosaic/report.hpp"
#include "mosaic/schema.hpp"
#include "mosaic/synth.hpp"
#include "support.hpp"

using namespace mosaic;
using Catch::Matchers::ContainsSubstring;

namespace {

const Json& synth_report() {
  static const Json report = [] {
    test::TempDir dir("report");
    synth::SynthConfig cfg;
    cfg.seed = 21;
    cfg.audio = false;
    synth::generate_session(dir.path(), cfg);
    return report::build_report(core::load_bundle(dir.path()));
  }();
  return report;
}

}  // namespace

TEST_CASE("published schema matches the compiled copy") {
  CHECK(Json::parse(read_file(MOSAIC_SCHEMA_PATH)) == report::report_schema());
}

TEST_CASE("schema validator basics") {
  const Json schema = Json::parse(R"({
    "type": "object", "required": ["a"], "additionalProperties": false,
    "properties": {"a": {"type": "integer", "minimum": 1}, "b": {"$ref": "#/$defs/s"}},
    "$defs": {"s": {"anyOf": [{"type": "null"}, {"type": "string", "enum": ["x", "y"]}]}}})");
  CHECK(schema::validate(schema, Json::parse(R"({"a": 2, "b": "x"})")).empty());
  CHECK(schema::validate(schema, Json::parse(R"({"a": 2, "b": null})")).empty());
  CHECK(schema::validate(schema, Json::parse(R"({"a": 0})")).size() == 1);
  CHECK(schema::validate(schema, Json::parse(R"({"a": 1.5})")).size() == 1);
  CHECK(schema::validate(schema, Json::parse(R"({"b": "z"})")).size() == 2);
  const auto v = schema::validate(schema, Json::parse(R"({"a": 1, "c": 1})"));
  REQUIRE(v.size() == 1);
  CHECK(v[0].path == "/c");
}

TEST_CASE("report on a synthetic bundle") {
  const Json& r = synth_report();
  CHECK(report::validate_report(r).empty());
  CHECK(r["schema_version"] == report::kSchemaVersion);
  REQUIRE(r["data_feedback"].size() == 8);
  std::map<std::string, std::string> status;
  for (const auto& a : r["data_feedback"]) status[a["name"]] = a["status"];
  CHECK(status["audio"] == "absent");
  CHECK(status["heart"] == "ok");
  CHECK(status["slides"] == "ok");
  CHECK(r["human_feedback"]["provenance"] == "template");
  CHECK(r["human_feedback"]["review_status"] == "draft");
  CHECK(r["comparisons"].size() == 9);
  CHECK_FALSE(r["timeline"].empty());
  bool sorted = true;
  for (std::size_t i = 1; i < r["timeline"].size(); ++i) sorted = sorted && r["timeline"][i - 1]["ts_ms"] <= r["timeline"][i]["ts_ms"];
  CHECK(sorted);
}

TEST_CASE("round_reals keeps six decimals") {
  const Json j = report::round_reals(Json::parse(R"({"a": [0.1234567, 2], "b": {"c": -1.0000004}})"));
  CHECK(j["a"][0].get<double>() == 0.123457);
  CHECK(j["a"][1].is_number_integer());
  CHECK(j["b"]["c"].get<double>() == -1.0);
}

TEST_CASE("renderers") {
  const Json& r = synth_report();
  CHECK(report::render(r, "json") == report::dump(r));
  const auto md = report::render(r, "md");
  CHECK_THAT(md, ContainsSubstring("## Strengths"));
  CHECK_THAT(md, ContainsSubstring("## Action plan"));
  CHECK_THAT(md, ContainsSubstring("| Item |"));
  const auto html = report::render(r, "html");
  CHECK_THAT(html, ContainsSubstring("<svg"));
  CHECK_THAT(html, ContainsSubstring("mark-peak"));
  CHECK_THAT(html, ContainsSubstring("bar-self"));
  CHECK(html.find("<script src") == std::string::npos);
  CHECK_THROWS_AS(report::render(r, "pdf"), Error);
}

TEST_CASE("selected analyses only") {
  test::TempDir dir("report-only");
  synth::SynthConfig cfg;
  cfg.seed = 22;
  cfg.audio = false;
  synth::generate_session(dir.path(), cfg);
  const auto ctx = core::load_bundle(dir.path());
  analysis::AnalysisOptions opt;
  opt.only = {"speech"};
  const auto set = analysis::run_analyses(ctx, opt);
  REQUIRE(set.results.size() == 8);
  for (const auto& res : set.results) {
    if (res["name"] == "speech") {
      CHECK(res["status"] == "ok");
    } else {
      CHECK(res["status"] == "absent");
      CHECK(res["reason"] == "not selected");
    }
  }
  CHECK(set.metrics.contains("speech.filler_per_minute"));
  const Json doc = report::analysis_document(ctx, set);
  CHECK(doc["session_id"] == ctx.session.id);
}
