#include <catch_amalgamated.hpp>

#include "mosaic/assessment.hpp"
#include "mosaic/error.hpp"
#include "mosaic/synth.hpp"

using namespace mosaic;
using namespace mosaic::assessment;
using Catch::Approx;

namespace {

Evaluation eval(const std::string& id, Role role, const Rubric& rubric, std::map<std::string, int> scores,
                int fallback = 3) {
  Evaluation e;
  e.evaluator_id = id;
  e.role = role;
  e.session_id = "s";
  for (const auto& item : rubric.items) {
    const auto it = scores.find(item.id);
    e.items.push_back({item.id, it == scores.end() ? fallback : it->second, "comment from " + id});
  }
  return e;
}

struct Scripted : TextGenerator {
  std::string reply;
  std::string last_request;
  std::string generate(const std::string& request) override {
    last_request = request;
    return reply;
  }
};

}  // namespace

TEST_CASE("aggregates by role with divergence and spread") {
  const Rubric rubric = synth::default_rubric();
  const std::vector<Evaluation> evs = {
      eval("prof1", Role::professor, rubric, {{"eye_contact", 2}, {"structure", 5}}),
      eval("peer1", Role::peer, rubric, {{"eye_contact", 2}, {"structure", 4}}),
      eval("peer2", Role::peer, rubric, {{"eye_contact", 3}, {"structure", 5}}),
      eval("s01", Role::self, rubric, {{"eye_contact", 5}}),
  };
  const auto agg = aggregate_rubric(evs, rubric);
  CHECK(agg.professors == 1);
  CHECK(agg.peers == 2);
  CHECK(agg.selves == 1);
  const auto* eye = agg.find("eye_contact");
  REQUIRE(eye);
  CHECK(*eye->external_mean == Approx(7.0 / 3.0));
  CHECK(*eye->professor_mean == 2.0);
  CHECK(*eye->peer_mean == 2.5);
  CHECK(*eye->self_score == 5.0);
  CHECK(eye->spread == 1.0);
  CHECK(eye->divergent);
  CHECK(eye->comments.at("peer").size() == 2);
  CHECK_FALSE(agg.find("voice")->divergent);

  const std::vector<Evaluation> self_only = {evs.back()};
  CHECK_THROWS_AS(aggregate_rubric(self_only, rubric), Error);

  const std::vector<RubricAggregates> sessions = {agg, aggregate_rubric(std::vector<Evaluation>(evs.begin(), evs.begin() + 1), rubric)};
  const auto cls = class_averages(sessions);
  CHECK(cls.at("eye_contact") == Approx((7.0 / 3.0 + 2.0) / 2.0));
}

TEST_CASE("template feedback has three consistent sections") {
  const Rubric rubric = synth::default_rubric();
  const std::vector<Evaluation> evs = {
      eval("prof1", Role::professor, rubric, {{"eye_contact", 2}, {"structure", 5}, {"conclusions", 1}}, 4),
      eval("peer1", Role::peer, rubric, {{"eye_contact", 2}, {"structure", 5}, {"conclusions", 2}}, 4),
  };
  const auto agg = aggregate_rubric(evs, rubric);
  const MetricMap metrics = {{"headpose.eye_contact_ratio", 0.31}};
  Json templates = default_templates();
  templates["items"].erase("conclusions");
  const auto f = compose_feedback(agg, metrics, rubric, templates);
  CHECK(f.provenance == "template");
  CHECK(f.strengths.front().item_id == "structure");
  REQUIRE(f.improvements.size() == 2);
  CHECK(f.improvements[0].item_id == "conclusions");
  CHECK(f.improvements[1].item_id == "eye_contact");
  CHECK(f.improvements[1].evidence == "eye contact 31% of talk");
  REQUIRE(f.action_plan.size() == 2);
  CHECK(f.action_plan[1].metric == "headpose.eye_contact_ratio");
  CHECK(*f.action_plan[1].metric_value == Approx(0.31));
  CHECK(f.warnings == std::vector<std::string>{"TemplateMissing(conclusions)"});
  CHECK(f.action_plan[0].recommendation.find("Conclusions") != std::string::npos);
}

TEST_CASE("pluggable generator with validation and fallback") {
  const Rubric rubric = synth::default_rubric();
  const std::vector<Evaluation> evs = {eval("prof1", Role::professor, rubric, {{"voice", 2}}, 4)};
  const auto agg = aggregate_rubric(evs, rubric);
  Scripted gen;
  gen.reply = R"({"strengths": [{"item_id": "structure", "evidence": "clear"}],
                  "improvements": [{"item_id": "voice", "evidence": "fillers"}],
                  "action_plan": [{"item_id": "voice", "recommendation": "pause instead"}]})";
  const MetricMap metrics = {{"speech.filler_per_minute", 4.5}};
  const auto f = compose_feedback(agg, metrics, rubric, default_templates(), &gen);
  CHECK(f.provenance == "generated");
  CHECK(f.action_plan[0].metric_value == 4.5);
  const Json req = Json::parse(gen.last_request);
  CHECK(req["contract_version"] == 1);
  CHECK(req["items"].size() == rubric.items.size());

  gen.reply = R"({"strengths": [], "improvements": [{"item_id": "voice", "evidence": "x"}], "action_plan": []})";
  const auto fb = compose_feedback(agg, metrics, rubric, default_templates(), &gen);
  CHECK(fb.provenance == "template");
  REQUIRE_FALSE(fb.warnings.empty());
  CHECK(fb.warnings[0].find("failed validation") != std::string::npos);
}

TEST_CASE("metric descriptions") {
  CHECK(describe_metric("speech.filler_per_minute", 2.25) == "2.2 filler words per minute");
  CHECK(describe_metric("gaze.slides_share", 0.3) == "audience looked at the slides 30% of the time");
  CHECK(describe_metric("x.y", 0.5) == "x.y = 0.5");
}
