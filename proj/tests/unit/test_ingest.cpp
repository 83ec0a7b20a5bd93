#include <catch_amalgamated.hpp>

#include "mosaic/error.hpp"
#include "mosaic/ingest.hpp"
#include "mosaic/synth.hpp"

using namespace mosaic;
using namespace mosaic::ingest;

namespace {

synth::SynthConfig small_noisy() {
  synth::SynthConfig cfg;
  cfg.seed = 11;
  cfg.profile = synth::Profile::noisy;
  return cfg;
}

template <typename T>
void check_round_trip(const std::vector<T>& v, StreamKind kind) {
  const StreamData data = v;
  const auto text = serialize_stream(data);
  const auto back = parse_stream(kind, text);
  REQUIRE(back.index() == data.index());
  CHECK(std::get<std::vector<T>>(back) == v);
  CHECK(serialize_stream(back) == text);
}

}  // namespace

TEST_CASE("every stream kind round-trips through its writer") {
  const auto cfg = small_noisy();
  check_round_trip(synth::heart_track(cfg).samples, StreamKind::heart_csv);
  check_round_trip(synth::gaze_track(cfg).samples, StreamKind::gaze_jsonl);
  check_round_trip(synth::landmark_track(cfg).frames, StreamKind::landmarks_jsonl);
  check_round_trip(synth::transcript_track(cfg).words, StreamKind::transcript_jsonl);

  // Matrices lose nothing in shortest-decimal form.
  check_round_trip(synth::headpose_track(cfg).frames, StreamKind::headpose_jsonl);

  std::vector<InteractionEvent> ev = {{10, "a", EventKind::item_focus, "x", std::nullopt, 8},
                                      {20, "a", EventKind::keypress, std::nullopt, std::string("letter"), std::nullopt},
                                      {30, "a", EventKind::item_rated, "x", std::int64_t{4}, std::nullopt},
                                      {40, "p", EventKind::slide_advance, std::nullopt, std::nullopt, std::nullopt}};
  check_round_trip(ev, StreamKind::events_jsonl);
  std::vector<Annotation> an = {{"a1", "eye_contact", AnnotationKind::instant, 5, "obs", 7},
                                {"a2", "phase:body", AnnotationKind::start, 9, "ra", std::nullopt}};
  check_round_trip(an, StreamKind::annotations_jsonl);
}

TEST_CASE("heart csv flags implausible values without dropping them") {
  ParseReport report;
  const auto s = parse_heart_csv("ts_ms,bpm\n0,72.5\n1000,0\n2000,300\n", &report);
  REQUIRE(s.size() == 3);
  CHECK_FALSE(s[0].artifact);
  CHECK(s[1].artifact);
  CHECK(s[2].artifact);
  CHECK(report.artifacts == 2);
  CHECK(report.records == 3);
}

TEST_CASE("encoding and schema errors") {
  CHECK_THROWS_MATCHES(parse_heart_csv("\xEF\xBB\xBFts_ms,bpm\n0,70\n"), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == Errc::encoding_error; }));
  try {
    parse_gaze_jsonl("{\"ts_ms\":0,\"valid\":true,\"x\":0.1,\"y\":0.2}\n{\"ts_ms\":20,\"valid\":\"yes\"}\n");
    FAIL("expected SchemaError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::schema_error);
    CHECK(e.line() == 2u);
  }
  CHECK_THROWS_AS(parse_headpose_jsonl("{\"ts_ms\":0,\"rotation\":[[2,0,0],[0,1,0],[0,0,1]]}\n"), Error);
  CHECK_THROWS_AS(parse_event_record(R"({"ts_ms":1,"actor_id":"a","kind":"item_focus"})"), Error);
  CHECK_THROWS_AS(parse_event_record(R"({"ts_ms":1,"actor_id":"a","kind":"slide_back","item_id":"x"})"), Error);
  CHECK_THROWS_AS(parse_event_record(R"({"ts_ms":1,"actor_id":"a","kind":"teleport"})"), Error);
}

TEST_CASE("evaluations must close over the rubric with Likert scores") {
  const Rubric rubric = synth::default_rubric();
  Evaluation ev;
  ev.evaluator_id = "peer1";
  ev.role = Role::peer;
  ev.session_id = "s";
  for (const auto& item : rubric.items) ev.items.push_back({item.id, 3, "fine work overall, keep it up"});
  const auto text = write_evaluation(ev);
  CHECK(parse_evaluation(text, rubric) == ev);

  auto code = [&](Json j) {
    try {
      parse_evaluation(j.dump(), rubric);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::io_error;
  };
  Json j = Json::parse(text);
  Json missing = j;
  missing["items"].erase(missing["items"].begin());
  CHECK(code(missing) == Errc::missing_item);
  Json zero = j;
  zero["items"][0]["score"] = 0;
  CHECK(code(zero) == Errc::score_out_of_range);
  Json six = j;
  six["items"][0]["score"] = 6;
  CHECK(code(six) == Errc::score_out_of_range);
  Json extra = j;
  extra["items"].push_back({{"item_id", "nope"}, {"score", 3}});
  CHECK(code(extra) == Errc::schema_error);

  Json blank = j;
  blank["items"][0]["comment"] = "";
  CHECK(parse_evaluation(blank.dump(), rubric).empty_comment_items.size() == 1);
}

TEST_CASE("rubric round-trips") {
  const Rubric r = synth::default_rubric();
  CHECK(parse_rubric(write_rubric(r)) == r);
  CHECK(r.find("eye_contact")->metric_link == "headpose.eye_contact_ratio");
}
