#include <catch_amalgamated.hpp>

#include "mosaic/core.hpp"
#include "mosaic/error.hpp"
#include "mosaic/synth.hpp"
#include "support.hpp"

using namespace mosaic;
using Catch::Matchers::ContainsSubstring;

namespace {

synth::SynthConfig quick(std::uint64_t seed) {
  synth::SynthConfig cfg;
  cfg.seed = seed;
  cfg.audio = false;
  return cfg;
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no mosaic::Error thrown");
  return Errc::io_error;
}

Json descriptor(const std::filesystem::path& dir) { return Json::parse(read_file(dir / "session.json")); }

}  // namespace

TEST_CASE("session time applies the declared offset") {
  core::SyncMap sync{{"heart", -1500}};
  CHECK(core::to_session_time("heart", 2000, sync) == 500);
  CHECK(code_of([&] { core::to_session_time("gaze", 0, sync); }) == Errc::unknown_stream);
}

TEST_CASE("descriptor round-trips") {
  core::Session s;
  s.id = "x";
  s.presenter_id = "p";
  s.evaluators = {{"prof", Role::professor}, {"a", Role::peer}};
  s.sync_map = {{"hr", -20}};
  s.streams = {{"hr", ingest::StreamKind::heart_csv, "streams/hr.csv", "p"}};
  s.annotation_labels = {"eye_contact"};
  s.deck_path = "slides/deck.pptx";
  CHECK(core::parse_session_descriptor(core::write_session_descriptor(s)) == s);
}

TEST_CASE("descriptor rejects bad roles and offsets") {
  CHECK(code_of([] { core::parse_session_descriptor("[]"); }) == Errc::schema_error);
  CHECK(code_of([] {
          core::parse_session_descriptor(R"({"id":"a","presenter_id":"p","evaluators":[{"id":"e","role":"boss"}]})");
        }) == Errc::schema_error);
  CHECK(code_of([] { core::parse_session_descriptor(R"({"id":"a","presenter_id":"p","sync_map":{"s":1.5}})"); }) ==
        Errc::schema_error);
}

TEST_CASE("phase schedule from markers and from the fallback") {
  std::vector<Annotation> a = {
      {"1", "phase:opening", AnnotationKind::start, 0, "ra", {}},
      {"2", "phase:opening", AnnotationKind::end, 50000, "ra", {}},
      {"3", "phase:body", AnnotationKind::start, 50000, "ra", {}},
      {"4", "eye_contact", AnnotationKind::instant, 60000, "obs", {}},
      {"5", "phase:body", AnnotationKind::end, 400000, "ra", {}},
  };
  const auto s = core::build_phase_schedule(a, {});
  REQUIRE(s.size() == 2);
  CHECK(s[1].name == core::PhaseName::body);
  CHECK(s[1].start_ms == 50000);
  CHECK(core::phase_at(s, 49999)->name == core::PhaseName::opening);
  CHECK(core::phase_at(s, 400000) == nullptr);

  const auto fb = core::build_phase_schedule({}, {});
  REQUIRE(fb.size() == 4);
  CHECK(fb[0].end_ms == 60000);
  CHECK(fb[1].end_ms == 480000);
  CHECK(fb[2].end_ms == 600000);
  CHECK(fb[3].end_ms == 900000);

  a.pop_back();
  CHECK(code_of([&] { core::build_phase_schedule(a, {}); }) == Errc::unpaired_phase_marker);
}

TEST_CASE("synthetic bundle loads cleanly with all streams in session time") {
  test::TempDir dir("core");
  const Json gt = synth::generate_session(dir.path(), quick(3));
  const auto ctx = core::load_bundle(dir.path());
  CHECK(ctx.warnings.empty());
  CHECK(ctx.streams.size() == 10);
  CHECK(ctx.evaluations.size() == 4);
  REQUIRE(ctx.rubric);
  CHECK(ctx.rubric->items.size() == 9);
  CHECK(ctx.deck_bytes);
  CHECK_FALSE(ctx.audio);

  // Offsets undone: every stream starts at its scripted session time.
  for (const auto* s : ctx.streams_of(ingest::StreamKind::heart_csv)) {
    CHECK(std::get<std::vector<ingest::HeartSample>>(s->data).front().ts_ms == 0);
  }
  const auto gaze = ctx.streams_of(ingest::StreamKind::gaze_jsonl);
  REQUIRE(gaze.size() == 1);
  CHECK(std::get<std::vector<ingest::GazeSample>>(gaze[0]->data).front().ts_ms == 0);
  CHECK(gt["offsets"]["gaze_obs1"].get<Millis>() < 0);

  const auto phases = ctx.phases();
  REQUIRE(phases.size() == 4);
  CHECK(phases[3].end_ms == 900000);
  CHECK(ctx.events().size() == gt["stream_lengths"]["interactions"].get<std::size_t>() +
                                   gt["stream_lengths"]["slide_events"].get<std::size_t>());
}

TEST_CASE("load errors carry their names") {
  test::TempDir dir("core-errors");
  CHECK(code_of([&] { core::load_bundle(dir.path()); }) == Errc::missing_descriptor);

  synth::generate_session(dir.path(), quick(4));
  SECTION("missing stream file") {
    std::filesystem::remove(dir / "streams/gaze_obs1.jsonl");
    CHECK(code_of([&] { core::load_bundle(dir.path()); }) == Errc::missing_stream_file);
  }
  SECTION("stream without an offset") {
    Json d = descriptor(dir.path());
    d["sync_map"].erase("gaze_obs1");
    write_file(dir / "session.json", d.dump());
    CHECK(code_of([&] { core::load_bundle(dir.path()); }) == Errc::unknown_stream);
  }
  SECTION("bad record reports its line") {
    write_file(dir / "streams/heart_s01.csv", "ts_ms,bpm\n0,70\n1000,abc\n");
    try {
      core::load_bundle(dir.path());
      FAIL("expected StreamParseError");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::stream_parse_error);
      CHECK(e.line() == 3u);
    }
  }
  SECTION("non-monotonic stream fails unless repaired") {
    write_file(dir / "streams/heart_s01.csv", "ts_ms,bpm\n0,70\n2000,71\n1000,72\n");
    CHECK(code_of([&] { core::load_bundle(dir.path()); }) == Errc::non_monotonic_timestamps);
    core::LoadOptions opt;
    opt.sort_repair = true;
    const auto ctx = core::load_bundle(dir.path(), opt);
    REQUIRE(ctx.warnings.size() == 1);
    CHECK_THAT(ctx.warnings[0], ContainsSubstring("sorted"));
  }
  SECTION("role requirement is a warning unless strict") {
    Json d = descriptor(dir.path());
    d["evaluators"] = Json::array({{{"id", "prof1"}, {"role", "professor"}}});
    write_file(dir / "session.json", d.dump());
    std::filesystem::remove(dir / "evaluations/peer1.json");
    std::filesystem::remove(dir / "evaluations/peer2.json");
    const auto ctx = core::load_bundle(dir.path());
    CHECK(ctx.warnings.size() == 1);
    core::LoadOptions strict;
    strict.strict_roles = true;
    CHECK(code_of([&] { core::load_bundle(dir.path(), strict); }) == Errc::role_requirement);
  }
  SECTION("unpaired phase marker") {
    std::string ann = read_file(dir / "annotations.jsonl");
    const auto cut = ann.find("\"phase:qa\"");
    const auto line_start = ann.rfind('\n', cut);
    const auto line_end = ann.find('\n', cut);
    ann.erase(line_start, line_end - line_start);
    // Drops the first qa marker; the remaining one is unpaired.
    write_file(dir / "annotations.jsonl", ann);
    CHECK(code_of([&] { core::load_bundle(dir.path()); }) == Errc::unpaired_phase_marker);
  }
}
