#include <catch_amalgamated.hpp>

#include "mosaic/core.hpp"
#include "mosaic/synth.hpp"
#include "support.hpp"

using namespace mosaic;
namespace fs = std::filesystem;

namespace {

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = read_file(e.path());
  }
  return out;
}

}  // namespace

TEST_CASE("same seed gives identical bundles") {
  test::TempDir a("synth-a");
  test::TempDir b("synth-b");
  synth::SynthConfig cfg;
  cfg.seed = 5;
  cfg.audio = false;
  synth::generate_session(a.path(), cfg);
  synth::generate_session(b.path(), cfg);
  const auto sa = snapshot(a.path());
  CHECK(sa == snapshot(b.path()));
  CHECK(sa.contains("session.json"));
  CHECK(sa.contains("ground_truth.json"));
  CHECK(sa.contains("slides/deck.pptx"));

  test::TempDir c("synth-c");
  cfg.seed = 6;
  synth::generate_session(c.path(), cfg);
  CHECK(snapshot(c.path()).at("transcript.jsonl") != sa.at("transcript.jsonl"));
}

TEST_CASE("manifest agrees with the generated tracks") {
  synth::SynthConfig cfg;
  cfg.seed = 17;
  const auto heart = synth::heart_track(cfg);
  CHECK(heart.surges.size() == 3);
  const auto transcript = synth::transcript_track(cfg);
  CHECK(transcript.fillers.at("you know") == 3);
  CHECK(transcript.false_starts == 4);
  CHECK(transcript.long_pauses == 5);
  const auto hp = synth::headpose_track(cfg);
  double sum = 0.0;
  for (const auto& [k, v] : hp.shares) sum += v;
  CHECK(sum == Catch::Approx(1.0).margin(1e-12));
  const auto b = synth::phase_bounds(cfg);
  CHECK(b.opening_end == 60000);
  CHECK(b.body_end == 480000);
  CHECK(b.talk_end == 600000);
  CHECK(b.span == 900000);
  CHECK(synth::profile_from_string("noisy") == synth::Profile::noisy);
  CHECK_FALSE(synth::profile_from_string("loud"));
}

TEST_CASE("noisy bundles load and carry clock offsets") {
  test::TempDir dir("synth-noisy");
  synth::SynthConfig cfg;
  cfg.seed = 3;
  cfg.profile = synth::Profile::noisy;
  cfg.audio = false;
  const Json manifest = synth::generate_session(dir.path(), cfg);
  const auto ctx = core::load_bundle(dir.path());
  for (const auto& w : ctx.warnings) CHECK(w.find("artifact samples flagged") != std::string::npos);
  for (const auto& [id, off] : manifest["offsets"].items()) {
    if (id != "audio") CHECK(ctx.session.sync_map.at(id) == off.get<Millis>());
  }
  CHECK(ctx.session.sync_map.at("heart_presenter") < 0);
}
