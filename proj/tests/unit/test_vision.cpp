#include <catch_amalgamated.hpp>

#include "mosaic/error.hpp"
#include "mosaic/synth.hpp"
#include "mosaic/vision.hpp"

using namespace mosaic;
using namespace mosaic::vision;
using Catch::Approx;

TEST_CASE("euler angles survive a round trip away from gimbal lock") {
  for (const HeadPose p : {HeadPose{10, 20, 30}, HeadPose{-45, 170, -5}, HeadPose{0, -90, 0}, HeadPose{89, 1, 2}}) {
    const auto q = euler_from_rotation(rotation_from_euler(p));
    CHECK(q.pitch == Approx(p.pitch).margin(1e-9));
    CHECK(q.yaw == Approx(p.yaw).margin(1e-9));
    CHECK(q.roll == Approx(p.roll).margin(1e-9));
  }
}

TEST_CASE("positive yaw turns the face towards the presenter's left") {
  const auto r = rotation_from_euler({0, 30, 0});
  // Forward axis (third column) gains a +x component.
  CHECK(r[0][2] > 0.4);
  const auto up = rotation_from_euler({20, 0, 0});
  CHECK(up[1][2] > 0.3);
}

TEST_CASE("gimbal lock folds roll into yaw and still recomposes") {
  const Mat3 r = rotation_from_euler({90, 25, 40});
  const auto p = euler_from_rotation(r);
  CHECK(p.pitch == Approx(90).margin(1e-6));
  CHECK(p.roll == 0.0);
  const Mat3 back = rotation_from_euler(p);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(back[i][j] == Approx(r[i][j]).margin(1e-9));
  }
}

TEST_CASE("non-rotations are rejected") {
  Mat3 m{{{1, 0, 0}, {0, 1, 0}, {0, 0, -1}}};
  CHECK_THROWS_AS(euler_from_rotation(m), Error);
  m = {{{1.001, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  CHECK_THROWS_AS(euler_from_rotation(m), Error);
}

TEST_CASE("default cones") {
  const auto left = default_presenter_cones();
  CHECK(classify_attention({0, 0, 0}, left) == "audience");
  CHECK(classify_attention({0, 50, 0}, left) == "slides");
  CHECK(classify_attention({-40, 0, 0}, left) == "notes");
  CHECK(classify_attention({-80, 0, 0}, left) == "floor");
  CHECK(classify_attention({0, -120, 0}, left) == "other");
  const auto right = default_presenter_cones(SlideSide::right);
  CHECK(classify_attention({0, -50, 0}, right) == "slides");
  const auto ev = default_evaluator_cones();
  CHECK(classify_attention({0, 0, 0}, ev) == "presenter");
  CHECK(classify_attention({0, 50, 0}, ev) == "screen");
  CHECK(classify_attention({-50, 0, 0}, ev) == "distracted");

  const auto custom = cone_map_from_json(Json::parse(R"({"presenter": [{"target": "board", "yaw": [-5, 5]}]})"),
                                         "presenter");
  REQUIRE(custom.cones.size() == 1);
  CHECK(classify_attention({0, 0, 0}, custom) == "board");
  CHECK(classify_attention({0, 30, 0}, custom) == "other");
}

TEST_CASE("attention weights frames by time and caps gaps") {
  const auto cones = default_presenter_cones();
  std::vector<ingest::HeadPoseFrame> frames;
  for (Millis t = 0; t < 1000; t += 100) frames.push_back({t, HeadPose{0, 0, 0}});
  // A 10 s hole counts for at most five periods.
  for (Millis t = 11000; t < 12000; t += 100) frames.push_back({t, HeadPose{0, 50, 0}});
  frames.push_back({12000, std::monostate{}});
  const auto s = attention_summary(frames, cones, {});
  CHECK(s.shares.at("audience") == Approx(1400.0 / 2400.0));
  CHECK(s.shares.at("slides") == Approx(1000.0 / 2400.0));
  double sum = 0;
  for (const auto& [k, v] : s.shares) sum += v;
  CHECK(sum == Approx(1.0).margin(1e-12));
  CHECK(s.missing_frames == 1);
  CHECK(s.eye_contact_ratio == Approx(s.shares.at("audience")));
  REQUIRE_FALSE(s.longest_away.empty());
  CHECK(s.longest_away[0].target == "slides");
  CHECK_THROWS_AS(attention_summary({}, cones, {}), Error);
}

TEST_CASE("posture recovers the scripted intervals") {
  synth::SynthConfig cfg;
  cfg.seed = 5;
  const auto track = synth::landmark_track(cfg);
  const auto r = posture_report(track.frames);
  CHECK(r.torso_length == Approx(track.torso_length).margin(0.01));
  REQUIRE(r.crossed_arm_intervals.size() == track.crossed_arms.size());
  for (std::size_t i = 0; i < track.crossed_arms.size(); ++i) {
    CHECK(std::abs(r.crossed_arm_intervals[i].start_ms - track.crossed_arms[i].first) <= 200);
    CHECK(std::abs(r.crossed_arm_intervals[i].end_ms - track.crossed_arms[i].second) <= 200);
  }
  REQUIRE(r.pacing_episodes.size() == track.pacing.size());
  for (std::size_t i = 0; i < track.pacing.size(); ++i) {
    const auto& e = r.pacing_episodes[i];
    CHECK(e.start_ms < track.pacing[i].second);
    CHECK(e.end_ms > track.pacing[i].first);
  }
  CHECK(r.hunched_intervals.empty());
  CHECK(r.open_ratio > 0.95);
}

TEST_CASE("posture needs usable landmarks") {
  std::vector<ingest::LandmarkFrame> frames(20);
  for (std::size_t i = 0; i < frames.size(); ++i) frames[i].ts_ms = static_cast<Millis>(i) * 100;
  CHECK_THROWS_AS(posture_report(frames), Error);
}
