#include <catch_amalgamated.hpp>

#include "mosaic/gaze.hpp"

using namespace mosaic;
using namespace mosaic::gaze;
using ingest::GazeSample;
using Catch::Approx;

namespace {

void hold(std::vector<GazeSample>& s, int n, double x, double y) {
  for (int i = 0; i < n; ++i) s.push_back({static_cast<Millis>(s.size()) * 20, x, y, true});
}

void lose(std::vector<GazeSample>& s, int n) {
  for (int i = 0; i < n; ++i) s.push_back({static_cast<Millis>(s.size()) * 20, 0, 0, false});
}

}  // namespace

TEST_CASE("dispersion threshold splits fixations at saccades") {
  std::vector<GazeSample> s;
  hold(s, 10, 0.45, 0.2);
  s.push_back({static_cast<Millis>(s.size()) * 20, 0.6, 0.3, true});
  hold(s, 15, 0.8, 0.4);
  hold(s, 3, 0.1, 0.9);  // too short for a fixation
  const auto r = detect_fixations(s);
  REQUIRE(r.fixations.size() == 2);
  CHECK(r.fixations[0].start_ms == 0);
  CHECK(r.fixations[0].end_ms == 200);
  CHECK(r.fixations[0].x == Approx(0.45));
  CHECK(r.fixations[1].start_ms == 220);
  CHECK(r.fixations[1].end_ms == 520);
  REQUIRE(r.saccades.size() == 1);
  CHECK(r.saccades[0].start_ms == 200);
  CHECK(r.saccades[0].end_ms == 220);
}

TEST_CASE("invalid samples split windows") {
  std::vector<GazeSample> s;
  hold(s, 8, 0.5, 0.5);
  lose(s, 2);
  hold(s, 8, 0.5, 0.5);
  CHECK(detect_fixations(s).fixations.size() == 2);
}

TEST_CASE("blinks and data loss by run length") {
  std::vector<GazeSample> s;
  hold(s, 10, 0.5, 0.5);
  lose(s, 2);  // 40 ms: neither
  hold(s, 10, 0.5, 0.5);
  lose(s, 5);  // 100 ms blink
  hold(s, 10, 0.5, 0.5);
  lose(s, 25);  // 500 ms: still a blink
  hold(s, 10, 0.5, 0.5);
  lose(s, 60);  // 1.2 s data loss
  hold(s, 10, 0.5, 0.5);
  const auto b = detect_blinks(s);
  CHECK(b.blinks.size() == 2);
  REQUIRE(b.data_loss.size() == 1);
  CHECK(b.data_loss[0].end_ms - b.data_loss[0].start_ms == 1200);
  CHECK(b.tracking_ms == static_cast<Millis>(s.size()) * 20 - 1200);
}

TEST_CASE("aoi mapping and shares") {
  const auto aois = default_aois();
  CHECK(aoi_of(0.45, 0.2, aois) == "presenter_face");
  CHECK(aoi_of(0.35, 0.05, aois) == "presenter_face");  // closed rectangle
  CHECK(aoi_of(0.8, 0.3, aois) == "slides");
  CHECK(aoi_of(0.1, 0.9, aois) == "other");

  std::vector<Fixation> f = {{0, 300, 0.45, 0.2}, {300, 400, 0.46, 0.21}, {500, 1100, 0.8, 0.3}};
  const auto m = map_aoi(f, aois, {});
  CHECK(m.shares.at("presenter_face") == Approx(0.4));
  CHECK(m.shares.at("slides") == Approx(0.6));
  CHECK(m.shares.at("other") == 0.0);
  CHECK(m.switches == 1);
  REQUIRE(m.timeline.size() == 2);
  CHECK(m.timeline[0].end_ms == 400);

  CHECK_THROWS(aois_from_json(Json::parse(R"([{"name": "a", "rect": [0, 0, 1.5, 1]}])")));
  CHECK(aois_from_json(Json::array()).size() == 2);
}
