#include <catch_amalgamated.hpp>

#include "mosaic/biosignal.hpp"
#include "mosaic/error.hpp"
#include "mosaic/synth.hpp"

using namespace mosaic;
using namespace mosaic::biosignal;
using Catch::Approx;

TEST_CASE("paired worked example") {
  const std::vector<double> a = {2, 3, 4};
  const std::vector<double> b = {1, 1, 1};
  const auto r = t_test(a, b, TestMode::paired);
  CHECK(r.t == Approx(3.464101615137755).epsilon(1e-12));
  CHECK(r.df == 2.0);
  CHECK(r.p == Approx(0.07417990022744853).epsilon(1e-10));
}

TEST_CASE("welch against frozen reference values") {
  const std::vector<double> a = {1, 2, 3, 4, 5};
  const std::vector<double> b = {2, 4, 6, 8, 10, 12};
  const auto r = t_test(a, b, TestMode::welch);
  CHECK(r.t == Approx(-2.3763541031440183).epsilon(1e-12));
  CHECK(r.df == Approx(6.9722557297949335).epsilon(1e-12));
  CHECK(r.p == Approx(0.04928433820673049).epsilon(1e-9));
  CHECK(r.n1 == 5);
  CHECK(r.n2 == 6);
}

TEST_CASE("degenerate samples") {
  const std::vector<double> same = {1, 1, 1};
  const auto zero = t_test(same, same, TestMode::paired);
  CHECK(zero.t == 0.0);
  CHECK(zero.p == 1.0);
  const std::vector<double> one = {1};
  const std::vector<double> two = {1, 2};
  CHECK_THROWS_AS(t_test(one, one, TestMode::welch), Error);
  CHECK_THROWS_AS(t_test(same, two, TestMode::paired), Error);
  CHECK_THROWS_AS(t_test(same, std::vector<double>{2, 2, 2}, TestMode::welch), Error);
}

TEST_CASE("incomplete beta") {
  CHECK(incomplete_beta(1, 1, 0.25) == Approx(0.25).epsilon(1e-14));
  CHECK(incomplete_beta(2.5, 0.5, 0.3) == Approx(0.018927124071945658).epsilon(1e-12));
  CHECK(incomplete_beta(3, 4, 0) == 0.0);
  CHECK(incomplete_beta(3, 4, 1) == 1.0);
  CHECK(student_t_two_sided_p(0.0, 5) == Approx(1.0));
}

TEST_CASE("smoothing keeps artifact flags and bridges them") {
  std::vector<ingest::HeartSample> s;
  for (int i = 0; i < 9; ++i) s.push_back({i * 1000, 70.0 + (i % 2), false});
  s[4] = {4000, 0.0, true};
  const auto sm = smooth(s);
  REQUIRE(sm.size() == s.size());
  CHECK(sm[4].artifact);
  CHECK(sm[4].bpm >= 70.0);
  CHECK(sm[4].bpm <= 71.0);
}

TEST_CASE("peaks recover synthetic surges") {
  synth::SynthConfig cfg;
  cfg.seed = 9;
  cfg.profile = synth::Profile::noisy;
  const auto track = synth::heart_track(cfg);
  const auto peaks = detect_peaks(smooth(track.samples), {}, track.samples);
  REQUIRE(peaks.size() == track.surges.size());
  for (std::size_t i = 0; i < peaks.size(); ++i) CHECK(std::abs(peaks[i].ts_ms - track.surges[i]) <= 5000);
}

TEST_CASE("phase statistics and event alignment") {
  synth::SynthConfig cfg;
  cfg.seed = 2;
  const auto track = synth::heart_track(cfg);
  const auto b = synth::phase_bounds(cfg);
  const core::PhaseSchedule phases = {{core::PhaseName::opening, 0, b.opening_end},
                                      {core::PhaseName::body, b.opening_end, b.body_end},
                                      {core::PhaseName::conclusion, b.body_end, b.talk_end},
                                      {core::PhaseName::qa, b.talk_end, b.span}};
  const auto peaks = detect_peaks(smooth(track.samples), {}, track.samples);
  std::vector<TimelineEvent> events = {{track.surges[0] - 3000, "annotation", "nervous_movement"}};
  const auto r = phase_stats_and_alignment(smooth(track.samples), phases, peaks, events);
  REQUIRE(r.phases.size() == 4);
  CHECK(r.phases[0].mean == Approx(70.0).margin(0.3));
  CHECK(r.phases[2].mean == Approx(85.0).margin(0.3));
  REQUIRE_FALSE(r.comparisons.empty());
  CHECK(r.comparisons[0].test.mode == TestMode::welch);
  CHECK(r.comparisons[0].test.p < 1e-6);
  REQUIRE_FALSE(r.matches.empty());
  REQUIRE(r.matches[0].event);
  CHECK(r.matches[0].event->label == "nervous_movement");
  CHECK(r.matches.size() + r.unmatched.size() == peaks.size());
}
