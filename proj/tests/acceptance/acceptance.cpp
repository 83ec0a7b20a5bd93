#include <httplib.h>
#include <sys/wait.h>

#include <boost/math/distributions/students_t.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "mosaic/analysis.hpp"
#include "mosaic/biosignal.hpp"
#include "mosaic/capture.hpp"
#include "mosaic/core.hpp"
#include "mosaic/error.hpp"
#include "mosaic/gaze.hpp"
#include "mosaic/schema.hpp"
#include "mosaic/slides.hpp"
#include "mosaic/speech.hpp"
#include "mosaic/synth.hpp"
#include "mosaic/vision.hpp"
#include "support.hpp"

using namespace mosaic;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double var_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

struct Reference {
  double t, df, p;
};

Reference reference_t(const std::vector<double>& a, const std::vector<double>& b, bool paired) {
  double t = 0.0;
  double df = 0.0;
  if (paired) {
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    const double n = static_cast<double>(d.size());
    t = mean_of(d) / std::sqrt(var_of(d) / n);
    df = n - 1.0;
  } else {
    const double va = var_of(a) / static_cast<double>(a.size());
    const double vb = var_of(b) / static_cast<double>(b.size());
    t = (mean_of(a) - mean_of(b)) / std::sqrt(va + vb);
    df = (va + vb) * (va + vb) /
         (va * va / static_cast<double>(a.size() - 1) + vb * vb / static_cast<double>(b.size() - 1));
  }
  const boost::math::students_t dist(df);
  return {t, df, 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)))};
}

Outcome statistics() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(20240601);
  std::uniform_int_distribution<int> size(3, 15);
  std::normal_distribution<double> noise(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const bool paired = i % 2 == 0;
    const std::size_t n1 = static_cast<std::size_t>(size(gen));
    const std::size_t n2 = paired ? n1 : static_cast<std::size_t>(size(gen));
    const double shift = noise(gen);
    std::vector<double> a(n1), b(n2);
    for (auto& x : a) x = 70.0 + 5.0 * noise(gen);
    for (auto& x : b) x = 70.0 + shift + 3.0 * noise(gen);
    const auto ours = biosignal::t_test(a, b, paired ? biosignal::TestMode::paired : biosignal::TestMode::welch);
    const auto ref = reference_t(a, b, paired);
    worst = std::max({worst, std::fabs(ours.t - ref.t), std::fabs(ours.df - ref.df), std::fabs(ours.p - ref.p)});
  }
  const std::vector<double> a{2.0, 3.0, 4.0}, b{1.0, 1.0, 1.0};
  const auto ex = biosignal::t_test(a, b, biosignal::TestMode::paired);
  const auto ref = reference_t(a, b, true);
  const bool example = std::fabs(ex.t - 3.4641) < 1e-4 && ex.df == 2.0 && std::fabs(ex.p - 0.0742) < 1e-4 &&
                       std::fabs(ex.p - ref.p) <= 1e-9;
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && example && secs < 1.0,
          fmt("max deviation %.3g over 100 inputs, example t=%.4f df=%.0f p=%.4f, %.3f s", worst, ex.t, ex.df, ex.p, secs)};
}

Outcome peaks() {
  const auto t0 = Clock::now();
  std::size_t truth = 0, found = 0, matched = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    synth::SynthConfig cfg;
    cfg.seed = seed;
    cfg.profile = synth::Profile::noisy;
    const auto track = synth::heart_track(cfg);
    const auto smoothed = biosignal::smooth(track.samples);
    const auto detected = biosignal::detect_peaks(smoothed, {}, track.samples);
    truth += track.surges.size();
    found += detected.size();
    std::vector<bool> used(detected.size(), false);
    for (Millis s : track.surges) {
      for (std::size_t i = 0; i < detected.size(); ++i) {
        if (!used[i] && std::llabs(static_cast<long long>(detected[i].ts_ms - s)) <= 5000) {
          used[i] = true;
          ++matched;
          break;
        }
      }
    }
  }
  const double recall = truth ? static_cast<double>(matched) / static_cast<double>(truth) : 0.0;
  const double precision = found ? static_cast<double>(matched) / static_cast<double>(found) : 0.0;
  const double secs = seconds_since(t0);
  return {recall >= 0.95 && precision >= 0.95 && secs < 5.0,
          fmt("recall %.3f precision %.3f (%zu surges, %zu peaks), %.3f s", recall, precision, truth, found, secs)};
}

Outcome euler() {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> angle(-180.0, 180.0);
  std::uniform_real_distribution<double> pitch(-90.0, 90.0);
  std::uniform_real_distribution<double> near(89.9, 90.0);
  double worst = 0.0;
  std::size_t gimbal = 0;
  for (int i = 0; i < 1000; ++i) {
    HeadPose pose{pitch(gen), angle(gen), angle(gen)};
    if (i % 10 == 0) pose.pitch = (i % 20 == 0 ? 1.0 : -1.0) * near(gen);
    if (std::fabs(pose.pitch) > 89.9) ++gimbal;
    const Mat3 r = vision::rotation_from_euler(pose);
    const Mat3 back = vision::rotation_from_euler(vision::euler_from_rotation(r));
    for (std::size_t row = 0; row < 3; ++row) {
      for (std::size_t col = 0; col < 3; ++col) worst = std::max(worst, std::fabs(r[row][col] - back[row][col]));
    }
  }
  return {worst <= 1e-6 && gimbal >= 100, fmt("max element error %.3g over 1000 rotations (%zu near gimbal lock)", worst, gimbal)};
}

core::PhaseSchedule fallback_phases() { return core::build_phase_schedule({}, core::PhaseFallback{}); }

Outcome attention() {
  double worst = 0.0;
  double worst_sum = 0.0;
  const auto phases = fallback_phases();
  const auto cones = vision::cone_map_from_json(Json{{"slide_side", "left"}}, "presenter");
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    synth::SynthConfig cfg;
    cfg.seed = seed;
    cfg.profile = seed % 2 ? synth::Profile::easy : synth::Profile::noisy;
    const auto track = synth::headpose_track(cfg);
    const auto s = vision::attention_summary(track.frames, cones, phases);
    double sum = 0.0;
    for (const auto& [k, v] : s.shares) sum += v;
    worst_sum = std::max(worst_sum, std::fabs(sum - 1.0));
    std::set<std::string> keys;
    for (const auto& [k, v] : s.shares) keys.insert(k);
    for (const auto& [k, v] : track.shares) keys.insert(k);
    for (const auto& k : keys) {
      const double got = s.shares.contains(k) ? s.shares.at(k) : 0.0;
      const double want = track.shares.contains(k) ? track.shares.at(k) : 0.0;
      worst = std::max(worst, std::fabs(got - want));
    }
  }
  return {worst <= 0.02 && worst_sum <= 1e-9,
          fmt("max share deviation %.4f, max |sum - 1| %.2g over 10 seeds", worst, worst_sum)};
}

Outcome pitch() {
  std::size_t voiced = 0, within = 0;
  for (double hz : {100.0, 220.0, 330.0}) {
    speech::AudioSignal s;
    s.sample_rate = 16000;
    for (std::size_t i = 0; i < 32000; ++i) {
      s.samples.push_back(static_cast<float>(0.5 * std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) / 16000.0)));
    }
    for (const auto& f : speech::audio_features(s)) {
      if (!f.voiced) continue;
      ++voiced;
      if (std::fabs(*f.f0_hz - hz) <= 3.0) ++within;
    }
  }
  speech::AudioSignal silence;
  silence.sample_rate = 16000;
  silence.samples.assign(32000, 0.0f);
  std::size_t silent_voiced = 0;
  for (const auto& f : speech::audio_features(silence)) silent_voiced += f.voiced ? 1 : 0;
  const double ratio = voiced ? static_cast<double>(within) / static_cast<double>(voiced) : 0.0;
  return {voiced > 0 && ratio >= 0.95 && silent_voiced == 0,
          fmt("%.1f%% of %zu voiced frames within 3 Hz, %zu voiced frames in silence", 100.0 * ratio, voiced, silent_voiced)};
}

Outcome gaze_oracle() {
  bool counts = true;
  double worst = 0.0;
  const auto phases = fallback_phases();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    synth::SynthConfig cfg;
    cfg.seed = seed;
    cfg.profile = seed % 2 ? synth::Profile::easy : synth::Profile::noisy;
    const auto track = synth::gaze_track(cfg);
    const auto fx = gaze::detect_fixations(track.samples);
    const auto bl = gaze::detect_blinks(track.samples);
    const auto map = gaze::map_aoi(fx.fixations, gaze::default_aois(), phases);
    counts = counts && fx.fixations.size() == track.fixations && bl.blinks.size() == track.blinks &&
             bl.data_loss.size() == track.data_loss_runs;
    std::set<std::string> keys;
    for (const auto& [k, v] : map.shares) keys.insert(k);
    for (const auto& [k, v] : track.shares) keys.insert(k);
    for (const auto& k : keys) {
      const double got = map.shares.contains(k) ? map.shares.at(k) : 0.0;
      const double want = track.shares.contains(k) ? track.shares.at(k) : 0.0;
      worst = std::max(worst, std::fabs(got - want));
    }
  }
  return {counts && worst <= 0.01,
          fmt("fixation/blink/loss counts %s, max AOI share deviation %.4f over 10 seeds", counts ? "exact" : "MISMATCH", worst)};
}

Outcome transcript() {
  bool exact = true;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    synth::SynthConfig cfg;
    cfg.seed = seed;
    cfg.profile = seed % 2 ? synth::Profile::easy : synth::Profile::noisy;
    const auto track = synth::transcript_track(cfg);
    const auto r = speech::transcript_patterns(track.words, speech::default_lexicon());
    std::map<std::string, int> got;
    for (const auto& [k, v] : r.fillers) got[k] = static_cast<int>(v.count);
    std::map<std::string, int> want;
    for (const auto& [k, v] : track.fillers) {
      if (v > 0) want[k] = v;
    }
    exact = exact && got == want && static_cast<int>(r.false_starts.size()) == track.false_starts &&
            static_cast<int>(r.long_pauses) == track.long_pauses;
  }
  std::vector<ingest::TranscriptWord> words;
  Millis t = 0;
  for (const char* w : {"and", "you", "know,", "this", "is", "what", "you", "see"}) {
    words.push_back({w, t, t + 200});
    t += 300;
  }
  const auto r = speech::transcript_patterns(words, speech::default_lexicon());
  const bool longest = r.fillers.contains("you know") && r.fillers.at("you know").count == 1 && r.filler_total == 1;
  return {exact && longest, fmt("manifest counts %s over 10 seeds, \"you know\" longest match %s", exact ? "exact" : "MISMATCH",
                                longest ? "ok" : "FAILED")};
}

Json interaction_result(const core::SessionContext& ctx) {
  analysis::AnalysisOptions opt;
  opt.only = {"interaction"};
  for (const auto& r : analysis::run_analyses(ctx, opt).results) {
    if (r["name"] == "interaction") return r;
  }
  return {};
}

Outcome audit() {
  std::size_t hits = 0, extra = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    test::TempDir dir("acc-audit");
    synth::SynthConfig cfg;
    cfg.seed = seed;
    cfg.audio = false;
    const Json manifest = synth::generate_session(dir.path(), cfg);
    const Json& want = manifest["interaction"]["premature"];
    const Json r = interaction_result(core::load_bundle(dir.path()));
    for (const auto& ev : r["details"]["evaluators"]) {
      for (const auto& item : ev["premature_items"]) {
        if (ev["actor_id"] == want["actor_id"] && item == want["item_id"]) {
          ++hits;
        } else {
          ++extra;
        }
      }
    }
  }
  return {hits == 10 && extra == 0, fmt("scripted premature ratings flagged %zu/10, other items flagged %zu", hits, extra)};
}

Outcome decks() {
  using slides::RunSpec;
  using slides::SlideSpec;
  struct Expect {
    std::size_t words, images;
    bool small;
  };
  std::vector<SlideSpec> a(4);
  a[0].title = "Quarterly review";
  a[0].paragraphs = {{{"Revenue grew in every region", 2400}}};
  a[1].title = "Method";
  a[1].paragraphs = {{{"We sampled", 1800}, {" forty classrooms", 1800}}, {{"over two terms", 1600}}};
  a[1].images = 1;
  a[2].images = 3;
  a[3].title = "Thanks";
  a[3].paragraphs = {{{"Questions welcome", std::nullopt}}};
  const std::vector<Expect> ea = {{7, 0, false}, {8, 1, true}, {0, 3, false}, {3, 0, false}};
  std::vector<SlideSpec> b(1);
  b[0].title = "Size";
  b[0].paragraphs = {{{"exactly eighteen", 1800}}};
  const std::vector<Expect> eb = {{3, 0, false}};
  std::vector<SlideSpec> c(2);
  c[0].paragraphs = {{{"tiny", 1750}}};
  c[1].paragraphs = {{{"fine print here", 1000}}, {{"and a heading", 4400}}};
  c[1].images = 2;
  const std::vector<Expect> ec = {{1, 0, true}, {6, 2, true}};

  bool ok = true;
  std::size_t checked = 0;
  for (const auto& [spec, expect] : {std::pair{a, ea}, std::pair{b, eb}, std::pair{c, ec}}) {
    const auto deck = slides::parse_deck(slides::write_deck(spec));
    const auto f = slides::deck_findings(deck);
    ok = ok && deck.slide_count == expect.size();
    for (std::size_t i = 0; ok && i < expect.size(); ++i) {
      ok = deck.slides[i].word_count == expect[i].words && deck.slides[i].image_count == expect[i].images &&
           f.slides[i].small_font == expect[i].small;
      ++checked;
    }
  }
  const auto eighteen = slides::parse_deck(slides::write_deck(b)).slides[0].min_font_pt;
  const bool pt = eighteen && *eighteen == 18.0;
  return {ok && pt, fmt("%zu fixture slides %s, sz 1800 reads as %.1f pt", checked, ok ? "exact" : "MISMATCH",
                        eighteen ? *eighteen : -1.0)};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MOSAIC_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism() {
  const auto t0 = Clock::now();
  test::TempDir dir("acc-e2e");
  std::vector<std::string> reports;
  bool ran = true;
  for (int run = 0; run < 2; ++run) {
    const std::string bundle = (dir / ("run" + std::to_string(run))).string();
    const std::string out = (dir / ("report" + std::to_string(run) + ".json")).string();
    ran = ran && run_cli("synth --seed 42 -o " + bundle) == 0 &&
          run_cli("analyze " + bundle + " -o " + (dir / ("analysis" + std::to_string(run) + ".json")).string()) == 0 &&
          run_cli("report " + bundle + " --format json -o " + out) == 0;
    reports.push_back(ran ? read_file(out) : std::string());
  }
  const double secs = seconds_since(t0);
  if (!ran) return {false, "cli pipeline failed"};
  const auto violations = schema::validate(Json::parse(read_file(MOSAIC_SCHEMA_PATH)), Json::parse(reports[0]));
  const bool same = reports[0] == reports[1];
  return {same && violations.empty() && secs < 60.0,
          fmt("reports %s (%zu bytes), %zu schema violations, %.1f s for two runs", same ? "byte-identical" : "DIFFER",
              reports[0].size(), violations.size(), secs)};
}

Outcome capture_round_trip() {
  test::TempDir dir("acc-capture");
  capture::CaptureConfig cfg;
  cfg.out_dir = dir / "bundle";
  cfg.rubric = synth::default_rubric();
  cfg.labels = {"good_example", "confusing"};
  cfg.session_id = "live";
  capture::CaptureServer server(cfg);
  const int port = server.start("127.0.0.1", 0);

  const auto start_wall = Clock::now();
  auto client_ms = [&] {
    return static_cast<Millis>(std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start_wall).count());
  };
  auto sleep_ms = [](int ms) { std::this_thread::sleep_for(std::chrono::milliseconds(ms)); };

  httplib::Client admin("127.0.0.1", port);
  auto started = admin.Post("/api/v1/session/start", R"({"presenter_id": "s07"})", "application/json");
  if (!started || started->status != 200) return {false, "session start failed"};

  struct Step {
    std::string item;
    int focus_ms;
  };
  struct Script {
    std::string id;
    std::string role;
    bool batched;
    std::vector<Step> steps;
  };
  const std::vector<Script> scripts = {
      {"prof1", "professor", false, {{"attention_capture", 300}, {"eye_contact", 450}, {"voice", 200}}},
      {"peer1", "peer", true, {{"clarity_opening", 250}, {"structure", 500}, {"conclusions", 350}}},
      {"peer2", "peer", true, {{"body_language", 400}, {"slides_design", 150}, {"eye_contact", 300}}},
  };
  std::vector<bool> ok(scripts.size() + 1, true);
  std::vector<std::thread> threads;
  for (std::size_t k = 0; k < scripts.size(); ++k) {
    threads.emplace_back([&, k] {
      const auto& s = scripts[k];
      httplib::Client c("127.0.0.1", port);
      Json pending = Json::array();
      auto send = [&](Json event) {
        event["actor_id"] = s.id;
        if (s.batched) {
          event["client_ts_ms"] = client_ms();
          pending.push_back(std::move(event));
          return;
        }
        auto res = c.Post("/api/v1/events", Json::array({event}).dump(), "application/json");
        ok[k] = ok[k] && res && res->status == 202;
      };
      auto flush = [&] {
        if (pending.empty()) return;
        const Json body{{"sent_client_ts_ms", client_ms()}, {"events", pending}};
        auto res = c.Post("/api/v1/events", body.dump(), "application/json");
        ok[k] = ok[k] && res && res->status == 202;
        pending = Json::array();
      };
      for (const auto& step : s.steps) {
        send({{"kind", "item_focus"}, {"item_id", step.item}});
        sleep_ms(step.focus_ms / 2);
        send({{"kind", "item_rated"}, {"item_id", step.item}, {"value", 4}});
        send({{"kind", "comment_edit"}, {"item_id", step.item}, {"value", 30}});
        sleep_ms(step.focus_ms - step.focus_ms / 2);
        send({{"kind", "item_blur"}, {"item_id", step.item}});
        sleep_ms(40);
        if (k == 2) flush();
      }
      flush();
      Json items = Json::array();
      for (const auto& item : cfg.rubric.items) {
        items.push_back({{"item_id", item.id}, {"score", 3 + static_cast<int>(k % 2)}, {"comment", "observed live by " + s.id}});
      }
      auto res = c.Post("/api/v1/evaluations", Json{{"evaluator_id", s.id}, {"role", s.role}, {"items", items}}.dump(),
                        "application/json");
      ok[k] = ok[k] && res && res->status == 201;
    });
  }
  threads.emplace_back([&] {
    httplib::Client c("127.0.0.1", port);
    auto post = [&](const Json& a) {
      auto res = c.Post("/api/v1/annotations", a.dump(), "application/json");
      ok.back() = ok.back() && res && res->status == 201;
    };
    post({{"label", "phase:opening"}, {"kind", "start"}, {"source", "obs1"}});
    sleep_ms(200);
    post({{"label", "good_example"}, {"source", "obs1"}});
    sleep_ms(200);
    post({{"label", "confusing"}, {"kind", "start"}, {"source", "obs1"}});
    sleep_ms(300);
    post({{"label", "confusing"}, {"kind", "end"}, {"source", "obs1"}});
    post({{"label", "phase:opening"}, {"kind", "end"}, {"source", "obs1"}});
  });
  for (auto& t : threads) t.join();
  server.stop();
  if (std::find(ok.begin(), ok.end(), false) != ok.end()) return {false, "a scripted request was rejected"};

  core::SessionContext ctx;
  try {
    ctx = core::load_bundle(dir / "bundle");
  } catch (const Error& e) {
    return {false, std::string("load_bundle failed: ") + e.what()};
  }
  const Json r = interaction_result(ctx);
  Millis worst = 0;
  std::size_t compared = 0;
  for (const auto& s : scripts) {
    const Json* audit = nullptr;
    for (const auto& ev : r["details"]["evaluators"]) {
      if (ev["actor_id"] == s.id) audit = &ev;
    }
    if (!audit) return {false, "no audit for " + s.id};
    std::map<std::string, Millis> want;
    for (const auto& step : s.steps) want[step.item] += step.focus_ms;
    for (const auto& item : (*audit)["items"]) {
      const auto id = item["item_id"].get<std::string>();
      const Millis expected = want.contains(id) ? want[id] : 0;
      worst = std::max<Millis>(worst, std::llabs(item["focus_ms"].get<Millis>() - expected));
      ++compared;
    }
  }
  const bool clean = ctx.warnings.empty() && ctx.evaluations.size() == 3 && ctx.session.observer_ids.size() == 1 &&
                     ctx.annotations().size() == 5;
  return {clean && worst <= 50,
          fmt("%zu load warnings, %zu evaluations, %zu annotations, max focus deviation %lld ms over %zu items",
              ctx.warnings.size(), ctx.evaluations.size(), ctx.annotations().size(), static_cast<long long>(worst), compared)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"t-test reference", statistics},       {"heart-rate peaks", peaks},    {"euler round trip", euler},
      {"attention shares", attention},        {"pitch estimation", pitch},    {"gaze oracle", gaze_oracle},
      {"transcript patterns", transcript},    {"evaluation audit", audit},    {"deck analysis", decks},
      {"end-to-end determinism", determinism}, {"capture round trip", capture_round_trip},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2zu %-24s %s  %s\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
