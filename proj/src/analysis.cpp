#include "mosaic/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mosaic/behaviorlog.hpp"
#include "mosaic/biosignal.hpp"
#include "mosaic/error.hpp"
#include "mosaic/gaze.hpp"
#include "mosaic/slides.hpp"
#include "mosaic/speech.hpp"
#include "mosaic/vision.hpp"

namespace mosaic::analysis {

bool is_analysis_name(std::string_view name) noexcept {
  return std::find(kAnalysisNames.begin(), kAnalysisNames.end(), name) != kAnalysisNames.end();
}

namespace {

using ingest::StreamKind;

struct Absent {
  std::string reason;
};

Json skeleton(std::string_view name) {
  return Json{{"name", std::string(name)},
              {"status", "ok"},
              {"reason", nullptr},
              {"metrics", Json::object()},
              {"details", Json::object()},
              {"limitations", Json::array()}};
}

Json absent(std::string_view name, const std::string& reason) {
  Json j = skeleton(name);
  j["status"] = "absent";
  j["reason"] = reason;
  return j;
}

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

double threshold(const core::Session& s, const char* group, const char* key, double fallback) {
  if (auto g = s.thresholds.find(group); g != s.thresholds.end() && g->is_object()) {
    if (auto v = g->find(key); v != g->end() && v->is_number()) {
      return v->get<double>();
    }
  }
  return fallback;
}

Millis threshold_ms(const core::Session& s, const char* group, const char* key, Millis fallback) {
  return static_cast<Millis>(std::llround(threshold(s, group, key, static_cast<double>(fallback))));
}

template <typename T>
std::vector<std::pair<std::string, const std::vector<T>*>> streams(const core::SessionContext& ctx, StreamKind kind) {
  std::vector<std::pair<std::string, const std::vector<T>*>> out;
  for (const auto* s : ctx.streams_of(kind)) {
    out.emplace_back(s->ref.subject, &std::get<std::vector<T>>(s->data));
  }
  return out;
}

template <typename T>
const std::vector<T>* presenter_stream(const core::SessionContext& ctx, StreamKind kind) {
  for (const auto& [subject, data] : streams<T>(ctx, kind)) {
    if (subject == ctx.session.presenter_id || subject.empty()) {
      return data;
    }
  }
  return nullptr;
}

bool is_evaluator(const core::Session& s, const std::string& id) {
  return std::any_of(s.evaluators.begin(), s.evaluators.end(), [&](const auto& e) { return e.id == id; });
}

Json intervals(const std::vector<vision::Interval>& v) {
  Json a = Json::array();
  for (const auto& i : v) {
    a.push_back({{"start_ms", i.start_ms}, {"end_ms", i.end_ms}});
  }
  return a;
}

struct Runner {
  const core::SessionContext& ctx;
  const core::PhaseSchedule& phases;
  AnalysisSet& out;

  void metric(Json& r, const std::string& key, double value) {
    r["metrics"][key] = value;
    out.metrics[r["name"].get<std::string>() + "." + key] = value;
  }

  Json headpose() {
    Json r = skeleton("headpose");
    const auto all = streams<ingest::HeadPoseFrame>(ctx, StreamKind::headpose_jsonl);
    if (all.empty()) throw Absent{"no head pose stream"};
    const auto* presenter = presenter_stream<ingest::HeadPoseFrame>(ctx, StreamKind::headpose_jsonl);
    if (presenter) {
      const auto cones = vision::cone_map_from_json(ctx.session.cone_map, "presenter");
      const auto s = vision::attention_summary(*presenter, cones, phases);
      metric(r, "eye_contact_ratio", s.eye_contact_ratio);
      const double total = static_cast<double>(s.classified_ms + s.missing_ms);
      metric(r, "missing_ratio", total > 0 ? static_cast<double>(s.missing_ms) / total : 0.0);
      for (const auto& c : cones.cones) {
        metric(r, c.target + "_share", s.shares.contains(c.target) ? s.shares.at(c.target) : 0.0);
      }
      metric(r, cones.fallback + "_share", s.shares.contains(cones.fallback) ? s.shares.at(cones.fallback) : 0.0);
      Json away = Json::array();
      for (const auto& a : s.longest_away) {
        away.push_back({{"start_ms", a.start_ms}, {"end_ms", a.end_ms}, {"target", a.target}});
      }
      r["details"]["presenter"] = {{"shares", s.shares},
                                   {"per_phase", s.per_phase},
                                   {"longest_away", away},
                                   {"frames", s.frames},
                                   {"missing_frames", s.missing_frames}};
    } else {
      r["details"]["presenter"] = nullptr;
    }
    Json evaluators = Json::object();
    const auto ev_cones = vision::cone_map_from_json(ctx.session.cone_map, "evaluator");
    for (const auto& [subject, data] : all) {
      if (data == presenter || !is_evaluator(ctx.session, subject) || data->empty()) continue;
      const auto s = vision::attention_summary(*data, ev_cones, phases);
      evaluators[subject] = {{"focus_ratio", s.eye_contact_ratio}, {"per_phase", s.per_phase}};
    }
    r["details"]["evaluators"] = evaluators;
    r["limitations"].push_back("Evaluator head pose is summarized per phase, not per rubric item being graded.");
    r["limitations"].push_back("Notes and floor are separated by pitch depth only.");
    return r;
  }

  Json posture() {
    Json r = skeleton("posture");
    const auto* frames = presenter_stream<ingest::LandmarkFrame>(ctx, StreamKind::landmarks_jsonl);
    if (!frames) throw Absent{"no presenter landmark stream"};
    vision::PostureConfig cfg;
    cfg.sustain_ms = threshold_ms(ctx.session, "posture", "sustain_ms", cfg.sustain_ms);
    cfg.pacing_amplitude = threshold(ctx.session, "posture", "pacing_amplitude", cfg.pacing_amplitude);
    const auto p = vision::posture_report(*frames, cfg);
    metric(r, "open_ratio", p.open_ratio);
    metric(r, "crossed_ratio", p.crossed_ratio);
    metric(r, "hunched_ratio", p.hunched_ratio);
    metric(r, "pacing_ratio", p.pacing_ratio);
    metric(r, "mean_energy", p.mean_energy);
    metric(r, "pacing_episodes", static_cast<double>(p.pacing_episodes.size()));
    r["details"] = {{"torso_length", p.torso_length},
                    {"crossed_arm_intervals", intervals(p.crossed_arm_intervals)},
                    {"hunched_intervals", intervals(p.hunched_intervals)},
                    {"pacing_episodes", intervals(p.pacing_episodes)},
                    {"movement_energy_series", p.movement_energy_series},
                    {"openness_series", p.openness_series},
                    {"first_ms", p.first_ms},
                    {"frames", p.frames},
                    {"usable_frames", p.usable_frames}};
    for (const auto& e : p.pacing_episodes) {
      out.timeline.push_back({e.start_ms, e.end_ms, "pacing", "pacing episode", "posture"});
    }
    return r;
  }

  Json audio() {
    Json r = skeleton("audio");
    if (!ctx.audio) throw Absent{"no audio"};
    auto frames = speech::audio_features(*ctx.audio);
    for (auto& f : frames) {
      f.ts_ms += ctx.audio_offset_ms;
    }
    speech::VocalConfig cfg;
    cfg.monotone_semitone_sd = threshold(ctx.session, "audio", "monotone_semitone_sd", cfg.monotone_semitone_sd);
    cfg.pause_min_ms = threshold_ms(ctx.session, "audio", "pause_min_ms", cfg.pause_min_ms);
    cfg.long_pause_ms = threshold_ms(ctx.session, "audio", "long_pause_ms", cfg.long_pause_ms);
    try {
      const auto v = speech::vocal_summary(frames, cfg);
      metric(r, "median_hz", v.median_hz);
      metric(r, "semitone_sd", v.semitone_sd);
      metric(r, "voiced_ratio", v.voiced_ratio);
      const auto longs = std::count_if(v.silences.begin(), v.silences.end(), [](const auto& s) { return s.long_pause; });
      metric(r, "silences", static_cast<double>(v.silences.size()));
      metric(r, "long_silences", static_cast<double>(longs));
      Json mod = Json::array();
      for (const auto& m : v.modulation_per_minute) {
        mod.push_back(opt(m));
      }
      r["details"] = {{"monotone", v.monotone ? "true" : "false"},
                      {"frames", v.frames},
                      {"voiced_frames", v.voiced_frames},
                      {"modulation_per_minute", mod}};
    } catch (const Error& e) {
      if (e.code() != Errc::no_voiced_frames) throw;
      for (const char* k : {"median_hz", "semitone_sd", "voiced_ratio", "silences", "long_silences"}) {
        r["metrics"][k] = nullptr;
      }
      r["details"] = {{"monotone", "indeterminate"},
                      {"frames", frames.size()},
                      {"voiced_frames", 0},
                      {"modulation_per_minute", Json::array()}};
      out.warnings.push_back("audio: no voiced frames");
    }
    r["limitations"].push_back("Fluency is reported through pauses, speaking rate and voiced ratio; no clarity score.");
    r["limitations"].push_back("Articulation is not assessed.");
    return r;
  }

  Json speech_patterns() {
    Json r = skeleton("speech");
    const auto* words = presenter_stream<ingest::TranscriptWord>(ctx, StreamKind::transcript_jsonl);
    if (!words) throw Absent{"no transcript"};
    speech::Lexicon lexicon = speech::default_lexicon();
    if (auto g = ctx.session.thresholds.find("speech"); g != ctx.session.thresholds.end() && g->contains("lexicon")) {
      std::string text;
      for (const auto& e : (*g)["lexicon"]) text += e.get<std::string>() + "\n";
      lexicon = speech::parse_lexicon(text);
    }
    speech::TranscriptConfig cfg;
    cfg.long_pause_ms = threshold_ms(ctx.session, "speech", "long_pause_ms", cfg.long_pause_ms);
    const auto p = speech::transcript_patterns(*words, lexicon, cfg);
    const double talking_min = static_cast<double>(p.span_ms - p.long_pause_ms) / 60000.0;
    metric(r, "words", static_cast<double>(p.words));
    metric(r, "words_per_minute", p.words_per_minute);
    metric(r, "filler_total", static_cast<double>(p.filler_total));
    metric(r, "filler_per_minute", talking_min > 0 ? static_cast<double>(p.filler_total) / talking_min : 0.0);
    metric(r, "false_starts", static_cast<double>(p.false_starts.size()));
    metric(r, "short_pauses", static_cast<double>(p.short_pauses));
    metric(r, "long_pauses", static_cast<double>(p.long_pauses));
    Json fillers = Json::object();
    for (const auto& [k, v] : p.fillers) {
      fillers[k] = {{"count", v.count}, {"ts_ms", v.ts_ms}};
    }
    Json fs = Json::array();
    for (const auto& f : p.false_starts) fs.push_back({{"ts_ms", f.ts_ms}, {"word", f.word}});
    Json pauses = Json::array();
    for (const auto& q : p.pauses) {
      pauses.push_back({{"start_ms", q.start_ms}, {"end_ms", q.end_ms}, {"class", q.long_pause ? "long" : "short"}});
    }
    r["details"] = {{"fillers", fillers},
                    {"false_starts", fs},
                    {"pauses", pauses},
                    {"span_ms", p.span_ms},
                    {"speaking_ms", p.speaking_ms}};
    r["limitations"].push_back("\"like\" is counted on every occurrence; discourse-marker use is not disambiguated.");
    return r;
  }

  std::vector<biosignal::TimelineEvent> alignment_events() {
    std::vector<biosignal::TimelineEvent> ev{{0, "talk_start", "talk start"}};
    for (const auto& e : ctx.events()) {
      if (e.kind == ingest::EventKind::slide_advance || e.kind == ingest::EventKind::slide_back) {
        ev.push_back({e.ts_ms, std::string(ingest::to_string(e.kind)), e.actor_id});
      }
    }
    for (const auto& a : ctx.annotations()) {
      if (a.kind == AnnotationKind::instant) {
        ev.push_back({a.ts_ms, "annotation", a.label});
      }
    }
    for (const auto& p : phases) {
      ev.push_back({p.start_ms, "phase_start", std::string(core::to_string(p.name))});
    }
    std::stable_sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) { return a.ts_ms < b.ts_ms; });
    return ev;
  }

  static Json phase_json(const biosignal::PhaseStatsReport& rep) {
    Json ph = Json::array();
    for (const auto& s : rep.phases) {
      ph.push_back({{"phase", s.phase}, {"n", s.n}, {"mean", s.mean}, {"sd", s.sd}, {"min", s.min}, {"max", s.max}});
    }
    return ph;
  }

  Json heart() {
    Json r = skeleton("heart");
    const auto* raw = presenter_stream<ingest::HeartSample>(ctx, StreamKind::heart_csv);
    if (!raw) throw Absent{"no presenter heart-rate stream"};
    if (raw->empty()) throw Error(Errc::empty_stream, "heart rate");
    biosignal::PeakConfig cfg;
    cfg.z_threshold = threshold(ctx.session, "heart", "z_threshold", cfg.z_threshold);
    cfg.min_separation_ms = threshold_ms(ctx.session, "heart", "min_separation_ms", cfg.min_separation_ms);
    cfg.baseline_window_ms = threshold_ms(ctx.session, "heart", "baseline_window_ms", cfg.baseline_window_ms);
    const auto smoothed = biosignal::smooth(*raw);
    const auto peaks = biosignal::detect_peaks(smoothed, cfg, *raw);
    const auto events = alignment_events();
    const Millis window = threshold_ms(ctx.session, "heart", "alignment_window_ms", 10000);
    const auto rep = biosignal::phase_stats_and_alignment(smoothed, phases, peaks, events, window);

    std::vector<double> valid;
    for (const auto& s : smoothed) {
      if (!s.artifact) valid.push_back(s.bpm);
    }
    metric(r, "peak_count", static_cast<double>(peaks.size()));
    metric(r, "mean_bpm", valid.empty() ? 0.0 : stats::mean(valid));
    metric(r, "artifact_samples", static_cast<double>(std::count_if(raw->begin(), raw->end(), [](auto& s) {
             return s.artifact;
           })));
    for (const auto& s : rep.phases) {
      if (s.n > 0) metric(r, s.phase + "_mean", s.mean);
    }
    Json comps = Json::array();
    for (const auto& c : rep.comparisons) {
      comps.push_back({{"a", c.a},
                       {"b", c.b},
                       {"mode", std::string(biosignal::to_string(c.test.mode))},
                       {"t", c.test.t},
                       {"df", c.test.df},
                       {"p", c.test.p},
                       {"n1", c.test.n1},
                       {"n2", c.test.n2}});
      metric(r, "p_" + c.a + "_" + c.b, c.test.p);
    }
    Json pk = Json::array();
    for (const auto& p : peaks) {
      pk.push_back({{"ts_ms", p.ts_ms}, {"bpm", p.bpm}, {"z", p.z}});
      out.timeline.push_back({p.ts_ms, std::nullopt, "hr_peak", "heart-rate peak", "heart"});
    }
    Json matches = Json::array();
    for (const auto& m : rep.matches) {
      matches.push_back({{"peak_ts_ms", m.peak.ts_ms},
                         {"event_ts_ms", m.event->ts_ms},
                         {"event_kind", m.event->kind},
                         {"event_label", m.event->label},
                         {"offset_ms", m.offset_ms}});
    }
    Json unmatched = Json::array();
    for (const auto& u : rep.unmatched) unmatched.push_back(u.ts_ms);

    Json evaluators = Json::object();
    for (const auto& [subject, data] : streams<ingest::HeartSample>(ctx, StreamKind::heart_csv)) {
      if (data == raw || !is_evaluator(ctx.session, subject)) continue;
      const auto sm = biosignal::smooth(*data);
      const auto erep = biosignal::phase_stats_and_alignment(sm, phases, {}, {}, window, {});
      evaluators[subject] = {{"phases", phase_json(erep)}};
    }
    r["details"] = {{"peaks", pk},
                    {"phases", phase_json(rep)},
                    {"comparisons", comps},
                    {"matches", matches},
                    {"unmatched_peaks", unmatched},
                    {"evaluators", evaluators}};
    r["limitations"].push_back(
        "Within-session phase comparisons use Welch's test; paired tests are applied across presenters in cohort "
        "mode.");
    return r;
  }

  Json gaze_analysis() {
    Json r = skeleton("gaze");
    const auto all = streams<ingest::GazeSample>(ctx, StreamKind::gaze_jsonl);
    if (all.empty()) throw Absent{"no eye-tracking stream"};
    const auto& [subject, samples] = all.front();
    gaze::FixationConfig fcfg;
    fcfg.dispersion_threshold = threshold(ctx.session, "gaze", "dispersion_threshold", fcfg.dispersion_threshold);
    fcfg.min_fixation_ms = threshold_ms(ctx.session, "gaze", "min_fixation_ms", fcfg.min_fixation_ms);
    const auto fx = gaze::detect_fixations(*samples, fcfg);
    const auto bl = gaze::detect_blinks(*samples);
    const auto aois = gaze::aois_from_json(ctx.session.aoi_config);
    const auto map = gaze::map_aoi(fx.fixations, aois, phases);
    metric(r, "fixation_count", static_cast<double>(fx.fixations.size()));
    metric(r, "saccade_count", static_cast<double>(fx.saccades.size()));
    metric(r, "blink_count", static_cast<double>(bl.blinks.size()));
    metric(r, "blink_rate_per_min", bl.rate_per_min);
    Millis lost = 0;
    for (const auto& d : bl.data_loss) lost += d.end_ms - d.start_ms;
    metric(r, "data_loss_ms", static_cast<double>(lost));
    metric(r, "aoi_switches", static_cast<double>(map.switches));
    for (const auto& [aoi, share] : map.shares) {
      metric(r, aoi + "_share", share);
    }
    Json timeline = Json::array();
    for (const auto& v : map.timeline) {
      timeline.push_back({{"start_ms", v.start_ms}, {"end_ms", v.end_ms}, {"aoi", v.aoi}});
    }
    r["details"] = {{"observer", subject},
                    {"shares", map.shares},
                    {"per_phase", map.per_phase},
                    {"aoi_timeline", timeline},
                    {"fixation_ms", map.fixation_ms},
                    {"tracking_ms", bl.tracking_ms}};
    r["limitations"].push_back("Areas of interest are static rectangles in scene coordinates; head motion is not compensated.");
    return r;
  }

  Json interaction() {
    Json r = skeleton("interaction");
    const auto events = ctx.events();
    if (ctx.streams_of(StreamKind::events_jsonl).empty() && ctx.evaluations.empty()) {
      throw Absent{"no interaction log"};
    }
    int slide_count = ctx.session.slide_count;
    if (slide_count <= 0 && ctx.deck_bytes) {
      try {
        slide_count = static_cast<int>(slides::parse_deck(*ctx.deck_bytes).slide_count);
      } catch (const Error&) {
        slide_count = 0;
      }
    }
    behaviorlog::SlideConfig scfg;
    scfg.rushed_ms = threshold_ms(ctx.session, "interaction", "rushed_slide_ms", scfg.rushed_ms);
    scfg.overlong_ms = threshold_ms(ctx.session, "interaction", "overlong_slide_ms", scfg.overlong_ms);
    std::vector<ingest::InteractionEvent> slide_events;
    for (const auto& e : events) {
      if (e.kind == ingest::EventKind::slide_advance || e.kind == ingest::EventKind::slide_back) {
        slide_events.push_back(e);
      }
    }
    const auto tl = behaviorlog::slide_timeline(slide_events, slide_count, ctx.session.span_ms(), scfg);

    behaviorlog::AuditInput in;
    in.events = events;
    in.phases = &phases;
    in.span_ms = ctx.session.span_ms();
    if (ctx.rubric) {
      for (const auto& item : ctx.rubric->items) {
        in.item_order.push_back(item.id);
        if (item.phase) in.item_phase[item.id] = *item.phase;
      }
    }
    std::set<std::string> logged;
    for (const auto& e : events) {
      if (e.item_id) logged.insert(e.actor_id);
    }
    for (const auto& ev : ctx.evaluations) {
      if (!logged.contains(ev.evaluator_id)) continue;
      for (const auto& s : ev.items) in.comments[ev.evaluator_id][s.item_id] = s.comment;
    }
    behaviorlog::AuditConfig acfg;
    acfg.min_active_ratio = threshold(ctx.session, "interaction", "min_active_ratio", acfg.min_active_ratio);
    acfg.min_median_comment = threshold(ctx.session, "interaction", "min_median_comment", acfg.min_median_comment);
    const auto audit = behaviorlog::evaluation_audit(in, acfg);

    Json visits = Json::array();
    for (std::size_t i = 0; i < tl.visits.size(); ++i) {
      const auto& v = tl.visits[i];
      visits.push_back({{"slide", v.slide},
                        {"enter_ms", v.enter_ms},
                        {"exit_ms", v.exit_ms},
                        {"rushed", v.rushed},
                        {"overlong", v.overlong}});
      if (i > 0) {
        out.timeline.push_back({v.enter_ms, std::nullopt, "slide_change", "slide " + std::to_string(v.slide), "interaction"});
      }
    }
    Json evaluators = Json::array();
    std::size_t premature = 0;
    std::size_t flagged = 0;
    for (const auto& a : audit.evaluators) {
      Json items = Json::array();
      for (const auto& it : a.items) {
        items.push_back({{"item_id", it.item_id},
                         {"focus_ms", it.focus_ms},
                         {"rating_ts_ms", it.rating_ts},
                         {"last_score", it.last_score ? Json(*it.last_score) : Json(nullptr)},
                         {"comment_length", it.comment_length},
                         {"premature", it.premature}});
        if (it.premature) {
          out.timeline.push_back({it.rating_ts.empty() ? 0 : it.rating_ts.front(), std::nullopt, "premature_rating",
                                  a.actor_id + " rated " + it.item_id, "interaction"});
        }
      }
      Json order = Json::array();
      for (const auto& o : a.order) order.push_back({{"ts_ms", o.ts_ms}, {"item_id", o.item_id}, {"score", o.score}});
      evaluators.push_back({{"actor_id", a.actor_id},
                            {"items", items},
                            {"premature_items", a.premature_items},
                            {"active_ms", a.active_ms},
                            {"activity_ratio", a.activity_ratio},
                            {"median_comment_length", a.median_comment_length},
                            {"flags", a.flags},
                            {"order", order}});
      premature += a.premature_items.size();
      flagged += a.flags.empty() ? 0 : 1;
    }
    metric(r, "slide_visits", static_cast<double>(tl.visits.size()));
    metric(r, "back_navigations", static_cast<double>(tl.back_navigations));
    metric(r, "rushed_slides", static_cast<double>(tl.rushed));
    metric(r, "overlong_slides", static_cast<double>(tl.overlong));
    metric(r, "premature_ratings", static_cast<double>(premature));
    metric(r, "flagged_evaluators", static_cast<double>(flagged));
    r["details"] = {{"slide_visits", visits}, {"evaluators", evaluators}, {"warnings", audit.warnings}};
    for (const auto& w : audit.warnings) out.warnings.push_back("interaction: " + w);
    r["limitations"].push_back("Cross-evaluator inconsistency is reported as score spread in the rubric aggregates.");
    return r;
  }

  Json slides_analysis() {
    Json r = skeleton("slides");
    if (!ctx.deck_bytes) throw Absent{"no deck"};
    const auto deck = slides::parse_deck(*ctx.deck_bytes);
    slides::FindingsConfig cfg;
    cfg.min_font_pt = threshold(ctx.session, "slides", "min_font_pt", cfg.min_font_pt);
    cfg.max_words = static_cast<std::size_t>(threshold(ctx.session, "slides", "max_words", static_cast<double>(cfg.max_words)));
    const auto f = slides::deck_findings(deck, cfg);
    metric(r, "slide_count", static_cast<double>(deck.slide_count));
    metric(r, "mean_words", f.mean_words);
    metric(r, "image_text_ratio", f.image_text_ratio);
    metric(r, "text_dense_slides", static_cast<double>(f.text_dense_slides));
    metric(r, "small_font_slides", static_cast<double>(f.small_font_slides));
    metric(r, "missing_title_slides", static_cast<double>(f.missing_title_slides));
    metric(r, "numbered_slides", static_cast<double>(f.numbered_slides));
    Json per = Json::array();
    for (std::size_t i = 0; i < deck.slides.size(); ++i) {
      const auto& s = deck.slides[i];
      const auto& sf = f.slides[i];
      Json box = nullptr;
      if (s.slide_number_box) {
        box = {{"x", s.slide_number_box->x}, {"y", s.slide_number_box->y}, {"cx", s.slide_number_box->cx},
               {"cy", s.slide_number_box->cy}};
      }
      per.push_back({{"index", s.index},
                     {"title", s.title ? Json(*s.title) : Json(nullptr)},
                     {"word_count", s.word_count},
                     {"image_count", s.image_count},
                     {"has_slide_number", s.has_slide_number},
                     {"slide_number_box", box},
                     {"min_font_pt", opt(s.min_font_pt)},
                     {"flags",
                      {{"small_font", sf.small_font},
                       {"text_dense", sf.text_dense},
                       {"missing_title", sf.missing_title},
                       {"no_slide_number", sf.no_slide_number}}}});
    }
    r["details"] = {{"slides", per}};
    r["limitations"].push_back("Only explicit run font sizes are checked; theme and master inheritance is not resolved.");
    return r;
  }

  Json run(std::string_view name) {
    if (name == "headpose") return headpose();
    if (name == "posture") return posture();
    if (name == "audio") return audio();
    if (name == "speech") return speech_patterns();
    if (name == "heart") return heart();
    if (name == "gaze") return gaze_analysis();
    if (name == "interaction") return interaction();
    return slides_analysis();
  }
};

}  // namespace

AnalysisSet run_analyses(const core::SessionContext& ctx, const AnalysisOptions& options) {
  AnalysisSet out;
  const auto phases = ctx.phases();
  Runner runner{ctx, phases, out};
  for (const auto name : kAnalysisNames) {
    if (!options.only.empty() && !options.only.contains(std::string(name))) {
      out.results.push_back(absent(name, "not selected"));
      continue;
    }
    try {
      out.results.push_back(runner.run(name));
    } catch (const Absent& a) {
      out.results.push_back(absent(name, a.reason));
    } catch (const Error& e) {
      out.results.push_back(absent(name, e.what()));
      out.warnings.push_back(std::string(name) + ": " + e.what());
    }
  }
  for (const auto& a : ctx.annotations()) {
    out.timeline.push_back({a.ts_ms, std::nullopt, "annotation", a.label, a.source});
  }
  std::stable_sort(out.timeline.begin(), out.timeline.end(), [](const TimelineMark& a, const TimelineMark& b) {
    return a.ts_ms < b.ts_ms;
  });
  return out;
}

}  // namespace mosaic::analysis
