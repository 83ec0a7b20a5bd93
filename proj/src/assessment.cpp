#include "mosaic/assessment.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mosaic/error.hpp"

namespace mosaic::assessment {

const ItemAggregate* RubricAggregates::find(std::string_view item_id) const noexcept {
  for (const auto& i : items) {
    if (i.item_id == item_id) {
      return &i;
    }
  }
  return nullptr;
}

namespace {

std::optional<double> mean_of(const std::vector<double>& v) {
  if (v.empty()) {
    return std::nullopt;
  }
  return stats::mean(v);
}

}  // namespace

RubricAggregates aggregate_rubric(std::span<const Evaluation> evaluations, const Rubric& rubric,
                                  const AssessmentConfig& cfg) {
  std::vector<const Evaluation*> sorted;
  for (const auto& e : evaluations) {
    sorted.push_back(&e);
  }
  // Sorting makes every derived list independent of input order.
  std::stable_sort(sorted.begin(), sorted.end(), [](const Evaluation* a, const Evaluation* b) {
    return a->evaluator_id < b->evaluator_id;
  });
  RubricAggregates agg;
  agg.rubric_version = rubric.version;
  for (const auto* e : sorted) {
    switch (e->role) {
      case Role::professor: ++agg.professors; break;
      case Role::peer: ++agg.peers; break;
      case Role::self: ++agg.selves; break;
    }
  }
  if (agg.professors + agg.peers == 0) {
    throw Error(Errc::no_external_evaluations, std::to_string(evaluations.size()) + " evaluations, none external");
  }
  for (const auto& item : rubric.items) {
    ItemAggregate a;
    a.item_id = item.id;
    a.title = item.title;
    std::vector<double> prof, peer, self, ext;
    for (const auto* e : sorted) {
      const ItemScore* s = e->find(item.id);
      if (!s) {
        continue;
      }
      const double v = s->score;
      if (e->role == Role::professor) prof.push_back(v);
      if (e->role == Role::peer) peer.push_back(v);
      if (e->role == Role::self) self.push_back(v);
      if (e->role != Role::self) ext.push_back(v);
      if (!trim(s->comment).empty()) {
        a.comments[std::string(to_string(e->role))].push_back(s->comment);
      }
    }
    a.professor_mean = mean_of(prof);
    a.peer_mean = mean_of(peer);
    a.self_score = mean_of(self);
    a.external_mean = mean_of(ext);
    a.external_count = ext.size();
    if (!ext.empty()) {
      const auto [lo, hi] = std::minmax_element(ext.begin(), ext.end());
      a.spread = *hi - *lo;
    }
    if (a.self_score && a.external_mean) {
      a.divergent = std::fabs(*a.self_score - *a.external_mean) >= cfg.divergence;
    }
    agg.items.push_back(std::move(a));
  }
  return agg;
}

std::map<std::string, double> class_averages(std::span<const RubricAggregates> sessions) {
  std::map<std::string, std::vector<double>> values;
  for (const auto& s : sessions) {
    for (const auto& i : s.items) {
      if (i.external_mean) {
        values[i.item_id].push_back(*i.external_mean);
      }
    }
  }
  std::map<std::string, double> out;
  for (const auto& [id, v] : values) {
    out[id] = stats::mean(v);
  }
  return out;
}

std::string describe_metric(const std::string& metric_id, double value) {
  auto pct = [](double v) { return std::to_string(static_cast<long>(std::lround(v * 100.0))) + "%"; };
  auto fixed1 = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return std::string(buf);
  };
  if (metric_id == "headpose.eye_contact_ratio") return "eye contact " + pct(value) + " of talk";
  if (metric_id == "posture.open_ratio") return "open posture " + pct(value) + " of talk";
  if (metric_id == "posture.crossed_ratio") return "arms crossed " + pct(value) + " of talk";
  if (metric_id == "audio.semitone_sd") return "pitch variation " + fixed1(value) + " semitones";
  if (metric_id == "speech.filler_per_minute") return fixed1(value) + " filler words per minute";
  if (metric_id == "speech.words_per_minute") return fixed1(value) + " words per minute";
  if (metric_id == "slides.text_dense_slides") return fixed1(value) + " text-dense slides";
  if (metric_id == "slides.small_font_slides") return fixed1(value) + " slides with small fonts";
  if (metric_id == "gaze.presenter_face_share") return "audience looked at the presenter " + pct(value) + " of the time";
  if (metric_id == "gaze.slides_share") return "audience looked at the slides " + pct(value) + " of the time";
  return metric_id + " = " + format_number(round6(value));
}

namespace {

std::string substitute(std::string text, const std::string& key, const std::string& value) {
  const std::string token = "{" + key + "}";
  for (auto pos = text.find(token); pos != std::string::npos; pos = text.find(token, pos + value.size())) {
    text.replace(pos, token.size(), value);
  }
  return text;
}

std::string mean_text(double m) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", m);
  return buf;
}

FeedbackSections template_feedback(const RubricAggregates& agg, const MetricMap& metrics, const Rubric& rubric,
                                   const Json& templates, const AssessmentConfig& cfg) {
  FeedbackSections f;
  const Json items = templates.is_object() ? templates.value("items", Json::object()) : Json::object();
  const std::string generic = templates.is_object()
                                  ? templates.value("generic_action", std::string("Review the rubric level "
                                                                                  "descriptions for {title} and "
                                                                                  "practise the next level."))
                                  : std::string("Review the rubric level descriptions for {title} and practise the "
                                                "next level.");
  std::vector<const ItemAggregate*> strong, weak;
  for (const auto& a : agg.items) {
    if (!a.external_mean) continue;
    if (*a.external_mean >= cfg.strength_min) strong.push_back(&a);
    else if (*a.external_mean <= cfg.improvement_max) weak.push_back(&a);
  }
  std::stable_sort(strong.begin(), strong.end(),
                   [](auto* a, auto* b) { return *a->external_mean > *b->external_mean; });
  std::stable_sort(weak.begin(), weak.end(), [](auto* a, auto* b) { return *a->external_mean < *b->external_mean; });

  auto metric_for = [&](const ItemAggregate& a) -> std::optional<std::pair<std::string, double>> {
    const RubricItem* item = rubric.find(a.item_id);
    if (!item || !item->metric_link) return std::nullopt;
    auto it = metrics.find(*item->metric_link);
    if (it == metrics.end()) return std::nullopt;
    return std::make_pair(it->first, it->second);
  };
  auto fill = [&](std::string text, const ItemAggregate& a) {
    text = substitute(std::move(text), "title", a.title);
    text = substitute(std::move(text), "mean", mean_text(*a.external_mean));
    if (auto m = metric_for(a)) {
      text = substitute(std::move(text), "metric", describe_metric(m->first, m->second));
    }
    return text;
  };
  auto entry_template = [&](const std::string& id, const char* key) -> std::optional<std::string> {
    if (auto it = items.find(id); it != items.end() && it->contains(key)) {
      return (*it)[key].get<std::string>();
    }
    return std::nullopt;
  };

  for (const auto* a : strong) {
    std::string evidence = "{title}: mean score {mean} of 5";
    if (auto t = entry_template(a->item_id, "strength")) evidence = *t;
    f.strengths.push_back({a->item_id, fill(evidence, *a)});
  }
  for (const auto* a : weak) {
    const auto m = metric_for(*a);
    std::string evidence = m ? describe_metric(m->first, m->second) : "{title}: mean score {mean} of 5";
    if (auto t = entry_template(a->item_id, "improvement")) evidence = *t;
    f.improvements.push_back({a->item_id, fill(evidence, *a)});

    ActionEntry act;
    act.item_id = a->item_id;
    if (auto t = entry_template(a->item_id, "action")) {
      act.recommendation = fill(*t, *a);
    } else {
      f.warnings.push_back("TemplateMissing(" + a->item_id + ")");
      act.recommendation = fill(generic, *a);
    }
    if (m) {
      act.metric = m->first;
      act.metric_value = round6(m->second);
    }
    f.action_plan.push_back(std::move(act));
  }
  f.provenance = "template";
  return f;
}

}  // namespace

Json generation_request(const RubricAggregates& agg, const MetricMap& metrics, const Rubric& rubric) {
  Json items = Json::array();
  for (const auto& a : agg.items) {
    const RubricItem* ri = rubric.find(a.item_id);
    auto opt = [](const std::optional<double>& v) { return v ? Json(round6(*v)) : Json(nullptr); };
    Json item{{"item_id", a.item_id},
              {"title", a.title},
              {"external_mean", opt(a.external_mean)},
              {"professor_mean", opt(a.professor_mean)},
              {"peer_mean", opt(a.peer_mean)},
              {"self_score", opt(a.self_score)},
              {"comments", a.comments},
              {"metric_link", ri && ri->metric_link ? Json(*ri->metric_link) : Json(nullptr)}};
    if (ri) {
      item["levels"] = ri->levels;
    }
    items.push_back(std::move(item));
  }
  Json m = Json::object();
  for (const auto& [k, v] : metrics) {
    m[k] = round6(v);
  }
  return Json{{"contract_version", 1},
              {"rubric_version", rubric.version},
              {"items", items},
              {"metrics", m},
              {"sections", {"strengths", "improvements", "action_plan"}}};
}

std::optional<FeedbackSections> parse_generation_response(std::string_view response, const Rubric& rubric) {
  const Json j = Json::parse(response, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  for (const char* key : {"strengths", "improvements", "action_plan"}) {
    if (!j.contains(key) || !j[key].is_array()) return std::nullopt;
  }
  FeedbackSections f;
  f.provenance = "generated";
  auto read_entries = [&](const Json& arr, std::vector<FeedbackEntry>& out) {
    for (const auto& e : arr) {
      if (!e.is_object() || !e.contains("item_id") || !e["item_id"].is_string() || !e.contains("evidence") ||
          !e["evidence"].is_string() || !rubric.find(e["item_id"].get<std::string>())) {
        return false;
      }
      out.push_back({e["item_id"].get<std::string>(), e["evidence"].get<std::string>()});
    }
    return true;
  };
  if (!read_entries(j["strengths"], f.strengths) || !read_entries(j["improvements"], f.improvements)) {
    return std::nullopt;
  }
  for (const auto& e : j["action_plan"]) {
    if (!e.is_object() || !e.contains("item_id") || !e["item_id"].is_string() || !e.contains("recommendation") ||
        !e["recommendation"].is_string() || !rubric.find(e["item_id"].get<std::string>())) {
      return std::nullopt;
    }
    f.action_plan.push_back({e["item_id"].get<std::string>(), e["recommendation"].get<std::string>(), {}, {}});
  }
  std::set<std::string> strong, planned;
  for (const auto& s : f.strengths) strong.insert(s.item_id);
  for (const auto& a : f.action_plan) planned.insert(a.item_id);
  for (const auto& i : f.improvements) {
    if (strong.contains(i.item_id) || !planned.contains(i.item_id)) return std::nullopt;
  }
  return f;
}

FeedbackSections compose_feedback(const RubricAggregates& agg, const MetricMap& metrics, const Rubric& rubric,
                                  const Json& templates, TextGenerator* generator, const AssessmentConfig& cfg) {
  if (generator) {
    std::string failure;
    try {
      const std::string response = generator->generate(generation_request(agg, metrics, rubric).dump());
      if (auto f = parse_generation_response(response, rubric)) {
        for (auto& a : f->action_plan) {
          const RubricItem* item = rubric.find(a.item_id);
          if (item && item->metric_link) {
            if (auto it = metrics.find(*item->metric_link); it != metrics.end()) {
              a.metric = it->first;
              a.metric_value = round6(it->second);
            }
          }
        }
        return *f;
      }
      failure = "generator response failed validation";
    } catch (const std::exception& e) {
      failure = std::string("generator failed: ") + e.what();
    }
    auto f = template_feedback(agg, metrics, rubric, templates, cfg);
    f.warnings.insert(f.warnings.begin(), failure + "; template feedback used");
    return f;
  }
  return template_feedback(agg, metrics, rubric, templates, cfg);
}

Json default_templates() {
  return Json::parse(R"({
  "generic_action": "Review the level descriptions for {title} and rehearse with the next level as the target.",
  "items": {
    "attention_capture": {"action": "Open with a question, a striking figure or a short story before the agenda."},
    "clarity_opening": {"action": "State the goal of the talk and its outline within the first minute."},
    "eye_contact": {"improvement": "{metric}", "action": "Rehearse with the slides behind you and look at a different part of the room at each sentence ({metric})."},
    "body_language": {"action": "Keep an open stance with hands visible and avoid pacing between points."},
    "voice": {"action": "Vary pitch and pace on key messages and replace filler words with short pauses."},
    "structure": {"action": "Announce transitions between sections and keep one idea per slide."},
    "slides_design": {"action": "Use at least 18 pt fonts and keep slides under 40 words."},
    "conclusions": {"action": "Close with a summary of the three main points and a clear take-away."},
    "qa_handling": {"action": "Repeat each question before answering and keep answers short."}
  }
})");
}

}  // namespace mosaic::assessment
