#include "mosaic/ingest.hpp"

#include <charconv>
#include <map>
#include <cmath>
#include <set>

#include "mosaic/error.hpp"
#include "mosaic/util.hpp"

namespace mosaic::ingest {

std::string_view to_string(StreamKind kind) noexcept {
  switch (kind) {
    case StreamKind::heart_csv: return "heart_csv";
    case StreamKind::gaze_jsonl: return "gaze_jsonl";
    case StreamKind::landmarks_jsonl: return "landmarks_jsonl";
    case StreamKind::headpose_jsonl: return "headpose_jsonl";
    case StreamKind::transcript_jsonl: return "transcript_jsonl";
    case StreamKind::events_jsonl: return "events_jsonl";
    case StreamKind::annotations_jsonl: return "annotations_jsonl";
  }
  return "heart_csv";
}

std::optional<StreamKind> stream_kind_from_string(std::string_view text) noexcept {
  for (auto k : {StreamKind::heart_csv, StreamKind::gaze_jsonl, StreamKind::landmarks_jsonl,
                 StreamKind::headpose_jsonl, StreamKind::transcript_jsonl, StreamKind::events_jsonl,
                 StreamKind::annotations_jsonl}) {
    if (to_string(k) == text) {
      return k;
    }
  }
  return std::nullopt;
}

std::string_view to_string(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::click: return "click";
    case EventKind::keypress: return "keypress";
    case EventKind::item_focus: return "item_focus";
    case EventKind::item_blur: return "item_blur";
    case EventKind::item_rated: return "item_rated";
    case EventKind::comment_edit: return "comment_edit";
    case EventKind::slide_advance: return "slide_advance";
    case EventKind::slide_back: return "slide_back";
  }
  return "click";
}

std::optional<EventKind> event_kind_from_string(std::string_view text) noexcept {
  for (auto k : {EventKind::click, EventKind::keypress, EventKind::item_focus, EventKind::item_blur,
                 EventKind::item_rated, EventKind::comment_edit, EventKind::slide_advance,
                 EventKind::slide_back}) {
    if (to_string(k) == text) {
      return k;
    }
  }
  return std::nullopt;
}

namespace {

void require_clean(std::string_view bytes) {
  if (!is_clean_utf8(bytes)) {
    throw Error(Errc::encoding_error, "input must be UTF-8 without a byte-order mark");
  }
}

Json parse_json_line(std::string_view text, std::size_t line) {
  Json j = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    throw Error(Errc::schema_error, "invalid JSON", line, "");
  }
  if (!j.is_object()) {
    throw Error(Errc::schema_error, "record must be a JSON object", line, "");
  }
  return j;
}

Millis get_millis(const Json& j, const char* field, std::size_t line) {
  auto it = j.find(field);
  if (it == j.end() || !it->is_number_integer()) {
    throw Error(Errc::schema_error, "expected integer milliseconds", line, field);
  }
  return it->get<Millis>();
}

std::optional<Millis> get_optional_millis(const Json& j, const char* field, std::size_t line) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) {
    return std::nullopt;
  }
  if (!it->is_number_integer()) {
    throw Error(Errc::schema_error, "expected integer milliseconds", line, field);
  }
  return it->get<Millis>();
}

double get_real(const Json& j, const char* field, std::size_t line) {
  auto it = j.find(field);
  if (it == j.end() || !it->is_number()) {
    throw Error(Errc::schema_error, "expected number", line, field);
  }
  const double v = it->get<double>();
  if (!std::isfinite(v)) {
    throw Error(Errc::schema_error, "non-finite number", line, field);
  }
  return v;
}

std::string get_string(const Json& j, const char* field, std::size_t line) {
  auto it = j.find(field);
  if (it == j.end() || !it->is_string()) {
    throw Error(Errc::schema_error, "expected string", line, field);
  }
  return it->get<std::string>();
}

template <typename T, typename Fn>
std::vector<T> parse_jsonl(std::string_view bytes, ParseReport* report, Fn&& fn) {
  require_clean(bytes);
  std::vector<T> out;
  for (const auto& line : split_lines(bytes)) {
    if (trim(line.text).empty()) {
      // A blank line is not a record; it is rejected rather than skipped so
      // that line counts always equal record counts.
      throw Error(Errc::schema_error, "blank line", line.number, "");
    }
    out.push_back(fn(parse_json_line(line.text, line.number), line.number, report));
    if (report) {
      ++report->records;
    }
  }
  return out;
}

Json keypoint_json(const Keypoint& k) {
  return Json::array({k.x, k.y, k.confidence});
}

Json rotation_json(const HeadRotation& r) {
  if (const auto* m = std::get_if<Mat3>(&r)) {
    Json rows = Json::array();
    for (const auto& row : *m) {
      rows.push_back(Json::array({row[0], row[1], row[2]}));
    }
    return rows;
  }
  if (const auto* e = std::get_if<HeadPose>(&r)) {
    return Json{{"pitch", e->pitch}, {"yaw", e->yaw}, {"roll", e->roll}};
  }
  return nullptr;
}

template <typename T, typename Fn>
std::string write_jsonl(std::span<const T> records, Fn&& to_json) {
  std::string out;
  for (const auto& r : records) {
    out += to_json(r).dump();
    out += '\n';
  }
  return out;
}

}  // namespace

std::vector<HeartSample> parse_heart_csv(std::string_view bytes, ParseReport* report) {
  require_clean(bytes);
  const auto lines = split_lines(bytes);
  if (lines.empty() || trim(lines.front().text) != "ts_ms,bpm") {
    throw Error(Errc::schema_error, "missing header ts_ms,bpm", 1, "header");
  }
  std::vector<HeartSample> out;
  out.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    const std::string_view text = line.text;
    const auto comma = text.find(',');
    if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
      throw Error(Errc::schema_error, "expected two columns", line.number, "");
    }
    const std::string ts_text = trim(text.substr(0, comma));
    const std::string bpm_text = trim(text.substr(comma + 1));
    HeartSample s;
    {
      auto [p, ec] = std::from_chars(ts_text.data(), ts_text.data() + ts_text.size(), s.ts_ms);
      if (ec != std::errc{} || p != ts_text.data() + ts_text.size()) {
        throw Error(Errc::schema_error, "bad timestamp", line.number, "ts_ms");
      }
    }
    {
      auto [p, ec] = std::from_chars(bpm_text.data(), bpm_text.data() + bpm_text.size(), s.bpm);
      if (ec != std::errc{} || p != bpm_text.data() + bpm_text.size() || !std::isfinite(s.bpm)) {
        throw Error(Errc::schema_error, "bad bpm", line.number, "bpm");
      }
    }
    s.artifact = s.bpm < kMinPlausibleBpm || s.bpm > kMaxPlausibleBpm;
    if (report) {
      ++report->records;
      if (s.artifact) {
        ++report->artifacts;
      }
    }
    out.push_back(s);
  }
  return out;
}

std::vector<GazeSample> parse_gaze_jsonl(std::string_view bytes, ParseReport* report) {
  return parse_jsonl<GazeSample>(bytes, report, [](const Json& j, std::size_t line, ParseReport*) {
    GazeSample s;
    s.ts_ms = get_millis(j, "ts_ms", line);
    auto v = j.find("valid");
    if (v == j.end() || !v->is_boolean()) {
      throw Error(Errc::schema_error, "expected boolean", line, "valid");
    }
    s.valid = v->get<bool>();
    if (s.valid) {
      s.x = get_real(j, "x", line);
      if (s.x < 0.0 || s.x > 1.0) {
        throw Error(Errc::schema_error, "x outside [0,1]", line, "x");
      }
      s.y = get_real(j, "y", line);
      if (s.y < 0.0 || s.y > 1.0) {
        throw Error(Errc::schema_error, "y outside [0,1]", line, "y");
      }
    }
    return s;
  });
}

std::vector<LandmarkFrame> parse_landmarks_jsonl(std::string_view bytes, ParseReport* report) {
  return parse_jsonl<LandmarkFrame>(bytes, report, [](const Json& j, std::size_t line, ParseReport* rep) {
    LandmarkFrame f;
    f.ts_ms = get_millis(j, "ts_ms", line);
    auto joints = j.find("joints");
    if (joints == j.end() || !joints->is_object()) {
      throw Error(Errc::schema_error, "expected joints object", line, "joints");
    }
    for (const auto& [name, value] : joints->items()) {
      std::size_t idx = kJointCount;
      for (std::size_t k = 0; k < kJointCount; ++k) {
        if (kJointNames[k] == name) {
          idx = k;
          break;
        }
      }
      if (idx == kJointCount) {
        if (rep) {
          rep->warnings.push_back("line " + std::to_string(line) + ": ignoring extra joint " + name);
        }
        continue;
      }
      if (!value.is_array() || value.size() != 3 || !value[0].is_number() || !value[1].is_number() ||
          !value[2].is_number()) {
        throw Error(Errc::schema_error, "joint must be [x, y, confidence]", line, name);
      }
      Keypoint k{value[0].get<double>(), value[1].get<double>(), value[2].get<double>()};
      if (!std::isfinite(k.x) || !std::isfinite(k.y) || !(k.confidence >= 0.0 && k.confidence <= 1.0)) {
        throw Error(Errc::schema_error, "confidence outside [0,1] or non-finite coordinate", line, name);
      }
      f.joints[idx] = k;
    }
    return f;
  });
}

std::vector<HeadPoseFrame> parse_headpose_jsonl(std::string_view bytes, ParseReport* report) {
  return parse_jsonl<HeadPoseFrame>(bytes, report, [](const Json& j, std::size_t line, ParseReport*) {
    HeadPoseFrame f;
    f.ts_ms = get_millis(j, "ts_ms", line);
    auto r = j.find("rotation");
    if (r == j.end()) {
      throw Error(Errc::schema_error, "missing rotation", line, "rotation");
    }
    if (r->is_null()) {
      return f;
    }
    if (r->is_array()) {
      Mat3 m{};
      if (r->size() != 3) {
        throw Error(Errc::schema_error, "rotation matrix must be 3x3", line, "rotation");
      }
      for (std::size_t i = 0; i < 3; ++i) {
        const auto& row = (*r)[i];
        if (!row.is_array() || row.size() != 3) {
          throw Error(Errc::schema_error, "rotation matrix must be 3x3", line, "rotation");
        }
        for (std::size_t k = 0; k < 3; ++k) {
          if (!row[k].is_number()) {
            throw Error(Errc::schema_error, "rotation entries must be numbers", line, "rotation");
          }
          m[i][k] = row[k].get<double>();
        }
      }
      if (!is_rotation(m)) {
        throw Error(Errc::schema_error, "matrix is not a rotation", line, "rotation");
      }
      f.rotation = m;
      return f;
    }
    if (r->is_object()) {
      HeadPose p{get_real(*r, "pitch", line), get_real(*r, "yaw", line), get_real(*r, "roll", line)};
      if (p.pitch < -90.0 || p.pitch > 90.0) {
        throw Error(Errc::schema_error, "pitch outside [-90,90]", line, "pitch");
      }
      f.rotation = p;
      return f;
    }
    throw Error(Errc::schema_error, "rotation must be a matrix, Euler object or null", line, "rotation");
  });
}

std::vector<TranscriptWord> parse_transcript_jsonl(std::string_view bytes, ParseReport* report) {
  return parse_jsonl<TranscriptWord>(bytes, report, [](const Json& j, std::size_t line, ParseReport*) {
    TranscriptWord w;
    w.word = get_string(j, "word", line);
    w.start_ms = get_millis(j, "start_ms", line);
    w.end_ms = get_millis(j, "end_ms", line);
    if (w.end_ms < w.start_ms) {
      throw Error(Errc::schema_error, "end_ms before start_ms", line, "end_ms");
    }
    return w;
  });
}

InteractionEvent parse_event_record(std::string_view json_text, std::size_t line) {
  const Json j = parse_json_line(json_text, line);
  InteractionEvent e;
  e.ts_ms = get_millis(j, "ts_ms", line);
  e.actor_id = get_string(j, "actor_id", line);
  if (e.actor_id.empty()) {
    throw Error(Errc::schema_error, "empty actor_id", line, "actor_id");
  }
  const auto kind = event_kind_from_string(get_string(j, "kind", line));
  if (!kind) {
    throw Error(Errc::schema_error, "unknown event kind", line, "kind");
  }
  e.kind = *kind;
  if (auto it = j.find("item_id"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) {
      throw Error(Errc::schema_error, "expected string", line, "item_id");
    }
    e.item_id = it->get<std::string>();
  }
  if (auto it = j.find("value"); it != j.end() && !it->is_null()) {
    if (it->is_number_integer()) {
      e.value = it->get<std::int64_t>();
    } else if (it->is_string()) {
      e.value = it->get<std::string>();
    } else {
      throw Error(Errc::schema_error, "value must be integer or string", line, "value");
    }
  }
  e.client_ts_ms = get_optional_millis(j, "client_ts_ms", line);

  const bool slide = e.kind == EventKind::slide_advance || e.kind == EventKind::slide_back;
  if (slide && e.item_id) {
    throw Error(Errc::schema_error, "slide events carry no item_id", line, "item_id");
  }
  const bool item_scoped = e.kind == EventKind::item_focus || e.kind == EventKind::item_blur ||
                           e.kind == EventKind::item_rated || e.kind == EventKind::comment_edit;
  if (item_scoped && !e.item_id) {
    throw Error(Errc::schema_error, "item event without item_id", line, "item_id");
  }
  if (e.kind == EventKind::item_rated) {
    const auto* v = e.value ? std::get_if<std::int64_t>(&*e.value) : nullptr;
    if (!v || *v < 1 || *v > 5) {
      throw Error(Errc::schema_error, "item_rated needs integer value 1..5", line, "value");
    }
  }
  return e;
}

std::string write_event_record(const InteractionEvent& e) {
  Json j{{"ts_ms", e.ts_ms}, {"actor_id", e.actor_id}, {"kind", std::string(to_string(e.kind))}};
  if (e.item_id) {
    j["item_id"] = *e.item_id;
  }
  if (e.value) {
    std::visit([&](const auto& v) { j["value"] = v; }, *e.value);
  }
  if (e.client_ts_ms) {
    j["client_ts_ms"] = *e.client_ts_ms;
  }
  return j.dump();
}

std::vector<InteractionEvent> parse_events_jsonl(std::string_view bytes, ParseReport* report) {
  require_clean(bytes);
  std::vector<InteractionEvent> out;
  for (const auto& line : split_lines(bytes)) {
    out.push_back(parse_event_record(line.text, line.number));
    if (report) {
      ++report->records;
    }
  }
  return out;
}

Annotation parse_annotation_record(std::string_view json_text, std::size_t line) {
  const Json j = parse_json_line(json_text, line);
  Annotation a;
  a.id = get_string(j, "id", line);
  a.label = get_string(j, "label", line);
  if (a.label.empty()) {
    throw Error(Errc::schema_error, "empty label", line, "label");
  }
  const auto kind = annotation_kind_from_string(get_string(j, "kind", line));
  if (!kind) {
    throw Error(Errc::schema_error, "kind must be instant, start or end", line, "kind");
  }
  a.kind = *kind;
  a.ts_ms = get_millis(j, "ts_ms", line);
  a.source = get_string(j, "source", line);
  a.client_ts_ms = get_optional_millis(j, "client_ts_ms", line);
  return a;
}

std::string write_annotation_record(const Annotation& a) {
  Json j{{"id", a.id},
         {"label", a.label},
         {"kind", std::string(to_string(a.kind))},
         {"ts_ms", a.ts_ms},
         {"source", a.source}};
  if (a.client_ts_ms) {
    j["client_ts_ms"] = *a.client_ts_ms;
  }
  return j.dump();
}

std::vector<Annotation> parse_annotations_jsonl(std::string_view bytes, ParseReport* report) {
  require_clean(bytes);
  std::vector<Annotation> out;
  for (const auto& line : split_lines(bytes)) {
    out.push_back(parse_annotation_record(line.text, line.number));
    if (report) {
      ++report->records;
    }
  }
  return out;
}

StreamData parse_stream(StreamKind kind, std::string_view bytes, ParseReport* report) {
  switch (kind) {
    case StreamKind::heart_csv: return parse_heart_csv(bytes, report);
    case StreamKind::gaze_jsonl: return parse_gaze_jsonl(bytes, report);
    case StreamKind::landmarks_jsonl: return parse_landmarks_jsonl(bytes, report);
    case StreamKind::headpose_jsonl: return parse_headpose_jsonl(bytes, report);
    case StreamKind::transcript_jsonl: return parse_transcript_jsonl(bytes, report);
    case StreamKind::events_jsonl: return parse_events_jsonl(bytes, report);
    case StreamKind::annotations_jsonl: return parse_annotations_jsonl(bytes, report);
  }
  throw Error(Errc::invalid_argument, "unknown stream kind");
}

std::string write_heart_csv(std::span<const HeartSample> samples) {
  std::string out = "ts_ms,bpm\n";
  for (const auto& s : samples) {
    out += std::to_string(s.ts_ms);
    out += ',';
    out += format_number(s.bpm);
    out += '\n';
  }
  return out;
}

std::string write_gaze_jsonl(std::span<const GazeSample> samples) {
  return write_jsonl(samples, [](const GazeSample& s) {
    Json j{{"ts_ms", s.ts_ms}, {"valid", s.valid}};
    if (s.valid) {
      j["x"] = s.x;
      j["y"] = s.y;
    }
    return j;
  });
}

std::string write_landmarks_jsonl(std::span<const LandmarkFrame> frames) {
  return write_jsonl(frames, [](const LandmarkFrame& f) {
    Json joints = Json::object();
    for (std::size_t k = 0; k < kJointCount; ++k) {
      joints[std::string(kJointNames[k])] = keypoint_json(f.joints[k]);
    }
    return Json{{"ts_ms", f.ts_ms}, {"joints", std::move(joints)}};
  });
}

std::string write_headpose_jsonl(std::span<const HeadPoseFrame> frames) {
  return write_jsonl(frames, [](const HeadPoseFrame& f) {
    return Json{{"ts_ms", f.ts_ms}, {"rotation", rotation_json(f.rotation)}};
  });
}

std::string write_transcript_jsonl(std::span<const TranscriptWord> words) {
  return write_jsonl(words, [](const TranscriptWord& w) {
    return Json{{"word", w.word}, {"start_ms", w.start_ms}, {"end_ms", w.end_ms}};
  });
}

std::string write_events_jsonl(std::span<const InteractionEvent> events) {
  std::string out;
  for (const auto& e : events) {
    out += write_event_record(e);
    out += '\n';
  }
  return out;
}

std::string write_annotations_jsonl(std::span<const Annotation> annotations) {
  std::string out;
  for (const auto& a : annotations) {
    out += write_annotation_record(a);
    out += '\n';
  }
  return out;
}

std::string serialize_stream(const StreamData& data) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = typename std::decay_t<decltype(v)>::value_type;
        std::span<const T> s(v);
        if constexpr (std::is_same_v<T, HeartSample>) return write_heart_csv(s);
        else if constexpr (std::is_same_v<T, GazeSample>) return write_gaze_jsonl(s);
        else if constexpr (std::is_same_v<T, LandmarkFrame>) return write_landmarks_jsonl(s);
        else if constexpr (std::is_same_v<T, HeadPoseFrame>) return write_headpose_jsonl(s);
        else if constexpr (std::is_same_v<T, TranscriptWord>) return write_transcript_jsonl(s);
        else if constexpr (std::is_same_v<T, InteractionEvent>) return write_events_jsonl(s);
        else return write_annotations_jsonl(s);
      },
      data);
}

std::size_t stream_size(const StreamData& data) noexcept {
  return std::visit([](const auto& v) { return v.size(); }, data);
}

StreamKind kind_of(const StreamData& data) noexcept {
  constexpr StreamKind kinds[] = {StreamKind::heart_csv,        StreamKind::gaze_jsonl,
                                  StreamKind::landmarks_jsonl,  StreamKind::headpose_jsonl,
                                  StreamKind::transcript_jsonl, StreamKind::events_jsonl,
                                  StreamKind::annotations_jsonl};
  return kinds[data.index()];
}

Rubric parse_rubric(std::string_view bytes) {
  require_clean(bytes);
  const Json j = Json::parse(bytes, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(Errc::schema_error, "rubric is not a JSON object");
  }
  Rubric r;
  r.version = j.value("version", std::string("1"));
  auto items = j.find("items");
  if (items == j.end() || !items->is_array() || items->empty()) {
    throw Error(Errc::schema_error, "rubric needs a non-empty items array");
  }
  std::set<std::string> seen;
  for (const auto& it : *items) {
    RubricItem item;
    item.id = get_string(it, "id", 0);
    item.title = it.value("title", item.id);
    if (!seen.insert(item.id).second) {
      throw Error(Errc::schema_error, "duplicate rubric item " + item.id);
    }
    auto levels = it.find("levels");
    if (levels == it.end() || !levels->is_array() || levels->size() != 5) {
      throw Error(Errc::schema_error, "rubric item " + item.id + " needs exactly 5 level descriptions");
    }
    for (std::size_t k = 0; k < 5; ++k) {
      if (!(*levels)[k].is_string()) {
        throw Error(Errc::schema_error, "level descriptions must be strings");
      }
      item.levels[k] = (*levels)[k].get<std::string>();
    }
    if (auto p = it.find("phase"); p != it.end() && p->is_string()) {
      item.phase = p->get<std::string>();
    }
    if (auto m = it.find("metric_link"); m != it.end() && m->is_string()) {
      item.metric_link = m->get<std::string>();
    }
    r.items.push_back(std::move(item));
  }
  return r;
}

std::string write_rubric(const Rubric& r) {
  Json items = Json::array();
  for (const auto& i : r.items) {
    Json levels = Json::array();
    for (const auto& l : i.levels) {
      levels.push_back(l);
    }
    items.push_back(Json{{"id", i.id},
                         {"title", i.title},
                         {"levels", levels},
                         {"phase", i.phase ? Json(*i.phase) : Json(nullptr)},
                         {"metric_link", i.metric_link ? Json(*i.metric_link) : Json(nullptr)}});
  }
  return Json{{"version", r.version}, {"items", items}}.dump(2) + "\n";
}

Evaluation parse_evaluation(std::string_view bytes, const Rubric& rubric) {
  require_clean(bytes);
  const Json j = Json::parse(bytes, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(Errc::schema_error, "evaluation is not a JSON object");
  }
  Evaluation ev;
  ev.evaluator_id = get_string(j, "evaluator_id", 0);
  const auto role = role_from_string(get_string(j, "role", 0));
  if (!role) {
    throw Error(Errc::schema_error, "role must be professor, peer or self", 0, "role");
  }
  ev.role = *role;
  ev.session_id = j.value("session_id", std::string());
  if (auto v = j.find("version"); v != j.end() && v->is_number_integer()) {
    ev.version = v->get<int>();
  }
  auto items = j.find("items");
  if (items == j.end() || !items->is_array()) {
    throw Error(Errc::schema_error, "evaluation needs an items array", 0, "items");
  }
  std::map<std::string, ItemScore> by_id;
  for (const auto& it : *items) {
    if (!it.is_object()) {
      throw Error(Errc::schema_error, "item must be an object", 0, "items");
    }
    ItemScore s;
    s.item_id = get_string(it, "item_id", 0);
    if (!rubric.find(s.item_id)) {
      throw Error(Errc::schema_error, "item " + s.item_id + " is not in the rubric", 0, "item_id");
    }
    auto score = it.find("score");
    if (score == it.end() || !score->is_number()) {
      throw Error(Errc::schema_error, "item " + s.item_id + " has no numeric score", 0, "score");
    }
    const double raw = score->get<double>();
    if (!score->is_number_integer() || raw < 1.0 || raw > 5.0) {
      throw Error(Errc::score_out_of_range, s.item_id);
    }
    s.score = score->get<int>();
    if (auto c = it.find("comment"); c != it.end() && c->is_string()) {
      s.comment = c->get<std::string>();
    }
    if (!by_id.emplace(s.item_id, s).second) {
      throw Error(Errc::schema_error, "item " + s.item_id + " appears twice", 0, "item_id");
    }
  }
  for (const auto& item : rubric.items) {
    auto found = by_id.find(item.id);
    if (found == by_id.end()) {
      throw Error(Errc::missing_item, item.id);
    }
    if (trim(found->second.comment).empty()) {
      ev.empty_comment_items.push_back(item.id);
    }
    ev.items.push_back(found->second);
  }
  return ev;
}

std::string write_evaluation(const Evaluation& ev) {
  Json items = Json::array();
  for (const auto& s : ev.items) {
    items.push_back(Json{{"item_id", s.item_id}, {"score", s.score}, {"comment", s.comment}});
  }
  return Json{{"evaluator_id", ev.evaluator_id},
              {"role", std::string(to_string(ev.role))},
              {"session_id", ev.session_id},
              {"version", ev.version},
              {"items", items}}
             .dump(2) +
         "\n";
}

}  // namespace mosaic::ingest
