#include "mosaic/core.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "mosaic/error.hpp"

namespace mosaic::core {

namespace {

constexpr int kDescriptorSchemaVersion = 1;
constexpr Millis kAnnotationGraceMs = 60000;

std::string require_string(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw Error(Errc::schema_error, std::string("session.json: expected string field ") + key, 0, key);
  }
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    return std::nullopt;
  }
  if (!it->is_string()) {
    throw Error(Errc::schema_error, std::string("session.json: expected string field ") + key, 0, key);
  }
  return it->get<std::string>();
}

template <typename T>
bool has_decrease(const std::vector<T>& v, auto key) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (key(v[i]) < key(v[i - 1])) {
      return true;
    }
  }
  return false;
}

}  // namespace

Session parse_session_descriptor(std::string_view json_text) {
  const Json j = Json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(Errc::schema_error, "session.json is not a JSON object");
  }
  Session s;
  s.id = require_string(j, "id");
  s.presenter_id = require_string(j, "presenter_id");
  for (const auto& e : j.value("evaluators", Json::array())) {
    const auto role = role_from_string(e.value("role", std::string()));
    if (!role) {
      throw Error(Errc::schema_error, "session.json: evaluator role must be professor, peer or self", 0, "role");
    }
    s.evaluators.push_back({require_string(e, "id"), *role});
  }
  for (const auto& o : j.value("observers", Json::array())) {
    s.observer_ids.push_back(o.get<std::string>());
  }
  s.planned_duration_ms = j.value("planned_duration_ms", Millis{0});
  s.planned_qa_ms = j.value("planned_qa_ms", Millis{0});
  if (s.planned_duration_ms <= 0) {
    throw Error(Errc::schema_error, "planned_duration_ms must be positive", 0, "planned_duration_ms");
  }
  if (s.planned_qa_ms < 0) {
    throw Error(Errc::schema_error, "planned_qa_ms must be non-negative", 0, "planned_qa_ms");
  }
  s.slide_count = j.value("slide_count", 0);
  const Json sync_map = j.value("sync_map", Json::object());
  for (const auto& [id, offset] : sync_map.items()) {
    if (!offset.is_number_integer()) {
      throw Error(Errc::schema_error, "sync_map offsets are integer milliseconds", 0, id);
    }
    s.sync_map[id] = offset.get<Millis>();
  }
  for (const auto& st : j.value("streams", Json::array())) {
    StreamRef ref;
    ref.id = require_string(st, "id");
    const auto kind = ingest::stream_kind_from_string(require_string(st, "kind"));
    if (!kind) {
      throw Error(Errc::schema_error, "session.json: unknown stream kind for " + ref.id, 0, "kind");
    }
    ref.kind = *kind;
    ref.path = require_string(st, "path");
    ref.subject = st.value("subject", std::string());
    s.streams.push_back(std::move(ref));
  }
  if (auto a = j.find("audio"); a != j.end() && a->is_object()) {
    s.audio = MediaRef{require_string(*a, "id"), require_string(*a, "path")};
  }
  s.deck_path = optional_string(j, "deck");
  s.rubric_path = optional_string(j, "rubric");
  s.templates_path = optional_string(j, "templates");
  for (const auto& l : j.value("annotation_labels", Json::array())) {
    s.annotation_labels.push_back(l.get<std::string>());
  }
  s.aoi_config = j.value("aoi_config", Json::array());
  s.cone_map = j.value("cone_map", Json::object());
  s.thresholds = j.value("thresholds", Json::object());
  return s;
}

std::string write_session_descriptor(const Session& s) {
  Json evaluators = Json::array();
  for (const auto& e : s.evaluators) {
    evaluators.push_back(Json{{"id", e.id}, {"role", std::string(to_string(e.role))}});
  }
  Json streams = Json::array();
  for (const auto& st : s.streams) {
    streams.push_back(Json{{"id", st.id},
                           {"kind", std::string(ingest::to_string(st.kind))},
                           {"path", st.path},
                           {"subject", st.subject}});
  }
  Json sync = Json::object();
  for (const auto& [id, off] : s.sync_map) {
    sync[id] = off;
  }
  Json j{{"schema_version", kDescriptorSchemaVersion},
         {"id", s.id},
         {"presenter_id", s.presenter_id},
         {"evaluators", evaluators},
         {"observers", s.observer_ids},
         {"planned_duration_ms", s.planned_duration_ms},
         {"planned_qa_ms", s.planned_qa_ms},
         {"slide_count", s.slide_count},
         {"sync_map", sync},
         {"streams", streams},
         {"audio", s.audio ? Json{{"id", s.audio->id}, {"path", s.audio->path}} : Json(nullptr)},
         {"deck", s.deck_path ? Json(*s.deck_path) : Json(nullptr)},
         {"rubric", s.rubric_path ? Json(*s.rubric_path) : Json(nullptr)},
         {"templates", s.templates_path ? Json(*s.templates_path) : Json(nullptr)},
         {"annotation_labels", s.annotation_labels},
         {"aoi_config", s.aoi_config},
         {"cone_map", s.cone_map},
         {"thresholds", s.thresholds}};
  return j.dump(2) + "\n";
}

Millis to_session_time(std::string_view stream_id, Millis raw_ts_ms, const SyncMap& sync_map) {
  auto it = sync_map.find(stream_id);
  if (it == sync_map.end()) {
    throw Error(Errc::unknown_stream, std::string(stream_id));
  }
  return raw_ts_ms + it->second;
}

std::string_view to_string(PhaseName name) noexcept {
  switch (name) {
    case PhaseName::opening: return "opening";
    case PhaseName::body: return "body";
    case PhaseName::conclusion: return "conclusion";
    case PhaseName::qa: return "qa";
    case PhaseName::other: return "other";
  }
  return "other";
}

std::optional<PhaseName> phase_name_from_string(std::string_view text) noexcept {
  for (auto p : {PhaseName::opening, PhaseName::body, PhaseName::conclusion, PhaseName::qa, PhaseName::other}) {
    if (to_string(p) == text) {
      return p;
    }
  }
  return std::nullopt;
}

PhaseSchedule build_phase_schedule(std::span<const Annotation> annotations, const PhaseFallback& fallback) {
  constexpr std::string_view kPrefix = "phase:";
  std::vector<const Annotation*> markers;
  for (const auto& a : annotations) {
    if (a.label.starts_with(kPrefix) && a.kind != AnnotationKind::instant) {
      markers.push_back(&a);
    }
  }
  PhaseSchedule out;
  if (markers.empty()) {
    const Millis talk = fallback.planned_duration_ms;
    const Millis opening_end = std::llround(static_cast<double>(talk) * fallback.opening_share);
    const Millis body_end =
        std::llround(static_cast<double>(talk) * (fallback.opening_share + fallback.body_share));
    const Millis conclusion_end = std::llround(
        static_cast<double>(talk) * (fallback.opening_share + fallback.body_share + fallback.conclusion_share));
    const Phase candidates[] = {{PhaseName::opening, 0, opening_end},
                                {PhaseName::body, opening_end, body_end},
                                {PhaseName::conclusion, body_end, conclusion_end},
                                {PhaseName::qa, conclusion_end, conclusion_end + fallback.planned_qa_ms}};
    for (const auto& p : candidates) {
      if (p.end_ms > p.start_ms) {
        out.push_back(p);
      }
    }
    return out;
  }

  std::stable_sort(markers.begin(), markers.end(),
                   [](const Annotation* a, const Annotation* b) { return a->ts_ms < b->ts_ms; });
  std::map<std::string, Millis, std::less<>> open;
  for (const Annotation* m : markers) {
    if (m->kind == AnnotationKind::start) {
      if (!open.emplace(m->label, m->ts_ms).second) {
        throw Error(Errc::unpaired_phase_marker, m->label);
      }
      continue;
    }
    auto it = open.find(m->label);
    if (it == open.end()) {
      throw Error(Errc::unpaired_phase_marker, m->label);
    }
    const auto name = phase_name_from_string(std::string_view(m->label).substr(kPrefix.size()))
                          .value_or(PhaseName::other);
    if (m->ts_ms > it->second) {
      out.push_back({name, it->second, m->ts_ms});
    }
    open.erase(it);
  }
  if (!open.empty()) {
    throw Error(Errc::unpaired_phase_marker, open.begin()->first);
  }
  std::stable_sort(out.begin(), out.end(), [](const Phase& a, const Phase& b) {
    return a.start_ms < b.start_ms || (a.start_ms == b.start_ms && a.end_ms < b.end_ms);
  });
  // Overlapping annotated intervals: the earlier phase keeps the overlap.
  PhaseSchedule clean;
  for (auto p : out) {
    if (!clean.empty()) {
      p.start_ms = std::max(p.start_ms, clean.back().end_ms);
    }
    if (p.end_ms > p.start_ms) {
      clean.push_back(p);
    }
  }
  return clean;
}

const Phase* find_phase(const PhaseSchedule& schedule, std::string_view name) noexcept {
  for (const auto& p : schedule) {
    if (to_string(p.name) == name) {
      return &p;
    }
  }
  return nullptr;
}

const Phase* phase_at(const PhaseSchedule& schedule, Millis ts_ms) noexcept {
  for (const auto& p : schedule) {
    if (ts_ms >= p.start_ms && ts_ms < p.end_ms) {
      return &p;
    }
  }
  return nullptr;
}

std::vector<const LoadedStream*> SessionContext::streams_of(ingest::StreamKind kind) const {
  std::vector<const LoadedStream*> out;
  for (const auto& s : streams) {
    if (s.ref.kind == kind) {
      out.push_back(&s);
    }
  }
  return out;
}

std::vector<Annotation> SessionContext::annotations() const {
  std::vector<Annotation> out;
  for (const auto* s : streams_of(ingest::StreamKind::annotations_jsonl)) {
    const auto& v = std::get<std::vector<Annotation>>(s->data);
    out.insert(out.end(), v.begin(), v.end());
  }
  std::stable_sort(out.begin(), out.end(), [](const Annotation& a, const Annotation& b) { return a.ts_ms < b.ts_ms; });
  return out;
}

std::vector<ingest::InteractionEvent> SessionContext::events() const {
  std::vector<ingest::InteractionEvent> out;
  for (const auto* s : streams_of(ingest::StreamKind::events_jsonl)) {
    const auto& v = std::get<std::vector<ingest::InteractionEvent>>(s->data);
    out.insert(out.end(), v.begin(), v.end());
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ingest::InteractionEvent& a, const ingest::InteractionEvent& b) { return a.ts_ms < b.ts_ms; });
  return out;
}

std::vector<ingest::TranscriptWord> SessionContext::transcript() const {
  std::vector<ingest::TranscriptWord> out;
  for (const auto* s : streams_of(ingest::StreamKind::transcript_jsonl)) {
    const auto& v = std::get<std::vector<ingest::TranscriptWord>>(s->data);
    out.insert(out.end(), v.begin(), v.end());
  }
  std::stable_sort(out.begin(), out.end(), [](const ingest::TranscriptWord& a, const ingest::TranscriptWord& b) {
    return a.start_ms < b.start_ms;
  });
  return out;
}

PhaseSchedule SessionContext::phases() const {
  PhaseFallback fb;
  fb.planned_duration_ms = session.planned_duration_ms;
  fb.planned_qa_ms = session.planned_qa_ms;
  return build_phase_schedule(annotations(), fb);
}

namespace {

// Shifts every timestamp by offset and enforces (or repairs) ordering.
struct Normalizer {
  const StreamRef& ref;
  Millis offset;
  bool sort_repair;
  std::vector<std::string>& warnings;

  template <typename T, typename Get, typename Shift>
  void apply(std::vector<T>& v, Get key, Shift shift) {
    for (auto& x : v) {
      shift(x, offset);
    }
    if (has_decrease(v, key)) {
      if (!sort_repair) {
        throw Error(Errc::non_monotonic_timestamps, ref.id);
      }
      std::stable_sort(v.begin(), v.end(), [&](const T& a, const T& b) { return key(a) < key(b); });
      warnings.push_back("stream " + ref.id + ": timestamps were out of order and have been sorted");
    }
  }

  void operator()(std::vector<ingest::HeartSample>& v) {
    apply(v, [](const auto& s) { return s.ts_ms; }, [](auto& s, Millis o) { s.ts_ms += o; });
  }
  void operator()(std::vector<ingest::GazeSample>& v) {
    apply(v, [](const auto& s) { return s.ts_ms; }, [](auto& s, Millis o) { s.ts_ms += o; });
  }
  void operator()(std::vector<ingest::LandmarkFrame>& v) {
    apply(v, [](const auto& s) { return s.ts_ms; }, [](auto& s, Millis o) { s.ts_ms += o; });
  }
  void operator()(std::vector<ingest::HeadPoseFrame>& v) {
    apply(v, [](const auto& s) { return s.ts_ms; }, [](auto& s, Millis o) { s.ts_ms += o; });
  }
  void operator()(std::vector<ingest::InteractionEvent>& v) {
    apply(v, [](const auto& s) { return s.ts_ms; }, [](auto& s, Millis o) { s.ts_ms += o; });
  }
  void operator()(std::vector<Annotation>& v) {
    apply(v, [](const auto& s) { return s.ts_ms; }, [](auto& s, Millis o) { s.ts_ms += o; });
  }
  void operator()(std::vector<ingest::TranscriptWord>& v) {
    apply(v, [](const auto& w) { return w.start_ms; },
          [](auto& w, Millis o) {
            w.start_ms += o;
            w.end_ms += o;
          });
  }
};

std::string read_bundle_file(const std::filesystem::path& root, const std::string& rel) {
  const auto path = root / rel;
  if (!std::filesystem::is_regular_file(path)) {
    throw Error(Errc::missing_stream_file, rel);
  }
  return read_file(path);
}

void check_roles(const Session& s, bool strict, std::vector<std::string>& warnings) {
  const auto professors = std::count_if(s.evaluators.begin(), s.evaluators.end(),
                                        [](const EvaluatorRef& e) { return e.role == Role::professor; });
  const auto peers = std::count_if(s.evaluators.begin(), s.evaluators.end(),
                                   [](const EvaluatorRef& e) { return e.role == Role::peer; });
  if (professors >= 1 && peers >= 2) {
    return;
  }
  const std::string msg = "expected at least 1 professor and 2 peer evaluators, found " +
                          std::to_string(professors) + " and " + std::to_string(peers);
  if (strict) {
    throw Error(Errc::role_requirement, msg);
  }
  warnings.push_back(msg);
}

}  // namespace

SessionContext load_bundle(const std::filesystem::path& root, const LoadOptions& options) {
  const auto descriptor = root / "session.json";
  if (!std::filesystem::is_regular_file(descriptor)) {
    throw Error(Errc::missing_descriptor, descriptor.string());
  }
  SessionContext ctx;
  ctx.root = root;
  ctx.session = parse_session_descriptor(read_file(descriptor));
  const Session& s = ctx.session;
  check_roles(s, options.strict_roles, ctx.warnings);

  for (const auto& ref : s.streams) {
    if (!s.sync_map.contains(ref.id)) {
      throw Error(Errc::unknown_stream, ref.id + " has no sync_map entry");
    }
    const std::string bytes = read_bundle_file(root, ref.path);
    ingest::ParseReport report;
    ingest::StreamData data;
    try {
      data = ingest::parse_stream(ref.kind, bytes, &report);
    } catch (const Error& e) {
      if (e.code() == Errc::schema_error || e.code() == Errc::encoding_error) {
        throw Error(Errc::stream_parse_error, ref.path + ": " + e.detail(), e.line().value_or(0), e.field());
      }
      throw;
    }
    for (auto& w : report.warnings) {
      ctx.warnings.push_back(ref.id + ": " + w);
    }
    if (report.artifacts > 0) {
      ctx.warnings.push_back(ref.id + ": " + std::to_string(report.artifacts) + " artifact samples flagged");
    }
    std::visit(Normalizer{ref, s.sync_map.at(ref.id), options.sort_repair, ctx.warnings}, data);
    if (const auto* ann = std::get_if<std::vector<Annotation>>(&data)) {
      for (const auto& a : *ann) {
        if (a.ts_ms < 0 || a.ts_ms > s.span_ms() + kAnnotationGraceMs) {
          throw Error(Errc::stream_parse_error, ref.path + ": annotation " + a.id + " outside session span");
        }
      }
    }
    ctx.streams.push_back({ref, std::move(data)});
  }

  if (s.audio) {
    if (!s.sync_map.contains(s.audio->id)) {
      throw Error(Errc::unknown_stream, s.audio->id + " has no sync_map entry");
    }
    ctx.audio = speech::read_wav(read_bundle_file(root, s.audio->path));
    ctx.audio_offset_ms = s.sync_map.at(s.audio->id);
  }
  if (s.deck_path) {
    ctx.deck_bytes = read_bundle_file(root, *s.deck_path);
  }
  if (s.templates_path) {
    const Json t = Json::parse(read_bundle_file(root, *s.templates_path), nullptr, false);
    if (t.is_discarded() || !t.is_object()) {
      throw Error(Errc::schema_error, *s.templates_path + " is not a JSON object");
    }
    ctx.templates = t;
  }
  if (s.rubric_path) {
    ctx.rubric = ingest::parse_rubric(read_bundle_file(root, *s.rubric_path));
  }

  const auto eval_dir = root / "evaluations";
  if (std::filesystem::is_directory(eval_dir)) {
    if (!ctx.rubric) {
      throw Error(Errc::schema_error, "evaluations present but the descriptor names no rubric");
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(eval_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      auto ev = ingest::parse_evaluation(read_file(f), *ctx.rubric);
      if (!ev.empty_comment_items.empty()) {
        ctx.warnings.push_back(f.filename().string() + ": " + std::to_string(ev.empty_comment_items.size()) +
                               " items without comments");
      }
      ctx.evaluations.push_back(std::move(ev));
    }
  }
  // Validates the phase markers up front.
  (void)ctx.phases();
  return ctx;
}

}  // namespace mosaic::core
