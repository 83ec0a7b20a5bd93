#include "mosaic/capture.hpp"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "mosaic/core.hpp"
#include "mosaic/error.hpp"
#include "mosaic/ingest.hpp"

namespace mosaic::capture {

namespace fs = std::filesystem;
using ingest::InteractionEvent;

std::vector<std::string> parse_labels(std::string_view text) {
  std::vector<std::string> out;
  const Json j = Json::parse(text, nullptr, false);
  if (!j.is_discarded()) {
    if (!j.is_array()) throw Error(Errc::schema_error, "labels must be a JSON array of strings");
    for (const auto& l : j) {
      if (!l.is_string() || l.get<std::string>().empty()) throw Error(Errc::schema_error, "labels must be non-empty strings");
      out.push_back(l.get<std::string>());
    }
    return out;
  }
  for (const auto& line : split_lines(text)) {
    auto t = trim(line.text);
    if (!t.empty() && t.front() != '#') out.push_back(std::move(t));
  }
  return out;
}

namespace {

bool safe_id(std::string_view id) {
  return !id.empty() && id.size() <= 64 && std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  }) && id.front() != '.';
}

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void fail(httplib::Response& res, int status, std::string_view error, std::string_view detail) {
  reply(res, status, Json{{"error", error}, {"detail", detail}});
}

void append_line(const fs::path& path, const std::string& line) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  out << line << '\n';
  out.flush();
  if (!out) throw Error(Errc::io_error, "cannot append to " + path.string());
}

void replace_file(const fs::path& path, const std::string& bytes) {
  const fs::path tmp = path.string() + ".tmp";
  write_file(tmp, bytes);
  fs::rename(tmp, path);
}

}  // namespace

struct CaptureServer::Impl {
  CaptureConfig cfg;
  httplib::Server server;
  std::thread thread;
  int bound_port = 0;

  std::mutex mutex;
  std::optional<Millis> started;
  core::Session session;
  std::set<std::pair<std::string, std::string>> open_intervals;  // (label, source)
  std::size_t annotation_count = 0;
  std::map<std::string, Millis> last_event_ts;
  std::map<std::string, int> versions;

  explicit Impl(CaptureConfig c) : cfg(std::move(c)) {
    if (!cfg.clock) {
      cfg.clock = [] {
        return static_cast<Millis>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                       std::chrono::steady_clock::now().time_since_epoch())
                                       .count());
      };
    }
    routes();
  }

  Millis now() { return cfg.clock() - *started; }

  void write_descriptor() { replace_file(cfg.out_dir / "session.json", core::write_session_descriptor(session)); }

  bool label_ok(const std::string& label) const {
    return label.starts_with("phase:") || std::find(cfg.labels.begin(), cfg.labels.end(), label) != cfg.labels.end();
  }

  void ensure_event_stream(const std::string& actor) {
    const std::string id = "events_" + actor;
    if (session.sync_map.contains(id)) return;
    const std::string path = "events/" + actor + ".jsonl";
    write_file(cfg.out_dir / path, "");
    session.streams.push_back({id, ingest::StreamKind::events_jsonl, path, actor});
    session.sync_map[id] = 0;
    write_descriptor();
  }

  void start_session(const Json& body) {
    session = {};
    session.id = body.value("session_id", cfg.session_id);
    session.presenter_id = body.value("presenter_id", cfg.presenter_id);
    session.planned_duration_ms = body.value("planned_duration_ms", cfg.planned_duration_ms);
    session.planned_qa_ms = body.value("planned_qa_ms", cfg.planned_qa_ms);
    session.annotation_labels = cfg.labels;
    session.rubric_path = "rubric.json";
    session.streams.push_back({"annotations", ingest::StreamKind::annotations_jsonl, "annotations.jsonl", ""});
    session.sync_map["annotations"] = 0;
    fs::create_directories(cfg.out_dir / "events");
    fs::create_directories(cfg.out_dir / "evaluations");
    write_file(cfg.out_dir / "rubric.json", ingest::write_rubric(cfg.rubric));
    write_file(cfg.out_dir / "annotations.jsonl", "");
    write_descriptor();
    started = cfg.clock();
  }

  void routes() {
    server.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
      if (cfg.token && req.path.starts_with("/api/") && req.get_param_value("token") != *cfg.token) {
        fail(res, 401, "Unauthorized", "missing or wrong session token");
        return httplib::Server::HandlerResponse::Handled;
      }
      return httplib::Server::HandlerResponse::Unhandled;
    });
    if (cfg.static_dir) {
      server.set_mount_point("/", cfg.static_dir->string());
    } else {
      server.Get("/", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("<!doctype html><title>mosaic capture</title><p>capture service running</p>\n", "text/html");
      });
    }

    server.Post("/api/v1/session/start", [this](const httplib::Request& req, httplib::Response& res) {
      const Json body = req.body.empty() ? Json::object() : Json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.is_object()) return fail(res, 422, "SchemaError", "body must be a JSON object");
      std::lock_guard lock(mutex);
      if (started) return fail(res, 409, "AlreadyStarted", "session already started");
      try {
        start_session(body);
      } catch (const std::exception& e) {
        return fail(res, 422, "SchemaError", e.what());
      }
      reply(res, 200, Json{{"session_id", session.id}, {"started", true}});
    });

    server.Get("/api/v1/session", [this](const httplib::Request&, httplib::Response& res) {
      std::lock_guard lock(mutex);
      if (!started) return fail(res, 503, "NotStarted", "session not started");
      reply(res, 200, Json::parse(core::write_session_descriptor(session)));
    });

    server.Get("/api/v1/rubric", [this](const httplib::Request&, httplib::Response& res) {
      std::lock_guard lock(mutex);
      if (!started) return fail(res, 503, "NotStarted", "session not started");
      reply(res, 200, Json::parse(ingest::write_rubric(cfg.rubric)));
    });

    server.Post("/api/v1/annotations", [this](const httplib::Request& req, httplib::Response& res) {
      const Json body = Json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.is_object()) return fail(res, 422, "SchemaError", "body must be a JSON object");
      std::lock_guard lock(mutex);
      if (!started) return fail(res, 503, "NotStarted", "session not started");
      Annotation a;
      try {
        Json rec = body;
        rec["id"] = "pending";
        rec["ts_ms"] = 0;
        if (!rec.contains("kind")) rec["kind"] = "instant";
        a = ingest::parse_annotation_record(rec.dump());
      } catch (const Error& e) {
        return fail(res, 422, errc_name(e.code()), e.what());
      }
      if (!label_ok(a.label)) return fail(res, 422, "UnknownLabel", a.label);
      if (!safe_id(a.source)) return fail(res, 422, "SchemaError", "source must be a plain identifier");
      const auto key = std::make_pair(a.label, a.source);
      if (a.kind == AnnotationKind::end && !open_intervals.contains(key)) {
        return fail(res, 409, "UnpairedInterval", "end without start for " + a.label);
      }
      if (a.kind == AnnotationKind::start && open_intervals.contains(key)) {
        return fail(res, 409, "UnpairedInterval", a.label + " already started");
      }
      a.ts_ms = now();
      char id[24];
      std::snprintf(id, sizeof id, "a%04zu", annotation_count + 1);
      a.id = id;
      try {
        append_line(cfg.out_dir / "annotations.jsonl", ingest::write_annotation_record(a));
      } catch (const Error& e) {
        return fail(res, 500, errc_name(e.code()), e.what());
      }
      ++annotation_count;
      if (a.kind == AnnotationKind::start) open_intervals.insert(key);
      if (a.kind == AnnotationKind::end) open_intervals.erase(key);
      auto& obs = session.observer_ids;
      if (std::find(obs.begin(), obs.end(), a.source) == obs.end()) {
        obs.push_back(a.source);
        write_descriptor();
      }
      reply(res, 201, Json{{"id", a.id}, {"ts_ms", a.ts_ms}});
    });

    server.Post("/api/v1/events", [this](const httplib::Request& req, httplib::Response& res) {
      const Json body = Json::parse(req.body, nullptr, false);
      if (body.is_discarded()) return fail(res, 422, "SchemaError", "body is not JSON");
      Json events;
      std::optional<Millis> sent;
      if (body.is_array()) {
        events = body;
      } else if (body.is_object() && body.contains("events") && body["events"].is_array()) {
        events = body["events"];
        if (auto it = body.find("sent_client_ts_ms"); it != body.end()) {
          if (!it->is_number_integer()) return fail(res, 422, "SchemaError", "sent_client_ts_ms must be an integer");
          sent = it->get<Millis>();
        }
      } else {
        return fail(res, 422, "SchemaError", "expected an array of events or {events: [...]}");
      }
      std::lock_guard lock(mutex);
      if (!started) return fail(res, 503, "NotStarted", "session not started");
      const Millis received = now();
      std::map<std::string, Millis> last = last_event_ts;
      std::vector<InteractionEvent> parsed;
      for (std::size_t i = 0; i < events.size(); ++i) {
        try {
          Json rec = events[i];
          if (!rec.is_object()) throw Error(Errc::schema_error, "event is not an object");
          Millis ts = received;
          if (sent && rec.contains("client_ts_ms") && rec["client_ts_ms"].is_number_integer()) {
            ts = std::min(received, received - (*sent - rec["client_ts_ms"].get<Millis>()));
          }
          rec["ts_ms"] = 0;
          auto e = ingest::parse_event_record(rec.dump(), i + 1);
          if (!safe_id(e.actor_id)) throw Error(Errc::schema_error, "actor_id must be a plain identifier");
          auto [it, fresh] = last.try_emplace(e.actor_id, 0);
          e.ts_ms = std::max({ts, it->second, Millis{0}});
          it->second = e.ts_ms;
          parsed.push_back(std::move(e));
        } catch (const Error& e) {
          return reply(res, 422, Json{{"error", errc_name(e.code())}, {"detail", e.what()}, {"index", i}});
        }
      }
      try {
        for (const auto& e : parsed) {
          ensure_event_stream(e.actor_id);
          append_line(cfg.out_dir / ("events/" + e.actor_id + ".jsonl"), ingest::write_event_record(e));
        }
      } catch (const Error& e) {
        return fail(res, 500, errc_name(e.code()), e.what());
      }
      last_event_ts = std::move(last);
      reply(res, 202, Json{{"accepted", parsed.size()}});
    });

    server.Post("/api/v1/evaluations", [this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(mutex);
      if (!started) return fail(res, 503, "NotStarted", "session not started");
      Evaluation ev;
      try {
        ev = ingest::parse_evaluation(req.body, cfg.rubric);
      } catch (const Error& e) {
        return fail(res, 422, errc_name(e.code()), e.what());
      }
      if (!safe_id(ev.evaluator_id)) return fail(res, 422, "SchemaError", "evaluator_id must be a plain identifier");
      ev.session_id = session.id;
      ev.version = ++versions[ev.evaluator_id];
      try {
        replace_file(cfg.out_dir / "evaluations" / (ev.evaluator_id + ".json"), ingest::write_evaluation(ev));
        auto& evs = session.evaluators;
        auto it = std::find_if(evs.begin(), evs.end(), [&](const auto& r) { return r.id == ev.evaluator_id; });
        if (it == evs.end()) {
          evs.push_back({ev.evaluator_id, ev.role});
          write_descriptor();
        } else if (it->role != ev.role) {
          it->role = ev.role;
          write_descriptor();
        }
      } catch (const std::exception& e) {
        return fail(res, 500, "IoError", e.what());
      }
      reply(res, 201, Json{{"evaluator_id", ev.evaluator_id}, {"version", ev.version}});
    });
  }
};

CaptureServer::CaptureServer(CaptureConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

CaptureServer::~CaptureServer() { stop(); }

int CaptureServer::start(const std::string& host, int port) {
  fs::create_directories(impl_->cfg.out_dir);
  if (port == 0) {
    impl_->bound_port = impl_->server.bind_to_any_port(host);
  } else {
    impl_->bound_port = impl_->server.bind_to_port(host, port) ? port : -1;
  }
  if (impl_->bound_port < 0) throw Error(Errc::io_error, "cannot bind " + host + ":" + std::to_string(port));
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return impl_->bound_port;
}

void CaptureServer::serve_forever(const std::string& host, int port) {
  fs::create_directories(impl_->cfg.out_dir);
  if (!impl_->server.bind_to_port(host, port)) throw Error(Errc::io_error, "cannot bind " + host + ":" + std::to_string(port));
  impl_->bound_port = port;
  impl_->server.listen_after_bind();
}

void CaptureServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int CaptureServer::port() const noexcept { return impl_->bound_port; }

}  // namespace mosaic::capture
