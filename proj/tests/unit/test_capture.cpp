#include <catch_amalgamated.hpp>

#include <httplib.h>

#include <atomic>

#include "mosaic/capture.hpp"
#include "mosaic/core.hpp"
#include "mosaic/synth.hpp"
#include "support.hpp"

using namespace mosaic;

namespace {

struct Fixture {
  test::TempDir dir{"capture"};
  std::atomic<Millis> clock{1000000};
  std::unique_ptr<capture::CaptureServer> server;
  std::unique_ptr<httplib::Client> client;

  explicit Fixture(std::optional<std::string> token = std::nullopt) {
    capture::CaptureConfig cfg;
    cfg.out_dir = dir / "bundle";
    cfg.rubric = synth::default_rubric();
    cfg.labels = {"good_example", "confusing"};
    cfg.token = std::move(token);
    cfg.clock = [this] { return clock.load(); };
    server = std::make_unique<capture::CaptureServer>(std::move(cfg));
    const int port = server->start("127.0.0.1", 0);
    client = std::make_unique<httplib::Client>("127.0.0.1", port);
  }

  int post(const std::string& path, const Json& body) {
    auto res = client->Post(path, body.dump(), "application/json");
    return res ? res->status : -1;
  }
  Json post_json(const std::string& path, const Json& body) {
    auto res = client->Post(path, body.dump(), "application/json");
    return res ? Json::parse(res->body) : Json();
  }
};

Json evaluation(const std::string& id, const std::string& role, int score) {
  Json items = Json::array();
  for (const auto& item : synth::default_rubric().items) {
    items.push_back({{"item_id", item.id}, {"score", score}, {"comment", "noted during the talk"}});
  }
  return {{"evaluator_id", id}, {"role", role}, {"items", items}};
}

}  // namespace

TEST_CASE("labels file formats") {
  CHECK(capture::parse_labels(R"(["a", "b"])") == std::vector<std::string>{"a", "b"});
  CHECK(capture::parse_labels("a\n# note\n\n b \n") == std::vector<std::string>{"a", "b"});
  CHECK_THROWS(capture::parse_labels(R"({"a": 1})"));
}

TEST_CASE("capture rejects bad requests") {
  Fixture f;
  CHECK(f.client->Get("/api/v1/session")->status == 503);
  CHECK(f.post("/api/v1/annotations", {{"label", "confusing"}, {"source", "obs1"}}) == 503);
  CHECK(f.post("/api/v1/session/start", Json::object()) == 200);
  CHECK(f.post("/api/v1/session/start", Json::object()) == 409);
  CHECK(f.client->Get("/api/v1/nothing")->status == 404);
  CHECK(f.client->Get("/api/v1/rubric")->status == 200);
  CHECK(f.post("/api/v1/annotations", {{"label", "unknown"}, {"source", "obs1"}}) == 422);
  CHECK(f.post("/api/v1/annotations", {{"label", "confusing"}, {"source", "../x"}}) == 422);
  CHECK(f.post("/api/v1/annotations", {{"label", "confusing"}, {"kind", "end"}, {"source", "obs1"}}) == 409);

  const Json bad_batch = Json::array({{{"actor_id", "peer1"}, {"kind", "item_focus"}, {"item_id", "voice"}},
                                      {{"actor_id", "peer1"}, {"kind", "item_rated"}, {"item_id", "voice"}, {"value", 9}}});
  auto res = f.client->Post("/api/v1/events", bad_batch.dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == 422);
  CHECK(Json::parse(res->body)["index"] == 1);
  CHECK_FALSE(std::filesystem::exists(f.dir / "bundle/events/peer1.jsonl"));

  CHECK(f.post("/api/v1/evaluations", evaluation("peer1", "peer", 0)) == 422);
  Json missing = evaluation("peer1", "peer", 3);
  missing["items"].erase(0);
  CHECK(f.post("/api/v1/evaluations", missing) == 422);
}

TEST_CASE("capture writes a loadable bundle") {
  Fixture f;
  REQUIRE(f.post("/api/v1/session/start", {{"session_id", "demo"}}) == 200);
  f.clock += 500;
  auto a = f.post_json("/api/v1/annotations", {{"label", "phase:opening"}, {"kind", "start"}, {"source", "obs1"}});
  CHECK(a["id"] == "a0001");
  CHECK(a["ts_ms"] == 500);
  f.clock += 2000;
  CHECK(f.post("/api/v1/annotations", {{"label", "good_example"}, {"source", "obs1"}}) == 201);
  f.clock += 1000;
  CHECK(f.post("/api/v1/annotations", {{"label", "phase:opening"}, {"kind", "end"}, {"source", "obs1"}}) == 201);

  f.clock += 1000;  // session time 4500
  const Json batch = {{"sent_client_ts_ms", 90000},
                      {"events", Json::array({{{"actor_id", "peer1"}, {"kind", "item_focus"}, {"item_id", "voice"}, {"client_ts_ms", 89000}},
                                              {{"actor_id", "peer1"}, {"kind", "item_rated"}, {"item_id", "voice"}, {"value", 4}, {"client_ts_ms", 89800}},
                                              {{"actor_id", "peer1"}, {"kind", "item_blur"}, {"item_id", "voice"}, {"client_ts_ms", 95000}}})}};
  auto accepted = f.post_json("/api/v1/events", batch);
  CHECK(accepted["accepted"] == 3);
  const std::string log = read_file(f.dir / "bundle/events/peer1.jsonl");
  const auto lines = split_lines(log);
  REQUIRE(lines.size() == 3);
  CHECK(Json::parse(lines[0].text)["ts_ms"] == 3500);
  CHECK(Json::parse(lines[1].text)["ts_ms"] == 4300);
  CHECK(Json::parse(lines[2].text)["ts_ms"] == 4500);

  CHECK(f.post("/api/v1/evaluations", evaluation("peer1", "peer", 3)) == 201);
  auto second = f.post_json("/api/v1/evaluations", evaluation("peer1", "peer", 4));
  CHECK(second["version"] == 2);

  const auto ctx = core::load_bundle(f.dir / "bundle");
  CHECK(ctx.session.id == "demo");
  CHECK(ctx.session.observer_ids == std::vector<std::string>{"obs1"});
  REQUIRE(ctx.evaluations.size() == 1);
  CHECK(ctx.evaluations[0].version == 2);
  CHECK(ctx.evaluations[0].items[0].score == 4);
  CHECK(ctx.annotations().size() == 3);
  const auto phases = ctx.phases();
  REQUIRE(core::find_phase(phases, "opening"));
  CHECK(core::find_phase(phases, "opening")->end_ms == 3500);
}

TEST_CASE("capture token") {
  Fixture f("s3cret");
  CHECK(f.post("/api/v1/session/start", Json::object()) == 401);
  CHECK(f.post("/api/v1/session/start?token=s3cret", Json::object()) == 200);
  CHECK(f.client->Get("/")->status == 200);
}
