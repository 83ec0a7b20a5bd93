#include <catch_amalgamated.hpp>

#include "mosaic/behaviorlog.hpp"

using namespace mosaic;
using namespace mosaic::behaviorlog;
using ingest::EventKind;
using ingest::InteractionEvent;
using Catch::Approx;

namespace {

InteractionEvent ev(Millis ts, const char* actor, EventKind kind, std::optional<std::string> item = std::nullopt,
                    std::optional<ingest::EventValue> value = std::nullopt) {
  return {ts, actor, kind, std::move(item), std::move(value), std::nullopt};
}

}  // namespace

TEST_CASE("slide timeline partitions the talk") {
  const std::vector<InteractionEvent> e = {ev(60000, "p", EventKind::slide_advance),
                                           ev(63000, "p", EventKind::slide_advance),
                                           ev(64000, "p", EventKind::slide_back),
                                           ev(70000, "p", EventKind::slide_advance),
                                           ev(80000, "p", EventKind::slide_advance)};
  const auto t = slide_timeline(e, 3, 400000);
  REQUIRE(t.visits.size() == 5);
  CHECK(t.visits[0].slide == 1);
  CHECK(t.visits[1].rushed);
  CHECK(t.visits[2].slide == 3);
  CHECK(t.visits[3].slide == 2);
  CHECK(t.visits[4].slide == 3);
  CHECK(t.visits[4].overlong);
  CHECK(t.back_navigations == 1);
  CHECK(t.rushed == 2);
  CHECK(t.dwell_per_slide.at(2) == 63000 - 60000 + 70000 - 64000);
  Millis total = 0;
  for (const auto& v : t.visits) total += v.dwell_ms();
  CHECK(total == 400000);
}

TEST_CASE("audit flags ratings before their phase") {
  const core::PhaseSchedule phases = {{core::PhaseName::opening, 0, 60000},
                                      {core::PhaseName::body, 60000, 480000},
                                      {core::PhaseName::conclusion, 480000, 600000}};
  const std::vector<InteractionEvent> e = {
      ev(1000, "a", EventKind::item_focus, "intro"),
      ev(2000, "a", EventKind::comment_edit, "intro", std::int64_t{25}),
      ev(40000, "a", EventKind::item_rated, "intro", std::int64_t{4}),
      ev(41000, "a", EventKind::item_blur, "intro"),
      ev(100000, "a", EventKind::item_focus, "ending"),
      ev(200000, "a", EventKind::item_rated, "ending", std::int64_t{2}),
      ev(300000, "a", EventKind::item_blur, "ending"),
      ev(5000, "b", EventKind::item_focus, "intro"),
      ev(6000, "b", EventKind::item_focus, "ending"),
      ev(7000, "b", EventKind::item_rated, "intro", std::int64_t{3}),
  };
  AuditInput in;
  in.events = e;
  in.phases = &phases;
  in.item_phase = {{"intro", "opening"}, {"ending", "conclusion"}};
  in.item_order = {"intro", "ending"};
  in.span_ms = 600000;
  in.comments["a"]["ending"] = "short";
  const auto audit = evaluation_audit(in);
  REQUIRE(audit.evaluators.size() == 2);
  const auto& a = audit.evaluators[0];
  CHECK(a.actor_id == "a");
  CHECK(a.premature_items == std::vector<std::string>{"ending"});
  CHECK(a.items[0].focus_ms == 40000);
  CHECK(a.items[1].focus_ms == 200000);
  CHECK(a.items[0].comment_length == 25);
  CHECK(a.items[1].comment_length == 5);
  CHECK(a.activity_ratio == Approx(240000.0 / 600000.0));
  CHECK(a.flags == std::vector<std::string>{"premature", "superficial"});
  REQUIRE(a.order.size() == 2);
  CHECK(a.order[1].score == 2);

  const auto& b = audit.evaluators[1];
  CHECK(b.premature_items.empty());
  CHECK(b.warnings.size() == 2);  // focus switch and an unclosed focus
  CHECK(b.items[1].focus_ms == 600000 - 6000);
  CHECK(std::find(b.flags.begin(), b.flags.end(), "rushed") == b.flags.end());
  CHECK(audit.warnings.size() == 2);
}

TEST_CASE("utf8 length counts code points") {
  CHECK(utf8_length("abc") == 3);
  CHECK(utf8_length("cañón") == 5);
}
