#include "mosaic/behaviorlog.hpp"

#include <algorithm>

#include "mosaic/util.hpp"

namespace mosaic::behaviorlog {

using ingest::EventKind;
using ingest::InteractionEvent;

SlideTimeline slide_timeline(std::span<const InteractionEvent> events, int slide_count, Millis end_ms,
                             const SlideConfig& cfg) {
  SlideTimeline t;
  int current = 1;
  Millis entered = 0;
  auto close = [&](Millis at) {
    SlideVisit v{current, entered, at};
    v.rushed = v.dwell_ms() < cfg.rushed_ms;
    v.overlong = v.dwell_ms() > cfg.overlong_ms;
    t.visits.push_back(v);
  };
  for (const auto& e : events) {
    if (e.ts_ms >= end_ms || e.ts_ms < entered) {
      continue;
    }
    int next = current;
    if (e.kind == EventKind::slide_advance) {
      next = slide_count > 0 ? std::min(current + 1, slide_count) : current + 1;
    } else if (e.kind == EventKind::slide_back) {
      next = std::max(current - 1, 1);
    }
    if (next == current) {
      continue;
    }
    if (e.ts_ms > entered) {
      close(e.ts_ms);
    }
    if (next < current) {
      ++t.back_navigations;
    }
    current = next;
    entered = e.ts_ms;
  }
  close(std::max(end_ms, entered));
  for (const auto& v : t.visits) {
    t.dwell_per_slide[v.slide] += v.dwell_ms();
    t.rushed += v.rushed ? 1 : 0;
    t.overlong += v.overlong ? 1 : 0;
  }
  return t;
}

std::size_t utf8_length(std::string_view text) noexcept {
  return static_cast<std::size_t>(
      std::count_if(text.begin(), text.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

namespace {

bool is_audit_event(EventKind k) {
  return k == EventKind::item_focus || k == EventKind::item_blur || k == EventKind::item_rated ||
         k == EventKind::comment_edit;
}

std::size_t value_length(const std::optional<ingest::EventValue>& v) {
  if (!v) {
    return 0;
  }
  if (const auto* s = std::get_if<std::string>(&*v)) {
    return utf8_length(*s);
  }
  return static_cast<std::size_t>(std::max<std::int64_t>(0, std::get<std::int64_t>(*v)));
}

EvaluatorAudit audit_one(const std::string& actor, const std::vector<const InteractionEvent*>& events,
                         const AuditInput& in, const AuditConfig& cfg) {
  EvaluatorAudit a;
  a.actor_id = actor;
  std::map<std::string, ItemAudit> items;
  std::vector<std::string> order = in.item_order;
  auto item = [&](const std::string& id) -> ItemAudit& {
    auto [it, inserted] = items.try_emplace(id);
    if (inserted) {
      it->second.item_id = id;
      if (std::find(order.begin(), order.end(), id) == order.end()) {
        order.push_back(id);
      }
    }
    return it->second;
  };
  for (const auto& id : in.item_order) {
    item(id);
  }

  std::optional<std::pair<std::string, Millis>> open;
  auto unbalanced = [&](const std::string& what) {
    a.warnings.push_back("UnbalancedFocusEvents: " + actor + " " + what);
  };
  for (const InteractionEvent* e : events) {
    const std::string id = e->item_id.value_or("");
    switch (e->kind) {
      case EventKind::item_focus:
        if (open) {
          if (open->first != id) {
            unbalanced("focus on " + id + " while " + open->first + " is focused");
          }
          item(open->first).focus_ms += e->ts_ms - open->second;
        }
        open = std::make_pair(id, e->ts_ms);
        break;
      case EventKind::item_blur:
        if (!open) {
          unbalanced("blur on " + id + " without focus");
          break;
        }
        if (open->first != id) {
          unbalanced("blur on " + id + " while " + open->first + " is focused");
        }
        item(open->first).focus_ms += e->ts_ms - open->second;
        open.reset();
        break;
      case EventKind::item_rated: {
        auto& it = item(id);
        it.rating_ts.push_back(e->ts_ms);
        const std::int64_t score = e->value ? std::get<std::int64_t>(*e->value) : 0;
        it.last_score = score;
        a.order.push_back({e->ts_ms, id, score});
        if (auto ph = in.item_phase.find(id); ph != in.item_phase.end() && in.phases) {
          if (const auto* p = core::find_phase(*in.phases, ph->second); p && e->ts_ms < p->start_ms) {
            it.premature = true;
          }
        }
        break;
      }
      case EventKind::comment_edit:
        item(id).comment_length = value_length(e->value);
        break;
      default:
        break;
    }
  }
  if (open) {
    unbalanced("focus on " + open->first + " never blurred");
    item(open->first).focus_ms += std::max<Millis>(0, in.span_ms - open->second);
  }
  if (auto c = in.comments.find(actor); c != in.comments.end()) {
    for (const auto& [id, text] : c->second) {
      item(id).comment_length = utf8_length(text);
    }
  }

  std::vector<double> lengths;
  for (const auto& id : order) {
    auto& it = items.at(id);
    a.active_ms += it.focus_ms;
    if (it.premature) {
      a.premature_items.push_back(id);
    }
    lengths.push_back(static_cast<double>(it.comment_length));
    a.items.push_back(std::move(it));
  }
  a.activity_ratio = in.span_ms > 0 ? static_cast<double>(a.active_ms) / static_cast<double>(in.span_ms) : 0.0;
  a.median_comment_length = lengths.empty() ? 0.0 : stats::median(lengths);
  if (!a.premature_items.empty()) {
    a.flags.push_back("premature");
  }
  if (a.activity_ratio < cfg.min_active_ratio) {
    a.flags.push_back("rushed");
  }
  if (a.median_comment_length < cfg.min_median_comment) {
    a.flags.push_back("superficial");
  }
  return a;
}

}  // namespace

EvaluationAudit evaluation_audit(const AuditInput& in, const AuditConfig& cfg) {
  std::map<std::string, std::vector<const InteractionEvent*>> by_actor;
  for (const auto& e : in.events) {
    if (is_audit_event(e.kind)) {
      by_actor[e.actor_id].push_back(&e);
    }
  }
  for (const auto& [actor, c] : in.comments) {
    by_actor.try_emplace(actor);
  }
  EvaluationAudit out;
  for (auto& [actor, events] : by_actor) {
    std::stable_sort(events.begin(), events.end(),
                     [](const InteractionEvent* a, const InteractionEvent* b) { return a->ts_ms < b->ts_ms; });
    out.evaluators.push_back(audit_one(actor, events, in, cfg));
    out.warnings.insert(out.warnings.end(), out.evaluators.back().warnings.begin(),
                        out.evaluators.back().warnings.end());
  }
  return out;
}

}  // namespace mosaic::behaviorlog
