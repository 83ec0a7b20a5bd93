#include "mosaic/render.hpp"

#include <algorithm>
#include <sstream>

#include "mosaic/error.hpp"
#include "mosaic/report.hpp"

namespace mosaic::report {

namespace {

std::string num(const Json& v) {
  if (v.is_null()) return "n/a";
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string esc(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string md_cell(std::string s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else if (c == '\n') out += ' ';
    else out += c;
  }
  return out;
}

std::string title_of(const Json& report, const std::string& item_id) {
  for (const auto& c : report.at("comparisons")) {
    if (c.at("item_id") == item_id) return c.at("title").get<std::string>();
  }
  return item_id;
}

std::string render_md(const Json& r) {
  std::ostringstream o;
  const auto& s = r.at("session");
  o << "# Feedback report: " << s.at("id").get<std::string>() << "\n\n";
  o << "Presenter: " << s.at("presenter_id").get<std::string>() << "\n\n";
  const auto& hf = r.at("human_feedback");
  auto entries = [&](const char* heading, const char* key) {
    o << "## " << heading << "\n\n";
    if (hf.is_null() || hf.at(key).empty()) {
      o << "none\n\n";
      return;
    }
    for (const auto& e : hf.at(key)) {
      o << "- **" << title_of(r, e.at("item_id").get<std::string>()) << "**: " << e.at("evidence").get<std::string>()
        << "\n";
    }
    o << "\n";
  };
  entries("Strengths", "strengths");
  entries("Areas for improvement", "improvements");
  o << "## Action plan\n\n";
  if (hf.is_null() || hf.at("action_plan").empty()) {
    o << "none\n\n";
  } else {
    for (const auto& a : hf.at("action_plan")) {
      o << "- **" << title_of(r, a.at("item_id").get<std::string>()) << "**: "
        << a.at("recommendation").get<std::string>();
      if (!a.at("metric").is_null()) o << " (" << a.at("metric").get<std::string>() << " = " << num(a.at("metric_value")) << ")";
      o << "\n";
    }
    o << "\n";
  }
  if (!hf.is_null()) {
    o << "Status: " << hf.at("review_status").get<std::string>() << ", source: " << hf.at("provenance").get<std::string>()
      << "\n\n";
  }
  o << "## Self, peer, professor and class scores\n\n";
  if (r.at("comparisons").empty()) {
    o << "none\n\n";
  } else {
    o << "| Item | Self | Peers | Professors | External | Class |\n|---|---|---|---|---|---|\n";
    for (const auto& c : r.at("comparisons")) {
      o << "| " << md_cell(c.at("title").get<std::string>()) << " | " << num(c.at("self")) << " | " << num(c.at("peer"))
        << " | " << num(c.at("professor")) << " | " << num(c.at("external")) << " | " << num(c.at("class")) << " |\n";
    }
    o << "\n";
  }
  o << "## Data-based findings\n\n";
  for (const auto& a : r.at("data_feedback")) {
    o << "### " << a.at("name").get<std::string>() << "\n\n";
    if (a.at("status") != "ok") {
      o << "Not available: " << num(a.at("reason")) << "\n\n";
      continue;
    }
    for (const auto& [k, v] : a.at("metrics").items()) o << "- " << k << ": " << num(v) << "\n";
    o << "\n";
  }
  o << "## Timeline\n\n";
  if (r.at("timeline").empty()) {
    o << "none\n\n";
  } else {
    for (const auto& m : r.at("timeline")) {
      o << "- " << num(m.at("ts_ms")) << " ms " << m.at("kind").get<std::string>() << ": " << m.at("label").get<std::string>()
        << "\n";
    }
    o << "\n";
  }
  o << "## Limitations\n\n";
  for (const auto& l : r.at("limitations")) o << "- " << l.get<std::string>() << "\n";
  if (!r.at("warnings").empty()) {
    o << "\n## Warnings\n\n";
    for (const auto& w : r.at("warnings")) o << "- " << w.get<std::string>() << "\n";
  }
  return o.str();
}

std::string mark_class(const std::string& kind) {
  if (kind == "hr_peak") return "mark-peak";
  if (kind == "slide_change") return "mark-slide";
  if (kind == "premature_rating") return "mark-premature";
  return "mark-" + kind;
}

constexpr const char* kStyle = R"(body{font-family:sans-serif;max-width:60em;margin:2em auto;color:#222}
table{border-collapse:collapse}td,th{border:1px solid #ccc;padding:.2em .5em;text-align:left}
.phase{fill:#f2f2f2;stroke:#fff}.mark-peak{stroke:#c0392b;stroke-width:2}.mark-slide{stroke:#2c3e50}
.mark-annotation{stroke:#27ae60;stroke-width:2}.mark-premature{stroke:#8e44ad;stroke-width:3}
.mark-pacing{fill:#f39c12;opacity:.5}.bar-self{fill:#2980b9}.bar-peer{fill:#16a085}.bar-professor{fill:#d35400}
.bar-class{fill:#7f8c8d})";

std::string render_html(const Json& r) {
  std::ostringstream o;
  const auto& s = r.at("session");
  const double span = static_cast<double>(s.at("planned_duration_ms").get<Millis>() + s.at("planned_qa_ms").get<Millis>());
  auto x = [&](Millis ts) {
    const double f = std::clamp(static_cast<double>(ts) / span, 0.0, 1.0);
    return format_number(round6(10.0 + 940.0 * f));
  };
  o << "<!DOCTYPE html>\n<html lang=\"en\"><head><meta charset=\"utf-8\"><title>Feedback report "
    << esc(s.at("id").get<std::string>()) << "</title><style>" << kStyle << "</style></head><body>\n";
  o << "<h1>Feedback report: " << esc(s.at("id").get<std::string>()) << "</h1>\n<p>Presenter: "
    << esc(s.at("presenter_id").get<std::string>()) << "</p>\n";

  const auto& hf = r.at("human_feedback");
  auto entries = [&](const char* heading, const char* key) {
    o << "<h2>" << heading << "</h2>\n";
    if (hf.is_null() || hf.at(key).empty()) {
      o << "<p>none</p>\n";
      return;
    }
    o << "<ul>\n";
    for (const auto& e : hf.at(key)) {
      o << "<li><b>" << esc(title_of(r, e.at("item_id").get<std::string>())) << "</b>: "
        << esc(e.at("evidence").get<std::string>()) << "</li>\n";
    }
    o << "</ul>\n";
  };
  entries("Strengths", "strengths");
  entries("Areas for improvement", "improvements");
  o << "<h2>Action plan</h2>\n";
  if (hf.is_null() || hf.at("action_plan").empty()) {
    o << "<p>none</p>\n";
  } else {
    o << "<ul>\n";
    for (const auto& a : hf.at("action_plan")) {
      o << "<li><b>" << esc(title_of(r, a.at("item_id").get<std::string>())) << "</b>: "
        << esc(a.at("recommendation").get<std::string>());
      if (!a.at("metric").is_null()) {
        o << " <small>(" << esc(a.at("metric").get<std::string>()) << " = " << num(a.at("metric_value")) << ")</small>";
      }
      o << "</li>\n";
    }
    o << "</ul>\n";
  }

  o << "<h2>Timeline</h2>\n<svg class=\"timeline\" width=\"960\" height=\"70\" viewBox=\"0 0 960 70\" "
       "xmlns=\"http://www.w3.org/2000/svg\">\n";
  for (const auto& p : s.at("phases")) {
    const double x0 = std::stod(x(p.at("start_ms").get<Millis>()));
    const double x1 = std::stod(x(p.at("end_ms").get<Millis>()));
    o << "<rect class=\"phase\" x=\"" << format_number(x0) << "\" y=\"5\" width=\"" << format_number(round6(x1 - x0))
      << "\" height=\"50\"><title>" << esc(p.at("name").get<std::string>()) << "</title></rect>\n";
  }
  for (const auto& m : r.at("timeline")) {
    const auto kind = m.at("kind").get<std::string>();
    const auto ts = m.at("ts_ms").get<Millis>();
    const auto title = "<title>" + esc(m.at("label").get<std::string>()) + " @ " + std::to_string(ts) + " ms</title>";
    if (!m.at("end_ms").is_null()) {
      const double x0 = std::stod(x(ts));
      const double x1 = std::stod(x(m.at("end_ms").get<Millis>()));
      o << "<rect class=\"mark " << mark_class(kind) << "\" data-ts=\"" << ts << "\" x=\"" << format_number(x0)
        << "\" y=\"45\" width=\"" << format_number(round6(std::max(1.0, x1 - x0))) << "\" height=\"10\">" << title
        << "</rect>\n";
    } else {
      o << "<line class=\"mark " << mark_class(kind) << "\" data-ts=\"" << ts << "\" x1=\"" << x(ts) << "\" x2=\""
        << x(ts) << "\" y1=\"5\" y2=\"55\">" << title << "</line>\n";
    }
  }
  o << "</svg>\n";

  o << "<h2>Self, peer, professor and class scores</h2>\n";
  if (r.at("comparisons").empty()) {
    o << "<p>none</p>\n";
  } else {
    o << "<table>\n<tr><th>Item</th><th>Scores (1 to 5)</th></tr>\n";
    for (const auto& c : r.at("comparisons")) {
      o << "<tr><td>" << esc(c.at("title").get<std::string>()) << "</td><td><svg width=\"320\" height=\"64\" "
        << "xmlns=\"http://www.w3.org/2000/svg\">";
      int row = 0;
      for (const char* who : {"self", "peer", "professor", "class"}) {
        const auto& v = c.at(who);
        const int y = 2 + row * 15;
        o << "<text x=\"0\" y=\"" << y + 11 << "\" font-size=\"11\">" << who << "</text>";
        if (v.is_null()) {
          o << "<text x=\"70\" y=\"" << y + 11 << "\" font-size=\"11\">n/a</text>";
        } else {
          o << "<rect class=\"bar bar-" << who << "\" x=\"70\" y=\"" << y << "\" height=\"12\" width=\""
            << format_number(round6(v.get<double>() / 5.0 * 200.0)) << "\"/><text x=\"275\" y=\"" << y + 11
            << "\" font-size=\"11\">" << num(v) << "</text>";
        }
        ++row;
      }
      o << "</svg></td></tr>\n";
    }
    o << "</table>\n";
  }

  o << "<h2>Data-based findings</h2>\n";
  for (const auto& a : r.at("data_feedback")) {
    o << "<h3>" << esc(a.at("name").get<std::string>()) << "</h3>\n";
    if (a.at("status") != "ok") {
      o << "<p>Not available: " << esc(num(a.at("reason"))) << "</p>\n";
      continue;
    }
    o << "<table>\n";
    for (const auto& [k, v] : a.at("metrics").items()) {
      o << "<tr><td>" << esc(k) << "</td><td>" << num(v) << "</td></tr>\n";
    }
    o << "</table>\n";
  }
  o << "<h2>Limitations</h2>\n<ul>\n";
  for (const auto& l : r.at("limitations")) o << "<li>" << esc(l.get<std::string>()) << "</li>\n";
  o << "</ul>\n";
  if (!r.at("warnings").empty()) {
    o << "<h2>Warnings</h2>\n<ul>\n";
    for (const auto& w : r.at("warnings")) o << "<li>" << esc(w.get<std::string>()) << "</li>\n";
    o << "</ul>\n";
  }
  o << "</body></html>\n";
  return o.str();
}

}  // namespace

std::string render(const Json& report, std::string_view format) {
  if (format == "json") return dump(report);
  if (format == "md") return render_md(report);
  if (format == "html") return render_html(report);
  throw Error(Errc::unsupported_format, std::string(format));
}

}  // namespace mosaic::report
