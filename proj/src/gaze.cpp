#include "mosaic/gaze.hpp"

#include <algorithm>
#include <cmath>

#include "mosaic/error.hpp"

namespace mosaic::gaze {

namespace {

Millis median_period(std::span<const ingest::GazeSample> s) {
  if (s.size() < 2) {
    return 0;
  }
  std::vector<double> d;
  d.reserve(s.size() - 1);
  for (std::size_t i = 1; i < s.size(); ++i) {
    d.push_back(static_cast<double>(s[i].ts_ms - s[i - 1].ts_ms));
  }
  return static_cast<Millis>(std::llround(stats::median(std::move(d))));
}

struct Box {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  void add(const ingest::GazeSample& s) {
    x0 = std::min(x0, s.x);
    x1 = std::max(x1, s.x);
    y0 = std::min(y0, s.y);
    y1 = std::max(y1, s.y);
  }
  double dispersion() const { return (x1 - x0) + (y1 - y0); }
};

}  // namespace

FixationResult detect_fixations(std::span<const ingest::GazeSample> s, const FixationConfig& cfg) {
  FixationResult out;
  const std::size_t n = s.size();
  if (n == 0) {
    return out;
  }
  const Millis period = median_period(s);
  auto end_ts = [&](std::size_t j) { return j < n ? s[j].ts_ms : s[n - 1].ts_ms + period; };

  std::size_t a = 0;
  while (a < n) {
    if (!s[a].valid) {
      ++a;
      continue;
    }
    std::size_t b = a;
    while (b < n && s[b].valid) {
      ++b;
    }
    std::size_t i = a;
    while (i < b) {
      std::size_t j = i + 1;
      while (j < b && end_ts(j) - s[i].ts_ms < cfg.min_fixation_ms) {
        ++j;
      }
      if (end_ts(j) - s[i].ts_ms < cfg.min_fixation_ms) {
        break;
      }
      Box box;
      for (std::size_t k = i; k < j; ++k) {
        box.add(s[k]);
      }
      if (box.dispersion() > cfg.dispersion_threshold) {
        ++i;
        continue;
      }
      while (j < b) {
        Box grown = box;
        grown.add(s[j]);
        if (grown.dispersion() > cfg.dispersion_threshold) {
          break;
        }
        box = grown;
        ++j;
      }
      Fixation f;
      f.start_ms = s[i].ts_ms;
      f.end_ms = end_ts(j);
      f.dispersion = box.dispersion();
      f.first = i;
      f.last = j;
      for (std::size_t k = i; k < j; ++k) {
        f.x += s[k].x;
        f.y += s[k].y;
      }
      f.x /= static_cast<double>(j - i);
      f.y /= static_cast<double>(j - i);
      out.fixations.push_back(f);
      i = j;
    }
    a = b;
  }
  for (std::size_t k = 1; k < out.fixations.size(); ++k) {
    const auto& p = out.fixations[k - 1];
    const auto& q = out.fixations[k];
    out.saccades.push_back({p.end_ms, q.start_ms, std::hypot(q.x - p.x, q.y - p.y)});
  }
  return out;
}

BlinkResult detect_blinks(std::span<const ingest::GazeSample> s, const BlinkConfig& cfg) {
  BlinkResult out;
  const std::size_t n = s.size();
  if (n == 0) {
    return out;
  }
  const Millis period = median_period(s);
  Millis lost = 0;
  std::size_t i = 0;
  while (i < n) {
    if (s[i].valid) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && !s[j].valid) {
      ++j;
    }
    const Segment seg{s[i].ts_ms, j < n ? s[j].ts_ms : s[n - 1].ts_ms + period};
    const Millis d = seg.end_ms - seg.start_ms;
    if (d > cfg.max_ms) {
      out.data_loss.push_back(seg);
      lost += d;
    } else if (d >= cfg.min_ms) {
      out.blinks.push_back(seg);
    }
    i = j;
  }
  out.tracking_ms = std::max<Millis>(0, s[n - 1].ts_ms - s[0].ts_ms + period - lost);
  if (out.tracking_ms > 0) {
    out.rate_per_min = static_cast<double>(out.blinks.size()) * 60000.0 / static_cast<double>(out.tracking_ms);
  }
  return out;
}

AoiConfig default_aois() {
  return {{"presenter_face", 0.35, 0.05, 0.55, 0.40}, {"slides", 0.60, 0.05, 0.98, 0.65}};
}

AoiConfig aois_from_json(const Json& config) {
  if (!config.is_array() || config.empty()) {
    return default_aois();
  }
  AoiConfig out;
  for (const auto& a : config) {
    const auto& r = a.at("rect");
    Aoi aoi{a.at("name").get<std::string>(), r.at(0).get<double>(), r.at(1).get<double>(), r.at(2).get<double>(),
            r.at(3).get<double>()};
    const bool inside = aoi.x0 >= 0 && aoi.y0 >= 0 && aoi.x1 <= 1 && aoi.y1 <= 1 && aoi.x0 <= aoi.x1 &&
                        aoi.y0 <= aoi.y1;
    if (!inside || aoi.name == kOtherAoi) {
      throw Error(Errc::schema_error, "aoi_config: invalid rectangle " + aoi.name, 0, "aoi_config");
    }
    out.push_back(std::move(aoi));
  }
  return out;
}

std::string aoi_of(double x, double y, const AoiConfig& aois) {
  for (const auto& a : aois) {
    if (x >= a.x0 && x <= a.x1 && y >= a.y0 && y <= a.y1) {
      return a.name;
    }
  }
  return std::string(kOtherAoi);
}

AoiSummary map_aoi(std::span<const Fixation> fixations, const AoiConfig& aois, const core::PhaseSchedule& phases) {
  AoiSummary out;
  std::map<std::string, double> ms;
  for (const auto& a : aois) {
    ms[a.name] = 0.0;
  }
  ms[std::string(kOtherAoi)] = 0.0;
  std::map<std::string, std::map<std::string, double>> phase_ms;
  for (const auto& f : fixations) {
    const std::string name = aoi_of(f.x, f.y, aois);
    ms[name] += static_cast<double>(f.duration_ms());
    out.fixation_ms += f.duration_ms();
    for (const auto& p : phases) {
      const Millis overlap = std::min(f.end_ms, p.end_ms) - std::max(f.start_ms, p.start_ms);
      if (overlap > 0) {
        phase_ms[std::string(core::to_string(p.name))][name] += static_cast<double>(overlap);
      }
    }
    if (!out.timeline.empty() && out.timeline.back().aoi == name) {
      out.timeline.back().end_ms = f.end_ms;
    } else {
      if (!out.timeline.empty()) {
        ++out.switches;
      }
      out.timeline.push_back({f.start_ms, f.end_ms, name});
    }
  }
  if (out.fixation_ms > 0) {
    for (auto& [k, v] : ms) {
      v /= static_cast<double>(out.fixation_ms);
    }
    out.shares = std::move(ms);
  }
  for (auto& [phase, m] : phase_ms) {
    double total = 0.0;
    for (const auto& [k, v] : m) {
      total += v;
    }
    for (auto& [k, v] : m) {
      v /= total;
    }
    out.per_phase[phase] = std::move(m);
  }
  return out;
}

}  // namespace mosaic::gaze
