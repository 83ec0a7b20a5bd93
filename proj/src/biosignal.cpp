#include "mosaic/biosignal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mosaic/error.hpp"

namespace mosaic::biosignal {

std::vector<HeartSample> smooth(std::span<const HeartSample> series, int window) {
  const auto n = series.size();
  const auto half = static_cast<std::size_t>(std::max(window, 1) / 2);
  std::vector<HeartSample> out(series.begin(), series.end());
  std::vector<double> buf;
  for (std::size_t i = 0; i < n; ++i) {
    buf.clear();
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n, i + half + 1);
    for (std::size_t j = lo; j < hi; ++j) {
      if (!series[j].artifact) {
        buf.push_back(series[j].bpm);
      }
    }
    if (!buf.empty()) {
      out[i].bpm = stats::median(buf);
    }
  }
  return out;
}

std::vector<PeakEvent> detect_peaks(std::span<const HeartSample> smoothed, const PeakConfig& cfg,
                                    std::span<const HeartSample> raw) {
  const auto n = smoothed.size();
  const bool use_raw = raw.size() == n;
  const Millis half = cfg.baseline_window_ms / 2;
  std::vector<double> z(n, -std::numeric_limits<double>::infinity());
  std::vector<double> x_win;
  std::vector<double> m_win;
  std::size_t lo = 0;
  std::size_t hi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (smoothed[lo].ts_ms < smoothed[i].ts_ms - half) {
      ++lo;
    }
    while (hi < n && smoothed[hi].ts_ms <= smoothed[i].ts_ms + half) {
      ++hi;
    }
    if (smoothed[i].artifact) {
      continue;
    }
    x_win.clear();
    m_win.clear();
    for (std::size_t j = lo; j < hi; ++j) {
      if (!smoothed[j].artifact) {
        x_win.push_back(smoothed[j].bpm);
      }
      const auto& src = use_raw ? raw[j] : smoothed[j];
      if (!src.artifact) {
        m_win.push_back(src.bpm);
      }
    }
    const double med = stats::median(x_win);
    const double mad = m_win.empty() ? 0.0 : stats::mad(m_win);
    z[i] = (smoothed[i].bpm - med) / std::max(mad, cfg.mad_floor);
  }

  // One candidate per run of above-threshold samples: its highest point.
  std::vector<PeakEvent> candidates;
  for (std::size_t i = 0; i < n;) {
    if (z[i] < cfg.z_threshold) {
      ++i;
      continue;
    }
    std::size_t best = i;
    std::size_t j = i;
    while (j < n && z[j] >= cfg.z_threshold) {
      if (smoothed[j].bpm > smoothed[best].bpm) {
        best = j;
      }
      ++j;
    }
    candidates.push_back({smoothed[best].ts_ms, smoothed[best].bpm, z[best]});
    i = j;
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const PeakEvent& a, const PeakEvent& b) { return a.bpm > b.bpm; });
  std::vector<PeakEvent> kept;
  for (const auto& c : candidates) {
    const bool clear = std::all_of(kept.begin(), kept.end(), [&](const PeakEvent& k) {
      return std::llabs(k.ts_ms - c.ts_ms) >= cfg.min_separation_ms;
    });
    if (clear) {
      kept.push_back(c);
    }
  }
  std::sort(kept.begin(), kept.end(), [](const PeakEvent& a, const PeakEvent& b) { return a.ts_ms < b.ts_ms; });
  return kept;
}

std::string_view to_string(TestMode mode) noexcept { return mode == TestMode::paired ? "paired" : "welch"; }

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) {
      break;
    }
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (std::isinf(t)) {
    return 0.0;
  }
  const double p = incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
  return std::clamp(p, 0.0, 1.0);
}

TestResult t_test(std::span<const double> a, std::span<const double> b, TestMode mode) {
  TestResult r;
  r.mode = mode;
  r.n1 = a.size();
  r.n2 = b.size();
  if (mode == TestMode::paired) {
    if (a.size() != b.size() || a.size() < 2) {
      throw Error(Errc::degenerate_sample, "paired test needs two equal-length samples of size >= 2");
    }
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      d[i] = a[i] - b[i];
    }
    const double sd = stats::sample_sd(d);
    const double m = stats::mean(d);
    r.df = static_cast<double>(d.size() - 1);
    if (sd == 0.0) {
      if (std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; })) {
        r.t = 0.0;
        r.p = 1.0;
        return r;
      }
      throw Error(Errc::degenerate_sample, "paired differences have zero variance");
    }
    r.t = m / (sd / std::sqrt(static_cast<double>(d.size())));
    r.p = student_t_two_sided_p(r.t, r.df);
    return r;
  }
  if (a.size() < 2 || b.size() < 2) {
    throw Error(Errc::degenerate_sample, "welch test needs two samples of size >= 2");
  }
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double v1 = std::pow(stats::sample_sd(a), 2) / n1;
  const double v2 = std::pow(stats::sample_sd(b), 2) / n2;
  if (v1 + v2 == 0.0) {
    throw Error(Errc::degenerate_sample, "both samples have zero variance");
  }
  r.t = (stats::mean(a) - stats::mean(b)) / std::sqrt(v1 + v2);
  r.df = (v1 + v2) * (v1 + v2) / (v1 * v1 / (n1 - 1) + v2 * v2 / (n2 - 1));
  r.p = student_t_two_sided_p(r.t, r.df);
  return r;
}

std::vector<std::pair<std::string, std::string>> default_comparisons() {
  return {{"opening", "conclusion"}, {"opening", "qa"}};
}

PhaseStatsReport phase_stats_and_alignment(std::span<const HeartSample> series, const core::PhaseSchedule& phases,
                                           std::span<const PeakEvent> peaks, std::span<const TimelineEvent> events,
                                           Millis window_ms,
                                           const std::vector<std::pair<std::string, std::string>>& comparisons) {
  PhaseStatsReport out;
  std::map<std::string, std::vector<double>> values;
  for (const auto& p : phases) {
    const std::string name(core::to_string(p.name));
    auto& v = values[name];
    for (const auto& s : series) {
      if (!s.artifact && s.ts_ms >= p.start_ms && s.ts_ms < p.end_ms) {
        v.push_back(s.bpm);
      }
    }
    PhaseStats st;
    st.phase = name;
    st.n = v.size();
    if (!v.empty()) {
      st.mean = stats::mean(v);
      st.sd = v.size() > 1 ? stats::sample_sd(v) : 0.0;
      st.min = *std::min_element(v.begin(), v.end());
      st.max = *std::max_element(v.begin(), v.end());
    }
    out.phases.push_back(st);
  }
  for (const auto& [a, b] : comparisons) {
    auto ia = values.find(a);
    auto ib = values.find(b);
    if (ia == values.end() || ib == values.end()) {
      continue;
    }
    try {
      out.comparisons.push_back({a, b, t_test(ia->second, ib->second, TestMode::welch)});
    } catch (const Error&) {
      // Too few or constant samples: no comparison for this pair.
    }
  }
  for (const auto& pk : peaks) {
    const TimelineEvent* best = nullptr;
    for (const auto& e : events) {
      const Millis d = std::llabs(pk.ts_ms - e.ts_ms);
      if (d <= window_ms && (!best || d < std::llabs(pk.ts_ms - best->ts_ms))) {
        best = &e;
      }
    }
    if (best) {
      out.matches.push_back({pk, *best, pk.ts_ms - best->ts_ms});
    } else {
      out.unmatched.push_back(pk);
    }
  }
  return out;
}

}  // namespace mosaic::biosignal
