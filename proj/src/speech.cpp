#include "mosaic/speech.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "mosaic/error.hpp"
#include "mosaic/util.hpp"

namespace mosaic::speech {

std::optional<PitchEstimate> estimate_pitch(std::span<const float> x, double sample_rate, const FrameConfig& cfg) {
  const auto n = static_cast<long>(x.size());
  const long lag_min = std::max(1L, static_cast<long>(std::floor(sample_rate / cfg.f0_max_hz)));
  const long lag_max = std::min(n - 2, static_cast<long>(std::ceil(sample_rate / cfg.f0_min_hz)));
  if (lag_max <= lag_min) {
    return std::nullopt;
  }
  // r[k] for lag = lag_min - 1 + k, one extra lag on each side for the peak test.
  std::vector<double> r(static_cast<std::size_t>(lag_max - lag_min + 3), 0.0);
  for (long lag = lag_min - 1; lag <= lag_max + 1; ++lag) {
    double xy = 0.0, xx = 0.0, yy = 0.0;
    for (long i = 0; i + lag < n; ++i) {
      const double a = x[static_cast<std::size_t>(i)];
      const double b = x[static_cast<std::size_t>(i + lag)];
      xy += a * b;
      xx += a * a;
      yy += b * b;
    }
    const double den = std::sqrt(xx * yy);
    r[static_cast<std::size_t>(lag - lag_min + 1)] = den > 0.0 ? xy / den : 0.0;
  }
  double r_max = -1.0;
  for (long lag = lag_min; lag <= lag_max; ++lag) {
    r_max = std::max(r_max, r[static_cast<std::size_t>(lag - lag_min + 1)]);
  }
  if (r_max < cfg.min_correlation) {
    return std::nullopt;
  }
  // Smallest-lag local maximum close to the best one avoids octave errors.
  for (long lag = lag_min; lag <= lag_max; ++lag) {
    const auto k = static_cast<std::size_t>(lag - lag_min + 1);
    if (r[k] >= r[k - 1] && r[k] > r[k + 1] && r[k] >= 0.9 * r_max && r[k] >= cfg.min_correlation) {
      const double den = r[k - 1] - 2.0 * r[k] + r[k + 1];
      const double delta = den != 0.0 ? 0.5 * (r[k - 1] - r[k + 1]) / den : 0.0;
      const double tau = static_cast<double>(lag) + std::clamp(delta, -0.5, 0.5);
      return PitchEstimate{sample_rate / tau, r[k]};
    }
  }
  return std::nullopt;
}

std::vector<AudioFeatureFrame> audio_features(const AudioSignal& signal, const FrameConfig& cfg) {
  std::vector<AudioFeatureFrame> out;
  const auto total = signal.samples.size();
  if (total == 0 || signal.sample_rate == 0) {
    return out;
  }
  const double sr = signal.sample_rate;
  const auto win = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(sr * cfg.window_ms / 1000.0)));
  const auto hop = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(sr * cfg.hop_ms / 1000.0)));
  const std::size_t count = total >= win ? (total - win) / hop + 1 : 1;
  out.resize(count);
  std::vector<double> levels(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t start = i * hop;
    const std::size_t len = std::min(win, total - start);
    double acc = 0.0;
    for (std::size_t j = 0; j < len; ++j) {
      const double s = signal.samples[start + j];
      acc += s * s;
    }
    const double rms = std::sqrt(acc / static_cast<double>(len));
    out[i].ts_ms = std::llround((static_cast<double>(start) + static_cast<double>(win) / 2.0) * 1000.0 / sr);
    out[i].rms_db = rms > 0.0 ? std::max(kSilenceDb, 20.0 * std::log10(rms)) : kSilenceDb;
    levels[i] = out[i].rms_db;
  }
  const double floor_db = std::min(stats::percentile(levels, cfg.floor_percentile), cfg.floor_cap_db);
  const double gate = floor_db + cfg.floor_margin_db;
  for (std::size_t i = 0; i < count; ++i) {
    if (out[i].rms_db < gate) {
      continue;
    }
    const std::size_t start = i * hop;
    const std::span<const float> frame(signal.samples.data() + start, std::min(win, total - start));
    if (auto p = estimate_pitch(frame, sr, cfg); p && p->f0_hz >= cfg.f0_min_hz && p->f0_hz <= cfg.f0_max_hz) {
      out[i].voiced = true;
      out[i].f0_hz = p->f0_hz;
    }
  }
  return out;
}

std::vector<Silence> silence_segments(std::span<const AudioFeatureFrame> frames, const VocalConfig& cfg) {
  std::vector<Silence> out;
  const Millis half = cfg.hop_ms / 2;
  std::size_t i = 0;
  while (i < frames.size()) {
    if (frames[i].voiced) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < frames.size() && !frames[j].voiced) {
      ++j;
    }
    const Millis start = std::max<Millis>(0, frames[i].ts_ms - half);
    const Millis end = frames[j - 1].ts_ms + (cfg.hop_ms - half);
    if (end - start >= cfg.pause_min_ms) {
      out.push_back({start, end, end - start >= cfg.long_pause_ms});
    }
    i = j;
  }
  return out;
}

namespace {

double semitone_sd(const std::vector<double>& f0) {
  const double med = stats::median(f0);
  std::vector<double> st;
  st.reserve(f0.size());
  for (double f : f0) {
    st.push_back(12.0 * std::log2(f / med));
  }
  return stats::sample_sd(st);
}

}  // namespace

VocalSummary vocal_summary(std::span<const AudioFeatureFrame> frames, const VocalConfig& cfg) {
  VocalSummary v;
  v.frames = frames.size();
  std::vector<double> f0;
  std::map<std::int64_t, std::vector<double>> by_minute;
  for (const auto& f : frames) {
    if (f.voiced && f.f0_hz) {
      f0.push_back(*f.f0_hz);
      by_minute[f.ts_ms / 60000].push_back(*f.f0_hz);
    }
  }
  if (f0.empty()) {
    throw Error(Errc::no_voiced_frames, std::to_string(frames.size()) + " frames");
  }
  v.voiced_frames = f0.size();
  v.voiced_ratio = static_cast<double>(f0.size()) / static_cast<double>(frames.size());
  v.median_hz = stats::median(f0);
  v.semitone_sd = f0.size() > 1 ? semitone_sd(f0) : 0.0;
  v.monotone = v.semitone_sd < cfg.monotone_semitone_sd;
  v.silences = silence_segments(frames, cfg);
  const auto minutes = static_cast<std::size_t>(frames.back().ts_ms / 60000 + 1);
  v.modulation_per_minute.resize(minutes);
  for (const auto& [m, values] : by_minute) {
    if (values.size() > 1) {
      v.modulation_per_minute[static_cast<std::size_t>(m)] = semitone_sd(values);
    }
  }
  return v;
}

std::string normalize_token(std::string_view word) {
  auto keep = [](unsigned char c) { return std::isalnum(c) || c >= 0x80; };
  std::size_t b = 0;
  std::size_t e = word.size();
  while (b < e && !keep(static_cast<unsigned char>(word[b]))) ++b;
  while (e > b && !keep(static_cast<unsigned char>(word[e - 1]))) --e;
  return to_lower(word.substr(b, e - b));
}

namespace {

std::vector<std::string> tokens_of(std::string_view entry) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < entry.size()) {
    while (i < entry.size() && std::isspace(static_cast<unsigned char>(entry[i]))) ++i;
    std::size_t j = i;
    while (j < entry.size() && !std::isspace(static_cast<unsigned char>(entry[j]))) ++j;
    if (j > i) {
      if (auto t = normalize_token(entry.substr(i, j - i)); !t.empty()) {
        out.push_back(std::move(t));
      }
    }
    i = j;
  }
  return out;
}

std::string join(const std::vector<std::string>& tokens) {
  std::string s;
  for (const auto& t : tokens) {
    if (!s.empty()) s += ' ';
    s += t;
  }
  return s;
}

}  // namespace

Lexicon default_lexicon() {
  Lexicon lex;
  for (const char* e : {"um", "uh", "er", "like", "you know", "eh", "este", "o sea", "vale"}) {
    lex.push_back(tokens_of(e));
  }
  return lex;
}

Lexicon parse_lexicon(std::string_view text) {
  Lexicon lex;
  for (const auto& line : split_lines(text)) {
    const std::string t = trim(line.text);
    if (t.empty() || t.front() == '#') {
      continue;
    }
    if (auto tokens = tokens_of(t); !tokens.empty()) {
      lex.push_back(std::move(tokens));
    }
  }
  return lex;
}

SpeechPatternReport transcript_patterns(std::span<const ingest::TranscriptWord> words, const Lexicon& lexicon,
                                        const TranscriptConfig& cfg) {
  SpeechPatternReport r;
  r.words = words.size();
  if (words.empty()) {
    return r;
  }
  std::vector<std::string> tok;
  tok.reserve(words.size());
  for (const auto& w : words) {
    tok.push_back(normalize_token(w.word));
  }
  Lexicon entries = lexicon;
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  std::vector<bool> filler(words.size(), false);
  for (std::size_t i = 0; i < tok.size();) {
    std::size_t matched = 0;
    for (const auto& e : entries) {
      if (e.empty() || i + e.size() > tok.size()) {
        continue;
      }
      if (std::equal(e.begin(), e.end(), tok.begin() + static_cast<std::ptrdiff_t>(i))) {
        auto& fc = r.fillers[join(e)];
        ++fc.count;
        fc.ts_ms.push_back(words[i].start_ms);
        ++r.filler_total;
        matched = e.size();
        break;
      }
    }
    if (matched == 0) {
      ++i;
      continue;
    }
    std::fill_n(filler.begin() + static_cast<std::ptrdiff_t>(i), matched, true);
    i += matched;
  }
  for (std::size_t i = 0; i < tok.size(); ++i) {
    if (filler[i] || tok[i].empty()) {
      continue;
    }
    const std::string raw = trim(words[i].word);
    const bool cut = !raw.empty() && raw.back() == '-';
    const bool repeated = i + 1 < tok.size() && !filler[i + 1] && tok[i + 1] == tok[i];
    if (cut || repeated) {
      r.false_starts.push_back({words[i].start_ms, words[i].word});
    }
  }
  for (std::size_t i = 1; i < words.size(); ++i) {
    const Millis gap = words[i].start_ms - words[i - 1].end_ms;
    if (gap > cfg.long_pause_ms) {
      r.pauses.push_back({words[i - 1].end_ms, words[i].start_ms, true});
      ++r.long_pauses;
      r.long_pause_ms += gap;
    } else if (gap >= cfg.short_pause_ms) {
      r.pauses.push_back({words[i - 1].end_ms, words[i].start_ms, false});
      ++r.short_pauses;
      r.pause_ms += gap;
    }
  }
  Millis last_end = words.front().end_ms;
  for (const auto& w : words) {
    last_end = std::max(last_end, w.end_ms);
  }
  r.span_ms = last_end - words.front().start_ms;
  r.speaking_ms = r.span_ms - r.pause_ms - r.long_pause_ms;
  const Millis talking = r.span_ms - r.long_pause_ms;
  if (talking > 0) {
    r.words_per_minute = static_cast<double>(words.size()) * 60000.0 / static_cast<double>(talking);
  }
  return r;
}

}  // namespace mosaic::speech
