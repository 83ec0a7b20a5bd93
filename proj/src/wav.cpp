#include "mosaic/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "mosaic/error.hpp"

namespace mosaic::speech {

namespace {

std::uint32_t le32(std::string_view b, std::size_t at) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(b[at])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 3])) << 24;
}

std::uint16_t le16(std::string_view b, std::size_t at) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) |
                                    static_cast<unsigned char>(b[at + 1]) << 8);
}

void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
}

void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

}  // namespace

AudioSignal read_wav(std::string_view bytes) {
  if (bytes.size() < 12 || bytes.substr(0, 4) != "RIFF" || bytes.substr(8, 4) != "WAVE") {
    throw Error(Errc::corrupt_header, "not a RIFF/WAVE file");
  }
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t bits = 0;
  bool have_fmt = false;
  std::string_view data;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string_view id = bytes.substr(pos, 4);
    const std::uint32_t size = le32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (size > bytes.size() - body) {
      throw Error(Errc::corrupt_header, "chunk " + std::string(id) + " overruns file");
    }
    if (id == "fmt ") {
      if (size < 16) {
        throw Error(Errc::corrupt_header, "fmt chunk too short");
      }
      format = le16(bytes, body);
      channels = le16(bytes, body + 2);
      rate = le32(bytes, body + 4);
      bits = le16(bytes, body + 14);
      if (format == kFormatExtensible && size >= 26) {
        format = le16(bytes, body + 24);  // sub-format GUID starts with the format tag
      }
      have_fmt = true;
    } else if (id == "data") {
      data = bytes.substr(body, size);
      have_data = true;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt || !have_data) {
    throw Error(Errc::corrupt_header, "missing fmt or data chunk");
  }
  if (format != kFormatPcm || bits != 16) {
    throw Error(Errc::unsupported_encoding,
                "format tag " + std::to_string(format) + ", " + std::to_string(bits) + " bits");
  }
  if (channels < 1 || channels > 2) {
    throw Error(Errc::unsupported_encoding, std::to_string(channels) + " channels");
  }
  if (rate < 8000) {
    throw Error(Errc::unsupported_encoding, "sample rate " + std::to_string(rate));
  }
  const std::size_t frame_bytes = 2u * channels;
  const std::size_t frames = data.size() / frame_bytes;
  AudioSignal sig;
  sig.sample_rate = rate;
  sig.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      acc += static_cast<std::int16_t>(le16(data, i * frame_bytes + 2 * c)) / 32768.0;
    }
    sig.samples[i] = static_cast<float>(acc / channels);
  }
  return sig;
}

std::string write_wav_pcm16(std::span<const std::int16_t> interleaved, std::uint32_t sample_rate,
                            std::uint16_t channels) {
  const auto data_bytes = static_cast<std::uint32_t>(interleaved.size() * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put32(out, 36 + data_bytes);
  out += "WAVE";
  out += "fmt ";
  put32(out, 16);
  put16(out, kFormatPcm);
  put16(out, channels);
  put32(out, sample_rate);
  put32(out, sample_rate * channels * 2);
  put16(out, static_cast<std::uint16_t>(channels * 2));
  put16(out, 16);
  out += "data";
  put32(out, data_bytes);
  for (std::int16_t s : interleaved) {
    put16(out, static_cast<std::uint16_t>(s));
  }
  return out;
}

std::string write_wav(std::span<const float> samples, std::uint32_t sample_rate) {
  std::vector<std::int16_t> pcm(samples.size());
  std::transform(samples.begin(), samples.end(), pcm.begin(), [](float s) {
    const double c = std::clamp(static_cast<double>(s), -1.0, 1.0);
    return static_cast<std::int16_t>(std::lround(c * 32767.0));
  });
  return write_wav_pcm16(pcm, sample_rate, 1);
}

}  // namespace mosaic::speech
