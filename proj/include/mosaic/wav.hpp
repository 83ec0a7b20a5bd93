#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mosaic::speech {

struct AudioSignal {
  std::vector<float> samples;  // mono, in [-1, 1]
  std::uint32_t sample_rate = 0;

  double duration_seconds() const noexcept {
    return sample_rate == 0 ? 0.0 : static_cast<double>(samples.size()) / sample_rate;
  }
};

// RIFF/WAVE, PCM 16-bit, mono or stereo (averaged), sample rate >= 8000 Hz.
// Throws UnsupportedEncoding or CorruptHeader.
AudioSignal read_wav(std::string_view bytes);

// 16-bit PCM mono; samples are clipped to [-1, 1].
std::string write_wav(std::span<const float> samples, std::uint32_t sample_rate);
// 16-bit PCM with the given number of interleaved channels.
std::string write_wav_pcm16(std::span<const std::int16_t> interleaved, std::uint32_t sample_rate,
                            std::uint16_t channels);

}  // namespace mosaic::speech
