// Copyright 2026 The mmtox Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mmtox/core.hpp"

namespace mmtox {

inline constexpr int kWavSampleRate = 16000;

/// Mono PCM16 samples at a fixed rate.
struct PcmAudio {
  int sample_rate = kWavSampleRate;
  std::vector<std::int16_t> samples;

  double duration() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

namespace detail {

inline void put_u32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
inline void put_u16(std::string& s, std::uint16_t v) {
  s.push_back(static_cast<char>(v & 0xFF));
  s.push_back(static_cast<char>(v >> 8));
}
inline std::uint32_t get_u32(std::string_view s, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(s[at + static_cast<std::size_t>(i)]);
  return v;
}
inline std::uint16_t get_u16(std::string_view s, std::size_t at) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(s[at]) |
                                    (static_cast<unsigned char>(s[at + 1]) << 8));
}

}  // namespace detail

/// RIFF/WAVE, 16-bit PCM, mono.
inline std::string wav_encode(const PcmAudio& audio) {
  const auto data_bytes = static_cast<std::uint32_t>(audio.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  detail::put_u32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  detail::put_u32(out, 16);
  detail::put_u16(out, 1);  // PCM
  detail::put_u16(out, 1);  // mono
  detail::put_u32(out, static_cast<std::uint32_t>(audio.sample_rate));
  detail::put_u32(out, static_cast<std::uint32_t>(audio.sample_rate * 2));
  detail::put_u16(out, 2);
  detail::put_u16(out, 16);
  out += "data";
  detail::put_u32(out, data_bytes);
  for (auto s : audio.samples) detail::put_u16(out, static_cast<std::uint16_t>(s));
  return out;
}

struct WavInfo {
  int channels = 0;
  int sample_rate = 0;
  int bits_per_sample = 0;
  std::size_t frames = 0;
  std::size_t data_offset = 0;
  double duration() const { return sample_rate > 0 ? static_cast<double>(frames) / sample_rate : 0.0; }
};

/// Parses the header chunks; throws FormatError on anything that is not PCM RIFF.
inline WavInfo wav_info(std::string_view bytes) {
  if (bytes.size() < 12 || bytes.substr(0, 4) != "RIFF" || bytes.substr(8, 4) != "WAVE")
    throw FormatError("not a RIFF/WAVE file");
  WavInfo info;
  std::size_t pos = 12;
  bool have_fmt = false;
  while (pos + 8 <= bytes.size()) {
    auto id = bytes.substr(pos, 4);
    auto len = detail::get_u32(bytes, pos + 4);
    pos += 8;
    if (pos + len > bytes.size()) throw FormatError("truncated WAV chunk");
    if (id == "fmt ") {
      if (len < 16 || detail::get_u16(bytes, pos) != 1) throw FormatError("WAV is not PCM");
      info.channels = detail::get_u16(bytes, pos + 2);
      info.sample_rate = static_cast<int>(detail::get_u32(bytes, pos + 4));
      info.bits_per_sample = detail::get_u16(bytes, pos + 14);
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt || info.channels == 0 || info.bits_per_sample == 0)
        throw FormatError("WAV data before fmt");
      info.frames = len / (static_cast<std::size_t>(info.channels) * info.bits_per_sample / 8);
      info.data_offset = pos;
      return info;
    }
    pos += len + (len & 1);
  }
  throw FormatError("WAV has no data chunk");
}

inline PcmAudio wav_decode(std::string_view bytes) {
  auto info = wav_info(bytes);
  if (info.channels != 1 || info.bits_per_sample != 16)
    throw FormatError("only mono PCM16 WAV is supported");
  PcmAudio audio;
  audio.sample_rate = info.sample_rate;
  audio.samples.resize(info.frames);
  for (std::size_t i = 0; i < info.frames; ++i)
    audio.samples[i] = static_cast<std::int16_t>(detail::get_u16(bytes, info.data_offset + 2 * i));
  return audio;
}

}  // namespace mmtox
