// Copyright 2026 SVC-Forge Authors
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

// RIFF/WAV reader and writer. Supported codecs: PCM 16-bit, PCM 24-bit and
// IEEE float-32. Multichannel input is mixed down to mono by averaging.
// 16-bit samples are normalized by 1/32768 (so -32768 maps to -1.0 exactly),
// 24-bit by 1/8388608. Out-of-range samples are clamped at write time only;
// loaded values are never altered.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "svcforge/audio/waveform.hpp"

namespace svcforge {

enum class BitDepth { pcm16, pcm24, float32 };

inline std::string to_string(BitDepth d) {
  switch (d) {
    case BitDepth::pcm16: return "16";
    case BitDepth::pcm24: return "24";
    case BitDepth::float32: return "float32";
  }
  return "float32";
}

inline BitDepth bit_depth_from_string(const std::string& s) {
  if (s == "16" || s == "pcm16") return BitDepth::pcm16;
  if (s == "24" || s == "pcm24") return BitDepth::pcm24;
  if (s == "float32" || s == "32f" || s == "f32") return BitDepth::float32;
  throw std::invalid_argument("unknown bit depth '" + s + "' (expected 16, 24 or float32)");
}

namespace detail {

inline constexpr std::uint16_t kFormatPcm = 0x0001;
inline constexpr std::uint16_t kFormatIeeeFloat = 0x0003;
inline constexpr std::uint16_t kFormatExtensible = 0xFFFE;

inline std::uint16_t read_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
inline std::uint32_t read_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
inline void put_u16(std::vector<std::uint8_t>& buf, std::uint16_t v) {
  buf.push_back(static_cast<std::uint8_t>(v & 0xFF));
  buf.push_back(static_cast<std::uint8_t>(v >> 8));
}
inline void put_u32(std::vector<std::uint8_t>& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}
inline void put_tag(std::vector<std::uint8_t>& buf, const char* tag) {
  buf.insert(buf.end(), tag, tag + 4);
}

struct FmtChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits_per_sample = 0;
};

}  // namespace detail

inline Waveform load_waveform(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw std::runtime_error("read failure on '" + path.string() + "'");
  if (bytes.size() < 44 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw std::runtime_error("'" + path.string() + "' is not a RIFF/WAVE file");

  detail::FmtChunk fmt;
  bool have_fmt = false;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
    const std::uint32_t size = detail::read_u32(bytes.data() + pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) break;  // truncated chunk; ignore
    if (std::memcmp(id, "fmt ", 4) == 0 && size >= 16) {
      fmt.format = detail::read_u16(bytes.data() + body);
      fmt.channels = detail::read_u16(bytes.data() + body + 2);
      fmt.sample_rate = detail::read_u32(bytes.data() + body + 4);
      fmt.bits_per_sample = detail::read_u16(bytes.data() + body + 14);
      if (fmt.format == detail::kFormatExtensible && size >= 40) {
        // Sub-format GUID starts at offset 24; first two bytes carry the code.
        fmt.format = detail::read_u16(bytes.data() + body + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = size;
    }
    pos = body + size + (size & 1);  // chunks are word-aligned
  }

  if (!have_fmt) throw std::runtime_error("'" + path.string() + "': missing fmt chunk");
  if (data == nullptr) throw std::runtime_error("'" + path.string() + "': missing data chunk");
  if (fmt.channels == 0 || fmt.sample_rate == 0)
    throw std::runtime_error("'" + path.string() + "': malformed fmt chunk");

  int bytes_per_sample = 0;
  if (fmt.format == detail::kFormatPcm && fmt.bits_per_sample == 16)
    bytes_per_sample = 2;
  else if (fmt.format == detail::kFormatPcm && fmt.bits_per_sample == 24)
    bytes_per_sample = 3;
  else if (fmt.format == detail::kFormatIeeeFloat && fmt.bits_per_sample == 32)
    bytes_per_sample = 4;
  else
    throw std::runtime_error("'" + path.string() + "': unsupported codec (format " +
                             std::to_string(fmt.format) + ", " +
                             std::to_string(fmt.bits_per_sample) + " bit)");

  const std::size_t frame_bytes = static_cast<std::size_t>(bytes_per_sample) * fmt.channels;
  const std::size_t num_frames = data_size / frame_bytes;
  if (num_frames == 0) throw std::runtime_error("'" + path.string() + "': zero-length audio");

  Waveform w;
  w.sample_rate = static_cast<int>(fmt.sample_rate);
  w.samples.resize(num_frames);
  const double inv_channels = 1.0 / fmt.channels;
  for (std::size_t f = 0; f < num_frames; ++f) {
    double acc = 0.0;
    const std::uint8_t* p = data + f * frame_bytes;
    for (unsigned c = 0; c < fmt.channels; ++c, p += bytes_per_sample) {
      switch (bytes_per_sample) {
        case 2: {
          std::int16_t v = static_cast<std::int16_t>(detail::read_u16(p));
          acc += v / 32768.0;
          break;
        }
        case 3: {
          std::int32_t v = static_cast<std::int32_t>(
              (static_cast<std::uint32_t>(p[0]) << 8) | (static_cast<std::uint32_t>(p[1]) << 16) |
              (static_cast<std::uint32_t>(p[2]) << 24));
          v >>= 8;  // sign-extending shift down from the top bytes
          acc += v / 8388608.0;
          break;
        }
        case 4: {
          float v;
          std::memcpy(&v, p, 4);
          acc += v;
          break;
        }
      }
    }
    w.samples[f] = static_cast<float>(fmt.channels == 1 ? acc : acc * inv_channels);
  }
  return w;
}

inline void save_waveform(const Waveform& w, const std::filesystem::path& path, BitDepth depth) {
  validate_waveform(w);

  const std::uint16_t channels = 1;
  std::uint16_t format = detail::kFormatPcm;
  std::uint16_t bits = 16;
  switch (depth) {
    case BitDepth::pcm16: bits = 16; break;
    case BitDepth::pcm24: bits = 24; break;
    case BitDepth::float32:
      format = detail::kFormatIeeeFloat;
      bits = 32;
      break;
  }
  const std::uint32_t bytes_per_sample = bits / 8;
  const std::uint32_t data_size = static_cast<std::uint32_t>(w.samples.size()) * bytes_per_sample;

  std::vector<std::uint8_t> buf;
  buf.reserve(64 + data_size);
  detail::put_tag(buf, "RIFF");
  detail::put_u32(buf, 0);  // patched below
  detail::put_tag(buf, "WAVE");

  // Float WAVs carry an 18-byte fmt (cbSize = 0) plus a fact chunk.
  const bool is_float = format == detail::kFormatIeeeFloat;
  detail::put_tag(buf, "fmt ");
  detail::put_u32(buf, is_float ? 18 : 16);
  detail::put_u16(buf, format);
  detail::put_u16(buf, channels);
  detail::put_u32(buf, static_cast<std::uint32_t>(w.sample_rate));
  detail::put_u32(buf, static_cast<std::uint32_t>(w.sample_rate) * bytes_per_sample * channels);
  detail::put_u16(buf, static_cast<std::uint16_t>(bytes_per_sample * channels));
  detail::put_u16(buf, bits);
  if (is_float) {
    detail::put_u16(buf, 0);
    detail::put_tag(buf, "fact");
    detail::put_u32(buf, 4);
    detail::put_u32(buf, static_cast<std::uint32_t>(w.samples.size()));
  }

  detail::put_tag(buf, "data");
  detail::put_u32(buf, data_size);
  for (float s : w.samples) {
    const float c = std::clamp(s, -1.0f, 1.0f);
    switch (depth) {
      case BitDepth::pcm16: {
        long v = std::lround(static_cast<double>(c) * 32768.0);
        v = std::clamp(v, -32768l, 32767l);
        detail::put_u16(buf, static_cast<std::uint16_t>(static_cast<std::int16_t>(v)));
        break;
      }
      case BitDepth::pcm24: {
        long v = std::lround(static_cast<double>(c) * 8388608.0);
        v = std::clamp(v, -8388608l, 8388607l);
        const std::uint32_t u = static_cast<std::uint32_t>(static_cast<std::int32_t>(v));
        buf.push_back(static_cast<std::uint8_t>(u & 0xFF));
        buf.push_back(static_cast<std::uint8_t>((u >> 8) & 0xFF));
        buf.push_back(static_cast<std::uint8_t>((u >> 16) & 0xFF));
        break;
      }
      case BitDepth::float32: {
        std::uint8_t raw[4];
        std::memcpy(raw, &c, 4);
        buf.insert(buf.end(), raw, raw + 4);
        break;
      }
    }
  }
  if (data_size & 1) buf.push_back(0);  // pad byte

  const std::uint32_t riff_size = static_cast<std::uint32_t>(buf.size()) - 8;
  buf[4] = static_cast<std::uint8_t>(riff_size & 0xFF);
  buf[5] = static_cast<std::uint8_t>((riff_size >> 8) & 0xFF);
  buf[6] = static_cast<std::uint8_t>((riff_size >> 16) & 0xFF);
  buf[7] = static_cast<std::uint8_t>((riff_size >> 24) & 0xFF);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw std::runtime_error("write failure on '" + path.string() + "'");
}

}  // namespace svcforge
