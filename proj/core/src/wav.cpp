/*
 * Copyright 2026 The sdrkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "sdrkit/wav.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "sdrkit/error.hpp"

namespace sdrkit {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

static_assert(std::endian::native == std::endian::little,
              "WAV codec assumes a little-endian host");

std::uint16_t U16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
std::uint32_t U32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void PutU16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}
void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void PutTag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct FormatChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
};

[[noreturn]] void Malformed(const std::filesystem::path& path,
                            const std::string& what) {
  Fail(ErrorCode::kMalformedHeader, path.string() + ": " + what);
}

}  // namespace

AudioBuffer ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (!std::filesystem::exists(path))
      Fail(ErrorCode::kMissingFile, path.string() + ": no such file");
    Fail(ErrorCode::kIoFailure, path.string() + ": cannot open");
  }
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    Malformed(path, "not a RIFF/WAVE file");

  FormatChunk fmt;
  bool have_fmt = false;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t size = U32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + size > bytes.size())
        Malformed(path, "truncated fmt chunk");
      const std::uint8_t* f = bytes.data() + body;
      fmt.format = U16(f);
      fmt.channels = U16(f + 2);
      fmt.sample_rate = U32(f + 4);
      fmt.bits = U16(f + 14);
      if (fmt.format == kFormatExtensible) {
        if (size < 40) Malformed(path, "truncated extensible fmt chunk");
        // First two bytes of the SubFormat GUID carry the actual codec.
        fmt.format = U16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) Malformed(path, "data chunk precedes fmt chunk");
      data = bytes.data() + body;
      // Tolerate writers that leave the size field short of the real file.
      data_size = std::min<std::size_t>(size, bytes.size() - body);
      break;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) Malformed(path, "missing fmt chunk");
  if (data == nullptr) Malformed(path, "missing data chunk");
  if (fmt.channels == 0) Malformed(path, "zero channels");
  if (fmt.sample_rate == 0) Malformed(path, "zero sample rate");

  const bool pcm16 = fmt.format == kFormatPcm && fmt.bits == 16;
  const bool f32 = fmt.format == kFormatFloat && fmt.bits == 32;
  if (!pcm16 && !f32)
    Fail(ErrorCode::kUnsupportedCodec,
         path.string() + ": unsupported codec (format " +
             std::to_string(fmt.format) + ", " + std::to_string(fmt.bits) +
             " bits)");

  const std::size_t width = fmt.bits / 8;
  const std::size_t frames = data_size / (width * fmt.channels);
  std::vector<Signal> channels(fmt.channels, Signal(frames));
  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t c = 0; c < fmt.channels; ++c) {
      const std::uint8_t* p = data + (n * fmt.channels + c) * width;
      if (pcm16) {
        channels[c][n] = static_cast<std::int16_t>(U16(p)) / 32768.0;
      } else {
        channels[c][n] = std::bit_cast<float>(U32(p));
        if (!std::isfinite(channels[c][n]))
          Malformed(path, "non-finite float sample");
      }
    }
  }
  return AudioBuffer(std::move(channels), static_cast<int>(fmt.sample_rate));
}

WavWriteReport WriteWav(const AudioBuffer& buffer,
                        const std::filesystem::path& path, WavFormat format) {
  Require(buffer.channels() > 0, "cannot write a buffer with no channels");
  WavWriteReport report;
  const std::uint16_t channels = static_cast<std::uint16_t>(buffer.channels());
  const std::uint16_t bits = format == WavFormat::kPcm16 ? 16 : 32;
  const std::uint32_t block = channels * (bits / 8);
  const std::uint32_t data_size =
      static_cast<std::uint32_t>(buffer.length() * block);

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  PutTag(out, "RIFF");
  PutU32(out, 36 + data_size);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, format == WavFormat::kPcm16 ? kFormatPcm : kFormatFloat);
  PutU16(out, channels);
  PutU32(out, static_cast<std::uint32_t>(buffer.sample_rate()));
  PutU32(out, static_cast<std::uint32_t>(buffer.sample_rate()) * block);
  PutU16(out, static_cast<std::uint16_t>(block));
  PutU16(out, bits);
  PutTag(out, "data");
  PutU32(out, data_size);

  for (std::size_t n = 0; n < buffer.length(); ++n) {
    for (std::size_t c = 0; c < channels; ++c) {
      const double v = buffer.channel(c)[n];
      if (format == WavFormat::kPcm16) {
        double scaled = std::round(v * 32768.0);
        if (scaled > 32767.0 || scaled < -32768.0) {
          ++report.clipped_samples;
          scaled = std::clamp(scaled, -32768.0, 32767.0);
        }
        PutU16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
      } else {
        PutU32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
      }
    }
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) Fail(ErrorCode::kIoFailure, path.string() + ": cannot open for writing");
  file.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
  if (!file) Fail(ErrorCode::kIoFailure, path.string() + ": write failed");
  return report;
}

}  // namespace sdrkit
