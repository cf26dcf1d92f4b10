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

#pragma once

#include <cstddef>
#include <filesystem>

#include "sdrkit/audio.hpp"

namespace sdrkit {

enum class WavFormat { kPcm16, kFloat32 };

struct WavWriteReport {
  // Samples outside [-1, 1) that were clipped in PCM16 mode.
  std::size_t clipped_samples = 0;
};

// Reads a RIFF/WAVE file holding 16-bit PCM or 32-bit IEEE float samples
// (plain or WAVE_FORMAT_EXTENSIBLE). PCM16 is scaled by 1/32768.
AudioBuffer ReadWav(const std::filesystem::path& path);

WavWriteReport WriteWav(const AudioBuffer& buffer,
                        const std::filesystem::path& path,
                        WavFormat format = WavFormat::kFloat32);

}  // namespace sdrkit
