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

#include <span>

#include "sdrkit/audio.hpp"

namespace sdrkit {

// Short-time objective intelligibility of `est` against `clean`.
//
// Pipeline: resample to 10 kHz; drop frames (256 samples, hop 128) more than
// 40 dB below the loudest clean frame; 512-point STFT of 256-sample Hann
// frames; 15 one-third-octave envelopes from 150 Hz; 30-frame segments with
// per-band energy normalization and clipping at -15 dB SDR; mean of
// envelope correlations. Result is clamped to [0, 1].
//
// Throws kTooShort when fewer than 30 frames survive silence removal and
// kDegenerate when the clean signal is silent.
double Stoi(std::span<const double> clean, std::span<const double> est, int sample_rate);

// Polyphase rational resampler with a 60 dB Kaiser-windowed sinc low-pass
// of unit DC gain; output length ceil(n * to / from).
Signal Resample(std::span<const double> x, int from_rate, int to_rate);

}  // namespace sdrkit
