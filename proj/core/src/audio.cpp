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

#include "sdrkit/audio.hpp"

#include <cmath>
#include <string>

#include "sdrkit/error.hpp"

namespace sdrkit {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kMissingFile: return "missing_file";
    case ErrorCode::kIoFailure: return "io_failure";
    case ErrorCode::kMalformedHeader: return "malformed_header";
    case ErrorCode::kUnsupportedCodec: return "unsupported_codec";
    case ErrorCode::kSampleRateMismatch: return "sample_rate_mismatch";
    case ErrorCode::kTooShort: return "too_short";
    case ErrorCode::kDegenerate: return "degenerate";
  }
  return "unknown";
}

AudioBuffer::AudioBuffer(std::vector<Signal> channels, int sample_rate)
    : channels_(std::move(channels)), sample_rate_(sample_rate) {
  Require(sample_rate_ > 0, "sample rate must be positive");
  for (const Signal& ch : channels_) {
    Require(ch.size() == channels_.front().size(),
            "all channels must share one length");
    for (double v : ch) Require(std::isfinite(v), "samples must be finite");
  }
}

AudioBuffer::AudioBuffer(std::size_t channels, std::size_t length,
                         int sample_rate)
    : channels_(channels, Signal(length, 0.0)), sample_rate_(sample_rate) {
  Require(sample_rate_ > 0, "sample rate must be positive");
}

AudioBuffer AudioBuffer::Mono(Signal samples, int sample_rate) {
  std::vector<Signal> ch;
  ch.push_back(std::move(samples));
  return AudioBuffer(std::move(ch), sample_rate);
}

std::span<const double> AudioBuffer::channel(std::size_t c) const {
  Require(c < channels_.size(),
          "channel index " + std::to_string(c) + " out of range");
  return channels_[c];
}

std::span<double> AudioBuffer::channel(std::size_t c) {
  Require(c < channels_.size(),
          "channel index " + std::to_string(c) + " out of range");
  return channels_[c];
}

double Energy(std::span<const double> x) { return Dot(x, x); }

double Dot(std::span<const double> a, std::span<const double> b) {
  Require(a.size() == b.size(), "length mismatch in inner product");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace sdrkit
