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
#include <span>
#include <vector>

namespace sdrkit {

using Signal = std::vector<double>;

// Multichannel sampled signal. All channels share one length; samples are
// finite; sample_rate is positive. The constructor enforces all three.
class AudioBuffer {
 public:
  AudioBuffer() = default;
  AudioBuffer(std::vector<Signal> channels, int sample_rate);
  AudioBuffer(std::size_t channels, std::size_t length, int sample_rate);

  static AudioBuffer Mono(Signal samples, int sample_rate);

  std::size_t channels() const noexcept { return channels_.size(); }
  std::size_t length() const noexcept {
    return channels_.empty() ? 0 : channels_.front().size();
  }
  int sample_rate() const noexcept { return sample_rate_; }
  double duration_seconds() const noexcept {
    return sample_rate_ > 0 ? static_cast<double>(length()) / sample_rate_ : 0.0;
  }

  std::span<const double> channel(std::size_t c) const;
  std::span<double> channel(std::size_t c);

  const std::vector<Signal>& data() const noexcept { return channels_; }

  bool operator==(const AudioBuffer&) const = default;

 private:
  std::vector<Signal> channels_;
  int sample_rate_ = 0;
};

double Energy(std::span<const double> x);
double Dot(std::span<const double> a, std::span<const double> b);

}  // namespace sdrkit
