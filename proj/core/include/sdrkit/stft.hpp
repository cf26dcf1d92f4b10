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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "sdrkit/audio.hpp"
#include "sdrkit/matrix.hpp"

namespace sdrkit {

using ComplexMatrix = Matrix<std::complex<double>>;

enum class Window { kHann };

struct StftConfig {
  std::size_t fft_size = 512;
  std::size_t hop = 256;
  Window window = Window::kHann;
  // Zero-pads fft_size/2 samples on both ends so frame t is centred on t*hop.
  bool center = true;

  // Throws kInvalidArgument unless 0 < hop <= fft_size and the window
  // satisfies constant overlap-add at this hop.
  void Validate() const;

  std::size_t bins() const noexcept { return fft_size / 2 + 1; }
  std::size_t padding() const noexcept { return center ? fft_size / 2 : 0; }
  std::size_t FrameCount(std::size_t signal_length) const;

  bool operator==(const StftConfig&) const = default;
};

struct Spectrogram {
  ComplexMatrix bins;  // [fft_size/2 + 1] x [frames]
  StftConfig config;
  int sample_rate = 0;
  std::size_t length = 0;  // samples of the analysed signal
};

// Periodic Hann window of length n.
std::vector<double> HannWindow(std::size_t n);

Spectrogram Stft(std::span<const double> x, const StftConfig& config,
                 int sample_rate);

// Least-squares overlap-add inverse; returns `spec.length` samples.
Signal Istft(const Spectrogram& spec);

// Adjoint of x -> Stft(x).bins with respect to the real inner products
// <x, y> and Re sum conj(A) B. Used to back-propagate through the analysis.
Signal StftAdjoint(const ComplexMatrix& grad, const StftConfig& config,
                   std::size_t length);

// Whole-signal unwindowed DFT as a single-column matrix [L/2 + 1] x [1].
ComplexMatrix FullDft(std::span<const double> x);
Signal FullDftAdjoint(const ComplexMatrix& grad, std::size_t length);

RealMatrix PowerMap(const ComplexMatrix& bins);

// Two-sided energy of a one-sided spectrum column set: interior bins count
// twice, DC and (for even fft sizes) Nyquist once.
double SpectralEnergy(const ComplexMatrix& bins, std::size_t fft_size);

}  // namespace sdrkit
