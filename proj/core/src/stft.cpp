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

#include "sdrkit/stft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "sdrkit/error.hpp"

namespace sdrkit {

std::vector<double> HannWindow(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                static_cast<double>(n));
  return w;
}

void StftConfig::Validate() const {
  Require(fft_size >= 2, "fft_size must be at least 2");
  Require(hop > 0 && hop <= fft_size, "hop must satisfy 0 < hop <= fft_size");
  const std::vector<double> w = HannWindow(fft_size);
  double lo = 1e300, hi = 0.0;
  for (std::size_t n = 0; n < hop; ++n) {
    double sum = 0.0;
    for (std::size_t k = n; k < fft_size; k += hop) sum += w[k];
    lo = std::min(lo, sum);
    hi = std::max(hi, sum);
  }
  Require(hi > 0.0 && hi - lo <= 1e-9 * hi,
          "window is not constant-overlap-add at hop " + std::to_string(hop) +
              " for fft_size " + std::to_string(fft_size));
}

std::size_t StftConfig::FrameCount(std::size_t signal_length) const {
  const std::size_t padded = signal_length + 2 * padding();
  if (padded < fft_size) return 0;
  return (padded - fft_size) / hop + 1;
}

Spectrogram Stft(std::span<const double> x, const StftConfig& config,
                 int sample_rate) {
  config.Validate();
  const std::size_t frames = config.FrameCount(x.size());
  if (frames == 0)
    Fail(ErrorCode::kTooShort, "signal of " + std::to_string(x.size()) +
                                   " samples is shorter than one frame");
  const std::size_t n = config.fft_size;
  const std::size_t pad = config.padding();
  const std::vector<double> w = HannWindow(n);

  Spectrogram spec{ComplexMatrix(config.bins(), frames), config, sample_rate,
                   x.size()};
  std::vector<double> frame(n);
  for (std::size_t t = 0; t < frames; ++t) {
    const std::size_t start = t * config.hop;  // in padded coordinates
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t p = start + i;
      const bool inside = p >= pad && p - pad < x.size();
      frame[i] = inside ? w[i] * x[p - pad] : 0.0;
    }
    fft::RealForward(frame, spec.bins.col(t));
  }
  return spec;
}

Signal Istft(const Spectrogram& spec) {
  const StftConfig& config = spec.config;
  config.Validate();
  Require(spec.bins.rows() == config.bins(),
          "spectrogram bin count does not match fft_size");
  const std::size_t n = config.fft_size;
  const std::size_t pad = config.padding();
  const std::size_t frames = spec.bins.cols();
  const std::size_t padded = (frames == 0 ? 0 : (frames - 1) * config.hop + n);
  const std::vector<double> w = HannWindow(n);

  std::vector<double> acc(padded, 0.0), norm(padded, 0.0), frame(n);
  for (std::size_t t = 0; t < frames; ++t) {
    fft::RealInverse(spec.bins.col(t), frame);
    const std::size_t start = t * config.hop;
    for (std::size_t i = 0; i < n; ++i) {
      acc[start + i] += w[i] * frame[i] / static_cast<double>(n);
      norm[start + i] += w[i] * w[i];
    }
  }
  const double floor = 1e-10 * *std::max_element(norm.begin(), norm.end());
  Signal out(spec.length, 0.0);
  for (std::size_t i = 0; i < spec.length; ++i) {
    const std::size_t p = i + pad;
    if (p < padded && norm[p] > floor) out[i] = acc[p] / norm[p];
  }
  return out;
}

Signal StftAdjoint(const ComplexMatrix& grad, const StftConfig& config,
                   std::size_t length) {
  Require(grad.rows() == config.bins(), "adjoint input bin count mismatch");
  Require(grad.cols() == config.FrameCount(length),
          "adjoint input frame count mismatch");
  const std::size_t n = config.fft_size;
  const std::size_t pad = config.padding();
  const std::vector<double> w = HannWindow(n);

  // Re sum_k conj(Y_k) X_k over one-sided bins equals sum_n z[n] frame[n]
  // with z[n] = Re sum_{k=0}^{N/2} Y_k e^{+2 pi i k n / N}. The Hermitian
  // inverse doubles interior bins, so halve them first.
  std::vector<std::complex<double>> bins(config.bins());
  std::vector<double> z(n);
  Signal out(length, 0.0);
  for (std::size_t t = 0; t < grad.cols(); ++t) {
    const auto col = grad.col(t);
    for (std::size_t k = 0; k < bins.size(); ++k) {
      const bool edge = k == 0 || (n % 2 == 0 && k == n / 2);
      bins[k] = edge ? col[k] : 0.5 * col[k];
    }
    fft::RealInverse(bins, z);
    const std::size_t start = t * config.hop;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t p = start + i;
      if (p >= pad && p - pad < length) out[p - pad] += w[i] * z[i];
    }
  }
  return out;
}

ComplexMatrix FullDft(std::span<const double> x) {
  Require(!x.empty(), "DFT of an empty signal");
  ComplexMatrix out(fft::BinCount(x.size()), 1);
  fft::RealForward(x, out.col(0));
  return out;
}

Signal FullDftAdjoint(const ComplexMatrix& grad, std::size_t length) {
  Require(grad.cols() == 1 && grad.rows() == fft::BinCount(length),
          "DFT adjoint shape mismatch");
  std::vector<std::complex<double>> bins(grad.rows());
  for (std::size_t k = 0; k < bins.size(); ++k) {
    const bool edge = k == 0 || (length % 2 == 0 && k == length / 2);
    bins[k] = edge ? grad(k, 0) : 0.5 * grad(k, 0);
  }
  Signal out(length);
  fft::RealInverse(bins, out);
  return out;
}

RealMatrix PowerMap(const ComplexMatrix& bins) {
  RealMatrix out(bins.rows(), bins.cols());
  for (std::size_t i = 0; i < bins.size(); ++i) out.flat()[i] = std::norm(bins.flat()[i]);
  return out;
}

double SpectralEnergy(const ComplexMatrix& bins, std::size_t fft_size) {
  double total = 0.0;
  for (std::size_t t = 0; t < bins.cols(); ++t) {
    for (std::size_t k = 0; k < bins.rows(); ++k) {
      const bool edge = k == 0 || (fft_size % 2 == 0 && k == fft_size / 2);
      total += (edge ? 1.0 : 2.0) * std::norm(bins(k, t));
    }
  }
  return total;
}

}  // namespace sdrkit
