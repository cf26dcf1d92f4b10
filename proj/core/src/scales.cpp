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

#include "sdrkit/scales.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "sdrkit/error.hpp"

namespace sdrkit {

Filterbank Filterbank::Identity(std::size_t bins, double bin_hz) {
  Filterbank fb{RealMatrix(bins, bins), {}, FilterbankKind::kIdentity};
  for (std::size_t k = 0; k < bins; ++k) {
    fb.weights(k, k) = 1.0;
    fb.band_centers.push_back(static_cast<double>(k) * bin_hz);
  }
  return fb;
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

Filterbank MelFilterbank(std::size_t fft_size, int sample_rate, std::size_t bands,
                         double f_min, double f_max) {
  Require(fft_size >= 2, "fft_size must be at least 2");
  Require(sample_rate > 0, "sample rate must be positive");
  Require(bands >= 1, "Mel filterbank needs at least one band");
  Require(f_min >= 0.0 && f_min < f_max && f_max <= sample_rate / 2.0,
          "Mel range must satisfy 0 <= f_min < f_max <= sample_rate / 2");

  const double mel_lo = HzToMel(f_min);
  const double step = (HzToMel(f_max) - mel_lo) / static_cast<double>(bands + 1);
  std::vector<double> edges(bands + 2);
  for (std::size_t i = 0; i < edges.size(); ++i)
    edges[i] = MelToHz(mel_lo + step * static_cast<double>(i));
  edges.front() = f_min;
  edges.back() = f_max;

  const std::size_t bins = fft_size / 2 + 1;
  const double bin_hz = static_cast<double>(sample_rate) / static_cast<double>(fft_size);
  Filterbank fb{RealMatrix(bands, bins), {}, FilterbankKind::kMel};
  for (std::size_t b = 0; b < bands; ++b) {
    const double lo = edges[b], mid = edges[b + 1], hi = edges[b + 2];
    fb.band_centers.push_back(mid);
    bool any = false;
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * bin_hz;
      double w = 0.0;
      if (f > lo && f <= mid) w = (f - lo) / (mid - lo);
      else if (f > mid && f < hi) w = (hi - f) / (hi - mid);
      fb.weights(b, k) = w;
      any = any || w > 0.0;
    }
    if (!any)
      Fail(ErrorCode::kInvalidArgument,
           "Mel band " + std::to_string(b) + " is too narrow to contain a bin");
  }
  return fb;
}

double ThirdOctaveCenter(std::size_t band) {
  return 1000.0 * std::pow(2.0, (static_cast<double>(band) - 8.0) / 3.0);
}

Filterbank ThirdOctaveBands(std::size_t fft_size, int sample_rate) {
  Require(fft_size >= 2, "fft_size must be at least 2");
  if (sample_rate < 16000)
    Fail(ErrorCode::kInvalidArgument,
         "sample rate " + std::to_string(sample_rate) +
             " Hz is too low for the 8 kHz one-third-octave band");
  const std::size_t bins = fft_size / 2 + 1;
  const double bin_hz = static_cast<double>(sample_rate) / static_cast<double>(fft_size);
  Filterbank fb{RealMatrix(kThirdOctaveBands, bins), {}, FilterbankKind::kThirdOctave};
  for (std::size_t b = 0; b < kThirdOctaveBands; ++b) {
    const double c = ThirdOctaveCenter(b);
    const double lo = c * std::pow(2.0, -1.0 / 6.0);
    const double hi = c * std::pow(2.0, 1.0 / 6.0);
    fb.band_centers.push_back(kThirdOctaveNominalHz[b]);
    bool any = false;
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * bin_hz;
      if (f >= lo && f < hi) {
        fb.weights(b, k) = 1.0;
        any = true;
      }
    }
    if (!any)
      Fail(ErrorCode::kInvalidArgument,
           "one-third-octave band " + std::to_string(b) +
               " is too narrow to contain a bin at fft_size " + std::to_string(fft_size));
  }
  return fb;
}

BandImportance AnsiBandImportance() {
  static constexpr std::array<double, kThirdOctaveBands> kTable = {
      0.0083, 0.0095, 0.0150, 0.0289, 0.0440, 0.0578, 0.0653, 0.0711, 0.0818,
      0.0844, 0.0882, 0.0898, 0.0868, 0.0844, 0.0771, 0.0527, 0.0364, 0.0185};
  const double total = std::accumulate(kTable.begin(), kTable.end(), 0.0);
  BandImportance out;
  for (std::size_t b = 0; b < kThirdOctaveBands; ++b) {
    out.values[b] = kTable[b] / total;
    out.band_centers[b] = kThirdOctaveNominalHz[b];
  }
  return out;
}

RealMatrix BandPool(const RealMatrix& power, const Filterbank& fb) {
  if (power.rows() != fb.bins())
    Fail(ErrorCode::kInvalidArgument,
         "band pooling: power map has " + std::to_string(power.rows()) +
             " bins, filterbank expects " + std::to_string(fb.bins()));
  RealMatrix out(fb.bands(), power.cols());
  for (std::size_t t = 0; t < power.cols(); ++t) {
    const auto p = power.col(t);
    for (std::size_t b = 0; b < fb.bands(); ++b) {
      double acc = 0.0;
      for (std::size_t f = 0; f < fb.bins(); ++f) acc += fb.weights(b, f) * p[f];
      out(b, t) = acc;
    }
  }
  return out;
}

RealMatrix BandPoolAdjoint(const RealMatrix& grad, const Filterbank& fb) {
  Require(grad.rows() == fb.bands(), "band pooling adjoint: band count mismatch");
  RealMatrix out(fb.bins(), grad.cols());
  for (std::size_t t = 0; t < grad.cols(); ++t) {
    for (std::size_t b = 0; b < fb.bands(); ++b) {
      const double g = grad(b, t);
      if (g == 0.0) continue;
      for (std::size_t f = 0; f < fb.bins(); ++f) out(f, t) += fb.weights(b, f) * g;
    }
  }
  return out;
}

void WriteFilterbankCsv(std::ostream& out, const Filterbank& fb) {
  out << "band,bin,weight\n";
  for (std::size_t b = 0; b < fb.bands(); ++b)
    for (std::size_t f = 0; f < fb.bins(); ++f)
      if (fb.weights(b, f) != 0.0) out << b << ',' << f << ',' << fb.weights(b, f) << '\n';
}

}  // namespace sdrkit
