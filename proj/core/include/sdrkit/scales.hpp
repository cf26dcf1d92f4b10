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

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "sdrkit/matrix.hpp"

namespace sdrkit {

enum class FilterbankKind { kMel, kThirdOctave, kIdentity };

// Nonnegative pooling matrix [bands x freq_bins]; rows sorted by centre
// frequency, every row has at least one positive entry.
struct Filterbank {
  RealMatrix weights;
  std::vector<double> band_centers;  // Hz
  FilterbankKind kind = FilterbankKind::kMel;

  std::size_t bands() const noexcept { return weights.rows(); }
  std::size_t bins() const noexcept { return weights.cols(); }

  // One band per bin; pooling with it is the identity map.
  static Filterbank Identity(std::size_t bins, double bin_hz = 1.0);
};

struct MelOptions {
  std::size_t bands = 18;
  double f_min = 50.0;
  double f_max = 8000.0;

  bool operator==(const MelOptions&) const = default;
};

double HzToMel(double hz);
double MelToHz(double mel);

// Triangular filters with centres equally spaced on the Mel axis; each
// triangle peaks at 1 and reaches 0 at its neighbours' centres.
Filterbank MelFilterbank(std::size_t fft_size, int sample_rate, std::size_t bands,
                         double f_min, double f_max);
inline Filterbank MelFilterbank(std::size_t fft_size, int sample_rate,
                                const MelOptions& opt) {
  return MelFilterbank(fft_size, sample_rate, opt.bands, opt.f_min, opt.f_max);
}

inline constexpr std::size_t kThirdOctaveBands = 18;
inline constexpr std::array<double, kThirdOctaveBands> kThirdOctaveNominalHz = {
    160, 200, 250, 315, 400, 500, 630, 800, 1000,
    1250, 1600, 2000, 2500, 3150, 4000, 5000, 6300, 8000};

// Exact centre of band k (0-based): 1000 * 2^((k - 8) / 3).
double ThirdOctaveCenter(std::size_t band);

// 18 boxcar bands, 160..8000 Hz. A bin belongs to the band whose
// [lower, upper) edge interval holds its centre frequency.
Filterbank ThirdOctaveBands(std::size_t fft_size, int sample_rate);

struct BandImportance {
  std::array<double, kThirdOctaveBands> values{};
  std::array<double, kThirdOctaveBands> band_centers{};
};

// One-third-octave band importance for average speech (ANSI S3.5-1997,
// Table 3), renormalized to sum to one.
BandImportance AnsiBandImportance();

// out[b, t] = sum_f fb[b, f] * power[f, t].
RealMatrix BandPool(const RealMatrix& power, const Filterbank& fb);

// Transpose of BandPool: out[f, t] = sum_b fb[b, f] * grad[b, t].
RealMatrix BandPoolAdjoint(const RealMatrix& grad, const Filterbank& fb);

// CSV rows "band,bin,weight" for every nonzero weight.
void WriteFilterbankCsv(std::ostream& out, const Filterbank& fb);

}  // namespace sdrkit
