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
#include <iosfwd>

#include "sdrkit/decomposition.hpp"
#include "sdrkit/matrix.hpp"
#include "sdrkit/scales.hpp"

namespace sdrkit {

// Nonnegative weights over [bins_or_bands x frames]. When `normalized` the
// entries sum to one (globally for SIR softmax maps, per frame for ANSI).
struct WeightMap {
  RealMatrix w;
  bool normalized = false;
};

// w = |S|^gamma computed from a clean power map (|S|^2), unnormalized.
WeightMap WeightsSpectralMagnitude(const RealMatrix& clean_power, double gamma);

// Band importance broadcast over frames; each column sums to one.
WeightMap WeightsAnsi(const BandImportance& importance, std::size_t frames,
                      std::size_t target_bands = kThirdOctaveBands);

enum class SirWeighting {
  kNegSir,     // softmax of -SIR in dB
  kNegLogSir,  // softmax of -ln(SIR): normalized reciprocal linear SIR
};

// kNegSir expects SIR in dB; kNegLogSir expects strictly positive linear
// power ratios. Both return a map summing to one over all entries.
WeightMap WeightsSirSoftmax(const RealMatrix& sir, SirWeighting variant);

inline constexpr ClampRange kSirWeightClamp{-60.0, 60.0};

// Per-bin SIR in dB from (possibly band-pooled) power maps, floored and
// clamped to kSirWeightClamp.
RealMatrix SirMapDb(const RealMatrix& target_power, const RealMatrix& interf_power);

RealMatrix DbToLinear(const RealMatrix& db);

// CSV rows "band,frame,weight".
void WriteWeightMapCsv(std::ostream& out, const WeightMap& map);

}  // namespace sdrkit
