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

#include <limits>
#include <span>

#include "sdrkit/audio.hpp"
#include "sdrkit/matrix.hpp"
#include "sdrkit/scales.hpp"
#include "sdrkit/stft.hpp"

namespace sdrkit {

// est = s_proj + e_interf + e_artif, with s_proj the projection of est onto
// the clean reference and s_proj + e_interf its projection onto
// span{clean, noise}.
struct Decomposition {
  Signal s_proj;
  Signal e_interf;
  Signal e_artif;

  Signal e_dist() const;  // e_interf + e_artif
  std::size_t length() const noexcept { return s_proj.size(); }
};

// Gram-matrix condition number above which clean and noise count as collinear.
inline constexpr double kCollinearityThreshold = 1e12;

// e_interf or e_artif with energy at or below this fraction of the
// estimate's energy is round-off and is returned as exact zeros.
inline constexpr double kRoundoffEnergy = 1e-24;

Decomposition Decompose(std::span<const double> est, std::span<const double> clean,
                        std::span<const double> noise);

inline constexpr double kPositiveInfinityDb = std::numeric_limits<double>::infinity();

struct RatioReport {
  double sdr_db = 0.0;
  double sir_db = 0.0;
  double sar_db = 0.0;
};

// 10 log10(num / den). An exactly-zero denominator yields +inf, an
// exactly-zero numerator -inf (also when both vanish).
double RatioDb(double num, double den);

RatioReport TimeRatios(const Decomposition& d);

struct ClampRange {
  double lo = -60.0;
  double hi = 60.0;

  bool operator==(const ClampRange&) const = default;
};

// Relative energy floor applied to per-bin ratio terms.
inline constexpr double kEnergyFloor = 1e-12;

// Per-bin dB value 10 log10(num / max(den, floor)) clamped to range. An
// exactly-zero denominator gives range.hi, otherwise a zero numerator range.lo.
double ClampedBinDb(double num, double den, double floor, ClampRange range);

enum class SpectralDomain { kFrequency, kTimeFrequency };

struct BinwiseRatios {
  RealMatrix sdr_db;  // [bands x frames], clamped
  RealMatrix sir_db;
  RealMatrix sar_db;
  double mean_sdr_db = 0.0;
  double mean_sir_db = 0.0;
  double mean_sar_db = 0.0;
};

// Per-bin (or per-band, when `fb` is given) SDR/SIR/SAR maps and their
// arithmetic means. kFrequency uses the whole-signal DFT as one frame; for it
// `fb` must have length/2 + 1 columns.
BinwiseRatios ComputeBinwiseRatios(const Decomposition& d, SpectralDomain domain,
                                   const StftConfig& config, int sample_rate,
                                   const Filterbank* fb = nullptr,
                                   ClampRange range = {});

}  // namespace sdrkit
