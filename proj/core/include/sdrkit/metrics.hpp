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

#include <optional>
#include <span>
#include <string>

#include "sdrkit/audio.hpp"
#include "sdrkit/decomposition.hpp"
#include "sdrkit/scales.hpp"
#include "sdrkit/stft.hpp"

namespace sdrkit {

struct MetricConfig {
  StftConfig stft;
  MelOptions mel;
  double gamma = 0.2;
  ClampRange fw_clamp{-10.0, 35.0};
  std::size_t ref_channel = 0;
  bool with_stoi = true;
};

enum class FwKind { kSdr, kSir, kSar };

// Frequency-weighted segmental ratio: per frame, the |S|^gamma-weighted mean
// of clamped per-band dB ratios over Mel bands, then the mean over frames
// with nonzero clean weight. |S| is the band magnitude of the clean source.
double FwRatio(std::span<const double> est, std::span<const double> clean,
               std::span<const double> noise, FwKind which, int sample_rate,
               const MetricConfig& config = {});

struct FwReport {
  double sdr_db = 0.0;
  double sir_db = 0.0;
  double sar_db = 0.0;
};

// All three FW ratios from one decomposition.
FwReport FwRatios(const Decomposition& d, std::span<const double> clean, int sample_rate,
                  const MetricConfig& config = {});

struct MetricReport {
  double sir_in = 0.0;
  double sir_out = 0.0;
  double sar_out = 0.0;
  double sdr_out = 0.0;
  double fw_sir_in = 0.0;
  double fw_sir_out = 0.0;
  double fw_sar_out = 0.0;
  double fw_sdr_out = 0.0;
  std::optional<double> stoi_in;
  std::optional<double> stoi_out;
};

// `*_in` evaluates the mixture as the estimate, `*_out` the enhanced signal.
MetricReport Report(std::span<const double> mixture, std::span<const double> est,
                    std::span<const double> clean, std::span<const double> noise,
                    int sample_rate, const MetricConfig& config = {});

// Multichannel inputs are reduced to config.ref_channel; sample rates and
// lengths must agree.
MetricReport Report(const AudioBuffer& mixture, const AudioBuffer& est,
                    const AudioBuffer& clean, const AudioBuffer& noise,
                    const MetricConfig& config = {});

// Infinite values serialize as the strings "inf" / "-inf".
std::string ReportToJson(const MetricReport& report);

// Column order: SIR_out, SAR_out, SDR_out, FW-SIR_out, FW-SAR_out,
// FW-SDR_out, STOI_out. Numbers carry six significant digits.
std::string ReportCsvHeader();
std::string ReportToCsvRow(const MetricReport& report);

// Six-significant-digit rendering shared by the CSV writers; "inf"/"-inf"
// for infinities and an empty field for missing values.
std::string FormatCsvNumber(std::optional<double> value);

}  // namespace sdrkit
