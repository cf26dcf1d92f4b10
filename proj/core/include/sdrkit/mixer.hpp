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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdrkit/audio.hpp"

namespace sdrkit {

inline constexpr double kMinSirDb = -10.0;
inline constexpr double kMaxSirDb = 10.0;

struct MixSpec {
  double target_sir_db = 0.0;
  std::size_t ref_channel = 0;
  std::uint64_t seed = 0;
  double ssn_fraction = 0.3;

  void Validate() const;
};

// Binaural hearing-aid array: two microphones per ear.
struct ArrayGeometry {
  double interaural_m = 0.15;
  double lateral_offset_m = 0.015;
  double vertical_offset_m = 0.012;
};

// Names every violated range constraint (bounds inclusive); empty when the
// geometry is compliant.
std::vector<std::string> ValidateGeometry(const ArrayGeometry& g);

// Averaged Hann periodograms (fft_size points, 50% overlap) over every
// signal in the corpus; returns fft_size/2 + 1 power values.
std::vector<double> WelchPsd(std::span<const AudioBuffer> corpus, std::size_t fft_size = 512);

// Speech-shaped noise: seeded white Gaussian noise through a 1024-tap
// linear-phase FIR whose magnitude is the square root of the corpus Welch
// spectrum (channel 0 of each item). Output RMS is 1.
AudioBuffer GenerateSsn(std::span<const AudioBuffer> corpus, double duration_s,
                        std::uint64_t seed);

// Linear convolution, full length a + b - 1, via FFT.
Signal FftConvolve(std::span<const double> a, std::span<const double> b);

// out[c] = source * rir[c], trimmed to the source length.
AudioBuffer ConvolveRir(std::span<const double> source, const AudioBuffer& rir);

struct MixResult {
  AudioBuffer mixture;
  AudioBuffer scaled_noise;
  double gain = 1.0;
  double achieved_sir_db = 0.0;
};

// Scales noise so the reference-channel SIR equals spec.target_sir_db and
// adds it to the clean image on every channel.
MixResult MixAtSir(const AudioBuffer& clean_img, const AudioBuffer& noise_img,
                   const MixSpec& spec);

enum class SirCalibration { kPostRir, kPreRir };

struct SpatialMix {
  AudioBuffer clean_image;
  MixResult mix;
};

// Convolves dry sources with their RIRs and mixes. kPostRir levels the
// reverberant images at the reference microphone; kPreRir levels the dry
// sources and applies that gain to the noise image.
SpatialMix MixSources(const AudioBuffer& clean_dry, const AudioBuffer& noise_dry,
                      const AudioBuffer& rir_clean, const AudioBuffer& rir_noise,
                      const MixSpec& spec,
                      SirCalibration calibration = SirCalibration::kPostRir);

// One line of the mixture manifest (JSON lines).
struct ManifestEntry {
  std::string clean_path;
  std::string noise_path;
  std::string rir_clean_path;
  std::string rir_noise_path;
  double target_sir_db = 0.0;
  std::uint64_t seed = 0;
  ArrayGeometry geometry;
  // Optional metadata carried through untouched.
  std::optional<std::string> noise_type;  // "ssn" or "ecological"
  std::optional<double> rt60_s;
  std::optional<std::array<double, 3>> room_m;
};

ManifestEntry ParseManifestLine(const std::string& line);
std::string ManifestLineJson(const ManifestEntry& entry);

struct ManifestPlanInputs {
  std::vector<std::string> clean;
  std::vector<std::string> ssn;
  std::vector<std::string> ecological;
  std::vector<std::string> rirs;  // pairs are drawn independently for clean and noise
  std::size_t count = 0;
  std::uint64_t seed = 0;
  double ssn_fraction = 0.3;
};

// Samples a manifest: SSN noise for a `ssn_fraction` share of items,
// SIR uniform in [-10, 10] dB, geometry uniform within the compliant ranges,
// RT60 in [0.15, 0.4] s and room size within 3-8 x 3-5 x 2.5-3 m as metadata.
std::vector<ManifestEntry> PlanManifest(const ManifestPlanInputs& inputs);

}  // namespace sdrkit
