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

#include "sdrkit/mixer.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <json.hpp>

#include "fft.hpp"
#include "sdrkit/error.hpp"
#include "sdrkit/stft.hpp"

namespace sdrkit {
namespace {

constexpr std::size_t kSsnFirLength = 1024;
constexpr double kMinCorpusSeconds = 30.0;

struct Range {
  const char* name;
  double lo;
  double hi;
};
constexpr Range kInteraural{"interaural", 0.12, 0.18};
constexpr Range kLateral{"lateral_offset", 0.01, 0.02};
constexpr Range kVertical{"vertical_offset", 0.01, 0.015};

void CheckRange(const Range& r, double v, std::vector<std::string>& out) {
  if (!(v >= r.lo && v <= r.hi))
    out.push_back(std::string(r.name) + " " + std::to_string(v) + " m out of [" +
                  std::to_string(r.lo) + ", " + std::to_string(r.hi) + "]");
}

std::size_t NextPow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

void MixSpec::Validate() const {
  Require(target_sir_db >= kMinSirDb && target_sir_db <= kMaxSirDb,
          "target SIR " + std::to_string(target_sir_db) + " dB outside [-10, 10]");
  Require(ssn_fraction >= 0.0 && ssn_fraction <= 1.0, "ssn_fraction must lie in [0, 1]");
}

std::vector<std::string> ValidateGeometry(const ArrayGeometry& g) {
  std::vector<std::string> out;
  CheckRange(kInteraural, g.interaural_m, out);
  CheckRange(kLateral, g.lateral_offset_m, out);
  CheckRange(kVertical, g.vertical_offset_m, out);
  return out;
}

std::vector<double> WelchPsd(std::span<const AudioBuffer> corpus, std::size_t fft_size) {
  Require(!corpus.empty(), "Welch estimate over an empty corpus");
  const std::size_t hop = fft_size / 2;
  const std::vector<double> w = HannWindow(fft_size);
  std::vector<double> psd(fft_size / 2 + 1, 0.0);
  std::vector<double> frame(fft_size);
  std::vector<std::complex<double>> spec(psd.size());
  std::size_t segments = 0;
  for (const AudioBuffer& item : corpus) {
    const auto x = item.channel(0);
    for (std::size_t start = 0; start + fft_size <= x.size(); start += hop) {
      for (std::size_t i = 0; i < fft_size; ++i) frame[i] = w[i] * x[start + i];
      fft::RealForward(frame, spec);
      for (std::size_t k = 0; k < psd.size(); ++k) psd[k] += std::norm(spec[k]);
      ++segments;
    }
  }
  if (segments == 0) Fail(ErrorCode::kTooShort, "corpus shorter than one Welch segment");
  for (double& p : psd) p /= static_cast<double>(segments);
  return psd;
}

AudioBuffer GenerateSsn(std::span<const AudioBuffer> corpus, double duration_s,
                        std::uint64_t seed) {
  if (corpus.empty()) Fail(ErrorCode::kInvalidArgument, "SSN: empty corpus");
  Require(duration_s > 0.0, "SSN duration must be positive");
  const int sr = corpus.front().sample_rate();
  double total = 0.0;
  for (const AudioBuffer& item : corpus) {
    if (item.sample_rate() != sr)
      Fail(ErrorCode::kSampleRateMismatch, "SSN: corpus mixes sample rates");
    Require(item.channels() > 0, "SSN: corpus item without channels");
    total += item.duration_seconds();
  }
  if (total < kMinCorpusSeconds)
    Fail(ErrorCode::kTooShort, "SSN: corpus holds " + std::to_string(total) +
                                   " s, at least 30 s required");

  // Magnitude response on the FIR's DFT grid, interpolated from the
  // half-resolution Welch grid.
  const std::vector<double> psd = WelchPsd(corpus, kSsnFirLength / 2);
  std::vector<std::complex<double>> response(kSsnFirLength / 2 + 1);
  for (std::size_t k = 0; k < response.size(); ++k) {
    const double pos = static_cast<double>(k) / 2.0;
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, psd.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    response[k] = std::sqrt((1.0 - frac) * psd[lo] + frac * psd[hi]);
  }
  std::vector<double> zero_phase(kSsnFirLength);
  fft::RealInverse(response, zero_phase);
  std::vector<double> fir(kSsnFirLength);
  for (std::size_t n = 0; n < kSsnFirLength; ++n) {
    const std::size_t src = (n + kSsnFirLength / 2) % kSsnFirLength;
    const double taper =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                             static_cast<double>(kSsnFirLength));
    fir[n] = taper * zero_phase[src] / static_cast<double>(kSsnFirLength);
  }

  const std::size_t length = static_cast<std::size_t>(std::llround(duration_s * sr));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Signal white(length + kSsnFirLength - 1);
  for (double& v : white) v = gauss(rng);
  const Signal filtered = FftConvolve(white, fir);

  // Keep only the steady-state part of the convolution.
  Signal out(filtered.begin() + (kSsnFirLength - 1),
             filtered.begin() + (kSsnFirLength - 1 + length));
  const double rms = std::sqrt(Energy(out) / static_cast<double>(out.size()));
  if (rms == 0.0) Fail(ErrorCode::kDegenerate, "SSN: corpus spectrum is silent");
  for (double& v : out) v /= rms;
  return AudioBuffer::Mono(std::move(out), sr);
}

Signal FftConvolve(std::span<const double> a, std::span<const double> b) {
  Require(!a.empty() && !b.empty(), "convolution of an empty signal");
  const std::size_t full = a.size() + b.size() - 1;
  const std::size_t n = NextPow2(full);
  std::vector<double> pa(n, 0.0), pb(n, 0.0);
  std::copy(a.begin(), a.end(), pa.begin());
  std::copy(b.begin(), b.end(), pb.begin());
  std::vector<std::complex<double>> fa(n / 2 + 1), fb(n / 2 + 1);
  fft::RealForward(pa, fa);
  fft::RealForward(pb, fb);
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
  fft::RealInverse(fa, pa);
  Signal out(full);
  for (std::size_t i = 0; i < full; ++i) out[i] = pa[i] / static_cast<double>(n);
  return out;
}

AudioBuffer ConvolveRir(std::span<const double> source, const AudioBuffer& rir) {
  if (rir.channels() == 0 || rir.length() == 0)
    Fail(ErrorCode::kInvalidArgument, "RIR is empty");
  Require(!source.empty(), "cannot convolve an empty source");
  std::vector<Signal> out;
  out.reserve(rir.channels());
  for (std::size_t c = 0; c < rir.channels(); ++c) {
    Signal y = FftConvolve(source, rir.channel(c));
    y.resize(source.size());
    out.push_back(std::move(y));
  }
  return AudioBuffer(std::move(out), rir.sample_rate());
}

MixResult MixAtSir(const AudioBuffer& clean_img, const AudioBuffer& noise_img,
                   const MixSpec& spec) {
  spec.Validate();
  Require(clean_img.channels() == noise_img.channels() &&
              clean_img.length() == noise_img.length(),
          "mix: clean and noise images must have equal shapes");
  if (clean_img.sample_rate() != noise_img.sample_rate())
    Fail(ErrorCode::kSampleRateMismatch, "mix: sample rates differ");
  Require(spec.ref_channel < clean_img.channels(), "mix: reference channel out of range");
  const double clean_e = Energy(clean_img.channel(spec.ref_channel));
  const double noise_e = Energy(noise_img.channel(spec.ref_channel));
  if (clean_e == 0.0 || noise_e == 0.0)
    Fail(ErrorCode::kDegenerate, "mix: reference channel has zero energy");

  const double gain = std::sqrt(clean_e / (noise_e * std::pow(10.0, spec.target_sir_db / 10.0)));
  std::vector<Signal> mixture(clean_img.channels()), scaled(clean_img.channels());
  for (std::size_t c = 0; c < clean_img.channels(); ++c) {
    const auto s = clean_img.channel(c);
    const auto n = noise_img.channel(c);
    scaled[c].resize(n.size());
    mixture[c].resize(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
      scaled[c][i] = gain * n[i];
      mixture[c][i] = s[i] + scaled[c][i];
    }
  }
  MixResult r{AudioBuffer(std::move(mixture), clean_img.sample_rate()),
              AudioBuffer(std::move(scaled), clean_img.sample_rate()), gain, 0.0};
  r.achieved_sir_db =
      10.0 * std::log10(clean_e / Energy(r.scaled_noise.channel(spec.ref_channel)));
  return r;
}

SpatialMix MixSources(const AudioBuffer& clean_dry, const AudioBuffer& noise_dry,
                      const AudioBuffer& rir_clean, const AudioBuffer& rir_noise,
                      const MixSpec& spec, SirCalibration calibration) {
  Require(clean_dry.length() == noise_dry.length(),
          "mix: dry clean and noise must have equal lengths");
  const int sr = clean_dry.sample_rate();
  for (const AudioBuffer* b : {&noise_dry, &rir_clean, &rir_noise})
    if (b->sample_rate() != sr)
      Fail(ErrorCode::kSampleRateMismatch, "mix: sources and RIRs differ in sample rate");
  Require(rir_clean.channels() == rir_noise.channels(),
          "mix: clean and noise RIRs must have the same channel count");

  AudioBuffer clean_img = ConvolveRir(clean_dry.channel(0), rir_clean);
  AudioBuffer noise_img = ConvolveRir(noise_dry.channel(0), rir_noise);
  if (calibration == SirCalibration::kPostRir)
    return {clean_img, MixAtSir(clean_img, noise_img, spec)};

  // Pre-RIR: level the dry sources, then apply the same gain to the image.
  const MixResult dry = MixAtSir(AudioBuffer::Mono(Signal(clean_dry.channel(0).begin(),
                                                          clean_dry.channel(0).end()), sr),
                                 AudioBuffer::Mono(Signal(noise_dry.channel(0).begin(),
                                                          noise_dry.channel(0).end()), sr),
                                 MixSpec{spec.target_sir_db, 0, spec.seed, spec.ssn_fraction});
  std::vector<Signal> mixture(clean_img.channels()), scaled(clean_img.channels());
  for (std::size_t c = 0; c < clean_img.channels(); ++c) {
    const auto s = clean_img.channel(c);
    const auto n = noise_img.channel(c);
    for (std::size_t i = 0; i < n.size(); ++i) {
      scaled[c].push_back(dry.gain * n[i]);
      mixture[c].push_back(s[i] + scaled[c].back());
    }
  }
  MixResult r{AudioBuffer(std::move(mixture), sr), AudioBuffer(std::move(scaled), sr), dry.gain,
              dry.achieved_sir_db};
  return {std::move(clean_img), std::move(r)};
}

ManifestEntry ParseManifestLine(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kMalformedHeader, std::string("manifest line is not JSON: ") + e.what());
  }
  try {
    ManifestEntry e;
    e.clean_path = j.at("clean_path").get<std::string>();
    e.noise_path = j.at("noise_path").get<std::string>();
    e.rir_clean_path = j.at("rir_clean_path").get<std::string>();
    e.rir_noise_path = j.at("rir_noise_path").get<std::string>();
    e.target_sir_db = j.at("target_sir_db").get<double>();
    e.seed = j.at("seed").get<std::uint64_t>();
    const auto& g = j.at("geometry");
    e.geometry = {g.at("interaural_m").get<double>(), g.at("lateral_offset_m").get<double>(),
                  g.at("vertical_offset_m").get<double>()};
    if (j.contains("noise_type")) e.noise_type = j["noise_type"].get<std::string>();
    if (j.contains("rt60_s")) e.rt60_s = j["rt60_s"].get<double>();
    if (j.contains("room_m")) e.room_m = j["room_m"].get<std::array<double, 3>>();
    return e;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kMalformedHeader, std::string("manifest line: ") + e.what());
  }
}

std::string ManifestLineJson(const ManifestEntry& e) {
  nlohmann::ordered_json j;
  j["clean_path"] = e.clean_path;
  j["noise_path"] = e.noise_path;
  j["rir_clean_path"] = e.rir_clean_path;
  j["rir_noise_path"] = e.rir_noise_path;
  j["target_sir_db"] = e.target_sir_db;
  j["seed"] = e.seed;
  j["geometry"] = {{"interaural_m", e.geometry.interaural_m},
                   {"lateral_offset_m", e.geometry.lateral_offset_m},
                   {"vertical_offset_m", e.geometry.vertical_offset_m}};
  if (e.noise_type) j["noise_type"] = *e.noise_type;
  if (e.rt60_s) j["rt60_s"] = *e.rt60_s;
  if (e.room_m) j["room_m"] = *e.room_m;
  return j.dump();
}

std::vector<ManifestEntry> PlanManifest(const ManifestPlanInputs& in) {
  Require(!in.clean.empty(), "manifest plan needs clean files");
  Require(!in.rirs.empty(), "manifest plan needs RIR files");
  Require(in.ssn_fraction >= 0.0 && in.ssn_fraction <= 1.0, "ssn_fraction must lie in [0, 1]");
  Require(!in.ssn.empty() || in.ssn_fraction == 0.0, "manifest plan needs SSN files");
  Require(!in.ecological.empty() || in.ssn_fraction == 1.0,
          "manifest plan needs ecological noise files");

  std::mt19937_64 rng(in.seed);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  auto pick = [&](const std::vector<std::string>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  };

  // Exact share of SSN items, placed at random positions.
  const std::size_t ssn_count =
      static_cast<std::size_t>(std::llround(in.ssn_fraction * static_cast<double>(in.count)));
  std::vector<bool> is_ssn(in.count, false);
  std::fill(is_ssn.begin(), is_ssn.begin() + static_cast<std::ptrdiff_t>(ssn_count), true);
  std::shuffle(is_ssn.begin(), is_ssn.end(), rng);

  std::vector<ManifestEntry> out;
  for (std::size_t i = 0; i < in.count; ++i) {
    ManifestEntry e;
    e.clean_path = pick(in.clean);
    e.noise_type = is_ssn[i] ? "ssn" : "ecological";
    e.noise_path = pick(is_ssn[i] ? in.ssn : in.ecological);
    e.rir_clean_path = pick(in.rirs);
    e.rir_noise_path = pick(in.rirs);
    e.target_sir_db = uniform(kMinSirDb, kMaxSirDb);
    e.seed = in.seed + i;
    e.geometry = {uniform(kInteraural.lo, kInteraural.hi), uniform(kLateral.lo, kLateral.hi),
                  uniform(kVertical.lo, kVertical.hi)};
    e.rt60_s = uniform(0.15, 0.4);
    e.room_m = std::array<double, 3>{uniform(3.0, 8.0), uniform(3.0, 5.0), uniform(2.5, 3.0)};
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace sdrkit
