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

#include "sdrkit/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include <json.hpp>

#include "sdrkit/error.hpp"
#include "sdrkit/stoi.hpp"

namespace sdrkit {
namespace {

struct PooledPowers {
  RealMatrix clean;
  RealMatrix proj;
  RealMatrix dist;
  RealMatrix interf;
  RealMatrix target;
  RealMatrix artif;
};

RealMatrix Pooled(std::span<const double> x, const Filterbank& fb, int sample_rate,
                  const StftConfig& stft) {
  return BandPool(PowerMap(Stft(x, stft, sample_rate).bins), fb);
}

double FrameWeightedMean(const RealMatrix& weights, const RealMatrix& num,
                         const RealMatrix& den, ClampRange range) {
  const double floor =
      kEnergyFloor * std::accumulate(num.flat().begin(), num.flat().end(), 0.0);
  double acc = 0.0;
  std::size_t frames = 0;
  for (std::size_t t = 0; t < num.cols(); ++t) {
    double wsum = 0.0, frame = 0.0;
    for (std::size_t b = 0; b < num.rows(); ++b) {
      const double w = weights(b, t);
      wsum += w;
      frame += w * ClampedBinDb(num(b, t), den(b, t), floor, range);
    }
    if (wsum > 0.0) {
      acc += frame / wsum;
      ++frames;
    }
  }
  if (frames == 0)
    Fail(ErrorCode::kDegenerate, "frequency-weighted ratio: clean signal is silent");
  return acc / static_cast<double>(frames);
}

std::string FormatSig6(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

nlohmann::json JsonNumber(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::span<const double> RefChannel(const AudioBuffer& b, std::size_t ref) {
  return b.channel(ref);
}

}  // namespace

FwReport FwRatios(const Decomposition& d, std::span<const double> clean, int sample_rate,
                  const MetricConfig& config) {
  Require(clean.size() == d.length(), "FW ratios: clean length mismatch");
  const Filterbank fb = MelFilterbank(config.stft.fft_size, sample_rate, config.mel);
  Signal target(d.length());
  for (std::size_t i = 0; i < target.size(); ++i) target[i] = d.s_proj[i] + d.e_interf[i];

  PooledPowers p;
  p.clean = Pooled(clean, fb, sample_rate, config.stft);
  p.proj = Pooled(d.s_proj, fb, sample_rate, config.stft);
  p.dist = Pooled(d.e_dist(), fb, sample_rate, config.stft);
  p.interf = Pooled(d.e_interf, fb, sample_rate, config.stft);
  p.target = Pooled(target, fb, sample_rate, config.stft);
  p.artif = Pooled(d.e_artif, fb, sample_rate, config.stft);

  RealMatrix weights(p.clean.rows(), p.clean.cols());
  for (std::size_t i = 0; i < weights.size(); ++i)
    weights.flat()[i] = std::pow(std::sqrt(p.clean.flat()[i]), config.gamma);

  return {FrameWeightedMean(weights, p.proj, p.dist, config.fw_clamp),
          FrameWeightedMean(weights, p.proj, p.interf, config.fw_clamp),
          FrameWeightedMean(weights, p.target, p.artif, config.fw_clamp)};
}

double FwRatio(std::span<const double> est, std::span<const double> clean,
               std::span<const double> noise, FwKind which, int sample_rate,
               const MetricConfig& config) {
  const FwReport r = FwRatios(Decompose(est, clean, noise), clean, sample_rate, config);
  switch (which) {
    case FwKind::kSdr: return r.sdr_db;
    case FwKind::kSir: return r.sir_db;
    case FwKind::kSar: return r.sar_db;
  }
  return r.sdr_db;
}

MetricReport Report(std::span<const double> mixture, std::span<const double> est,
                    std::span<const double> clean, std::span<const double> noise,
                    int sample_rate, const MetricConfig& config) {
  Require(mixture.size() == est.size() && est.size() == clean.size() &&
              clean.size() == noise.size(),
          "report: signals must share one length");
  MetricReport r;
  const Decomposition d_in = Decompose(mixture, clean, noise);
  const Decomposition d_out = Decompose(est, clean, noise);
  const RatioReport t_in = TimeRatios(d_in);
  const RatioReport t_out = TimeRatios(d_out);
  const FwReport fw_in = FwRatios(d_in, clean, sample_rate, config);
  const FwReport fw_out = FwRatios(d_out, clean, sample_rate, config);
  r.sir_in = t_in.sir_db;
  r.sir_out = t_out.sir_db;
  r.sar_out = t_out.sar_db;
  r.sdr_out = t_out.sdr_db;
  r.fw_sir_in = fw_in.sir_db;
  r.fw_sir_out = fw_out.sir_db;
  r.fw_sar_out = fw_out.sar_db;
  r.fw_sdr_out = fw_out.sdr_db;
  if (config.with_stoi) {
    r.stoi_in = Stoi(clean, mixture, sample_rate);
    r.stoi_out = Stoi(clean, est, sample_rate);
  }
  return r;
}

MetricReport Report(const AudioBuffer& mixture, const AudioBuffer& est,
                    const AudioBuffer& clean, const AudioBuffer& noise,
                    const MetricConfig& config) {
  const int sr = clean.sample_rate();
  for (const AudioBuffer* b : {&mixture, &est, &noise})
    if (b->sample_rate() != sr)
      Fail(ErrorCode::kSampleRateMismatch, "report: inputs have different sample rates");
  return Report(RefChannel(mixture, config.ref_channel), RefChannel(est, config.ref_channel),
                RefChannel(clean, config.ref_channel), RefChannel(noise, config.ref_channel),
                sr, config);
}

std::string ReportToJson(const MetricReport& r) {
  nlohmann::ordered_json j;
  j["sir_in"] = JsonNumber(r.sir_in);
  j["sir_out"] = JsonNumber(r.sir_out);
  j["sar_out"] = JsonNumber(r.sar_out);
  j["sdr_out"] = JsonNumber(r.sdr_out);
  j["fw_sir_in"] = JsonNumber(r.fw_sir_in);
  j["fw_sir_out"] = JsonNumber(r.fw_sir_out);
  j["fw_sar_out"] = JsonNumber(r.fw_sar_out);
  j["fw_sdr_out"] = JsonNumber(r.fw_sdr_out);
  j["stoi_in"] = r.stoi_in ? nlohmann::ordered_json(*r.stoi_in) : nlohmann::ordered_json();
  j["stoi_out"] = r.stoi_out ? nlohmann::ordered_json(*r.stoi_out) : nlohmann::ordered_json();
  return j.dump();
}

std::string ReportCsvHeader() {
  return "SIR_out,SAR_out,SDR_out,FW-SIR_out,FW-SAR_out,FW-SDR_out,STOI_out";
}

std::string FormatCsvNumber(std::optional<double> value) {
  return value ? FormatSig6(*value) : std::string();
}

std::string ReportToCsvRow(const MetricReport& r) {
  std::string row;
  for (std::optional<double> v : {std::optional<double>(r.sir_out), std::optional<double>(r.sar_out),
                                  std::optional<double>(r.sdr_out), std::optional<double>(r.fw_sir_out),
                                  std::optional<double>(r.fw_sar_out), std::optional<double>(r.fw_sdr_out),
                                  r.stoi_out}) {
    row += FormatCsvNumber(v);
    row += ',';
  }
  row.pop_back();
  return row;
}

}  // namespace sdrkit
