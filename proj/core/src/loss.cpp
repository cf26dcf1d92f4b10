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

#include "sdrkit/loss.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "sdrkit/error.hpp"
#include "sdrkit/parallel.hpp"

namespace sdrkit {
namespace {

// d/dx 10 log10(x) = kDbPerNeper / x
constexpr double kDbPerNeper = 10.0 / std::numbers::ln10;

// Absolute floor on the weighted sums of the weighted head.
constexpr double kWeightedSumFloor = 1e-12;

struct CatalogRow {
  LossId id;
  LossSignature signature;
};

constexpr std::array<CatalogRow, kLossCount> kCatalog = {{
    {LossId::kL1, {LossDomain::kTime, LossScale::kNone, LossWeighting::kNone}},
    {LossId::kL2, {LossDomain::kFrequency, LossScale::kNone, LossWeighting::kNone}},
    {LossId::kL3, {LossDomain::kTimeFrequency, LossScale::kLinear, LossWeighting::kNone}},
    {LossId::kL4, {LossDomain::kTimeFrequency, LossScale::kMel, LossWeighting::kNone}},
    {LossId::kL5, {LossDomain::kTimeFrequency, LossScale::kLinear, LossWeighting::kSpectralMagnitude}},
    {LossId::kL6, {LossDomain::kTimeFrequency, LossScale::kMel, LossWeighting::kSpectralMagnitude}},
    {LossId::kL7, {LossDomain::kTimeFrequency, LossScale::kMel, LossWeighting::kAnsi}},
    {LossId::kL8, {LossDomain::kTimeFrequency, LossScale::kLinear, LossWeighting::kNegSir}},
    {LossId::kL9, {LossDomain::kTimeFrequency, LossScale::kLinear, LossWeighting::kNegLogSir}},
    {LossId::kL10, {LossDomain::kTimeFrequency, LossScale::kMel, LossWeighting::kNegSir}},
    {LossId::kL11, {LossDomain::kTimeFrequency, LossScale::kMel, LossWeighting::kNegLogSir}},
}};

double Sum(const RealMatrix& m) {
  return std::accumulate(m.flat().begin(), m.flat().end(), 0.0);
}

Signal Subtract(std::span<const double> a, std::span<const double> b) {
  Signal out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

// Derivative of the clamped, floored per-bin dB term with respect to its
// numerator and denominator; both zero when a floor or the clamp is active.
struct DbSlope {
  double num = 0.0;
  double den = 0.0;
};

DbSlope BinDbSlope(double num, double den, double num_floor, double den_floor,
                   ClampRange range) {
  if (!(num > num_floor) || !(den > den_floor)) return {};
  const double db = 10.0 * std::log10(num / den);
  if (!(db > range.lo && db < range.hi)) return {};
  return {kDbPerNeper / num, -kDbPerNeper / den};
}

}  // namespace

LossSignature CatalogSignature(LossId id) {
  for (const CatalogRow& row : kCatalog)
    if (row.id == id) return row.signature;
  Fail(ErrorCode::kInvalidArgument, "unknown loss id");
}

std::vector<LossId> AllLossIds() {
  std::vector<LossId> ids;
  for (const CatalogRow& row : kCatalog) ids.push_back(row.id);
  return ids;
}

std::string LossIdName(LossId id) { return "L" + std::to_string(static_cast<int>(id)); }

std::optional<LossId> ParseLossId(std::string_view name) {
  for (const CatalogRow& row : kCatalog)
    if (LossIdName(row.id) == name) return row.id;
  return std::nullopt;
}

std::string_view DomainName(LossDomain d) {
  switch (d) {
    case LossDomain::kTime: return "time";
    case LossDomain::kFrequency: return "frequency";
    case LossDomain::kTimeFrequency: return "tf";
  }
  return "?";
}

std::string_view ScaleName(LossScale s) {
  switch (s) {
    case LossScale::kNone: return "-";
    case LossScale::kLinear: return "linear";
    case LossScale::kMel: return "mel";
  }
  return "?";
}

std::string_view WeightingName(LossWeighting w) {
  switch (w) {
    case LossWeighting::kNone: return "-";
    case LossWeighting::kSpectralMagnitude: return "|S|^gamma";
    case LossWeighting::kAnsi: return "ansi1997";
    case LossWeighting::kNegSir: return "softmax(-SIR)";
    case LossWeighting::kNegLogSir: return "softmax(-log SIR)";
  }
  return "?";
}

LossConfig LossConfig::FromId(LossId id) {
  LossConfig config;
  config.id = id;
  config.signature = CatalogSignature(id);
  return config;
}

void LossConfig::Validate() const {
  Require(signature == CatalogSignature(id),
          "loss config for " + LossIdName(id) + " does not match its catalog row");
  Require(sample_rate > 0, "loss sample rate must be positive");
  Require(clamp.lo < clamp.hi, "clamp range must satisfy lo < hi");
  Require(gamma >= 0.0, "gamma must be nonnegative");
  if (signature.domain == LossDomain::kTimeFrequency) stft.Validate();
  if (signature.weighting == LossWeighting::kAnsi && !mel_override)
    Require(mel.bands == kThirdOctaveBands,
            "ANSI weighting is applied band-to-band and needs 18 Mel bands");
}

double WeightedSdrDb(const RealMatrix& weights, const RealMatrix& proj_power,
                     const RealMatrix& dist_power) {
  Require(weights.rows() == proj_power.rows() && weights.cols() == proj_power.cols() &&
              dist_power.rows() == proj_power.rows() &&
              dist_power.cols() == proj_power.cols(),
          "weighted SDR: weight and power maps differ in shape");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    num += weights.flat()[i] * proj_power.flat()[i];
    den += weights.flat()[i] * dist_power.flat()[i];
  }
  return 10.0 * std::log10(std::max(num, kWeightedSumFloor) /
                           std::max(den, kWeightedSumFloor));
}

struct SdrLoss::Forward {
  Signal s_proj;
  Signal e_dist;
  Signal e_interf;
  ComplexMatrix spec_proj;
  ComplexMatrix spec_dist;
  RealMatrix pow_proj;  // pooled
  RealMatrix pow_dist;
  std::optional<WeightMap> weights;
  LossValue value;
};

SdrLoss::SdrLoss(LossConfig config)
    : config_(std::move(config)), importance_(AnsiBandImportance()) {
  config_.Validate();
  if (config_.signature.scale == LossScale::kMel) {
    mel_ = config_.mel_override
               ? *config_.mel_override
               : MelFilterbank(config_.stft.fft_size, config_.sample_rate, config_.mel);
    Require(mel_->bins() == config_.stft.bins(),
            "Mel filterbank bin count does not match the STFT size");
    if (config_.signature.weighting == LossWeighting::kAnsi)
      Require(mel_->bands() == kThirdOctaveBands,
              "ANSI weighting needs an 18-band filterbank");
  }
}

const Filterbank* SdrLoss::pooling() const noexcept {
  return mel_ ? &*mel_ : nullptr;
}

namespace {

ComplexMatrix Analyze(std::span<const double> x, const LossConfig& config) {
  return config.signature.domain == LossDomain::kFrequency
             ? FullDft(x)
             : Stft(x, config.stft, config.sample_rate).bins;
}

Signal AnalyzeAdjoint(const ComplexMatrix& grad, const LossConfig& config,
                      std::size_t length) {
  return config.signature.domain == LossDomain::kFrequency
             ? FullDftAdjoint(grad, length)
             : StftAdjoint(grad, config.stft, length);
}

RealMatrix Pool(const ComplexMatrix& spec, const Filterbank* fb) {
  RealMatrix power = PowerMap(spec);
  return fb ? BandPool(power, *fb) : power;
}

void CheckInputs(std::span<const double> est, std::span<const double> clean,
                 std::span<const double> noise) {
  Require(!est.empty(), "loss inputs must be nonempty");
  Require(est.size() == clean.size() && est.size() == noise.size(),
          "loss inputs must have equal lengths");
  for (auto x : {est, clean, noise})
    for (double v : x) Require(std::isfinite(v), "loss inputs must be finite");
}

}  // namespace

WeightMap SdrLoss::Weights(std::span<const double> est, std::span<const double> clean,
                           std::span<const double> noise) const {
  Require(weighted(), LossIdName(config_.id) + " has no weighting");
  CheckInputs(est, clean, noise);
  const Filterbank* fb = pooling();
  switch (config_.signature.weighting) {
    case LossWeighting::kSpectralMagnitude:
      return WeightsSpectralMagnitude(Pool(Analyze(clean, config_), fb), config_.gamma);
    case LossWeighting::kAnsi:
      return WeightsAnsi(importance_, config_.stft.FrameCount(est.size()),
                         fb ? fb->bands() : config_.stft.bins());
    case LossWeighting::kNegSir:
    case LossWeighting::kNegLogSir: {
      RealMatrix target, interf;
      if (config_.weight_source == WeightSource::kOracleMixture) {
        target = Pool(Analyze(clean, config_), fb);
        interf = Pool(Analyze(noise, config_), fb);
      } else {
        const Decomposition d = Decompose(est, clean, noise);
        target = Pool(Analyze(d.s_proj, config_), fb);
        interf = Pool(Analyze(d.e_interf, config_), fb);
      }
      const RealMatrix sir_db = SirMapDb(target, interf);
      return config_.signature.weighting == LossWeighting::kNegSir
                 ? WeightsSirSoftmax(sir_db, SirWeighting::kNegSir)
                 : WeightsSirSoftmax(DbToLinear(sir_db), SirWeighting::kNegLogSir);
    }
    case LossWeighting::kNone: break;
  }
  Fail(ErrorCode::kInvalidArgument, "unreachable weighting");
}

SdrLoss::Forward SdrLoss::RunForward(std::span<const double> est,
                                     std::span<const double> clean,
                                     std::span<const double> noise,
                                     const WeightMap* weights) const {
  CheckInputs(est, clean, noise);
  Decomposition d = Decompose(est, clean, noise);
  Forward f;
  f.e_dist = d.e_dist();
  f.s_proj = std::move(d.s_proj);
  f.e_interf = std::move(d.e_interf);
  const ClampRange range = config_.clamp;

  if (config_.signature.domain == LossDomain::kTime) {
    const double num = Energy(f.s_proj);
    f.value.value = -ClampedBinDb(num, Energy(f.e_dist), kEnergyFloor * num, range);
    return f;
  }

  f.spec_proj = Analyze(f.s_proj, config_);
  f.spec_dist = Analyze(f.e_dist, config_);
  f.pow_proj = Pool(f.spec_proj, pooling());
  f.pow_dist = Pool(f.spec_dist, pooling());

  if (!weighted()) {
    const double floor = kEnergyFloor * Sum(f.pow_proj);
    RealMatrix db(f.pow_proj.rows(), f.pow_proj.cols());
    double acc = 0.0;
    for (std::size_t i = 0; i < db.size(); ++i) {
      db.flat()[i] = ClampedBinDb(f.pow_proj.flat()[i], f.pow_dist.flat()[i], floor, range);
      acc += db.flat()[i];
    }
    f.value.value = -acc / static_cast<double>(db.size());
    f.value.bin_db = std::move(db);
    return f;
  }

  f.weights = weights ? *weights : Weights(est, clean, noise);
  const double sdr = WeightedSdrDb(f.weights->w, f.pow_proj, f.pow_dist);
  f.value.value = -std::clamp(sdr, range.lo, range.hi);
  f.value.weights = f.weights;
  return f;
}

LossValue SdrLoss::Evaluate(std::span<const double> est, std::span<const double> clean,
                            std::span<const double> noise) const {
  return RunForward(est, clean, noise, nullptr).value;
}

LossValue SdrLoss::EvaluateWithWeights(std::span<const double> est,
                                       std::span<const double> clean,
                                       std::span<const double> noise,
                                       const WeightMap& weights) const {
  Require(weighted(), LossIdName(config_.id) + " has no weighting");
  return RunForward(est, clean, noise, &weights).value;
}

Signal SdrLoss::Gradient(std::span<const double> est, std::span<const double> clean,
                         std::span<const double> noise) const {
  if (!weighted()) return GradientWithWeights(est, clean, noise, WeightMap{});
  return GradientWithWeights(est, clean, noise, Weights(est, clean, noise));
}

Signal SdrLoss::GradientWithWeights(std::span<const double> est,
                                    std::span<const double> clean,
                                    std::span<const double> noise,
                                    const WeightMap& weights) const {
  const Forward f = RunForward(est, clean, noise, weighted() ? &weights : nullptr);
  const std::size_t n = est.size();
  const ClampRange range = config_.clamp;

  // Gradients of the loss with respect to s_proj and e_dist.
  Signal g_proj(n, 0.0), g_dist(n, 0.0);

  if (config_.signature.domain == LossDomain::kTime) {
    const double num = Energy(f.s_proj);
    const double den = Energy(f.e_dist);
    const DbSlope slope = BinDbSlope(num, den, 0.0, kEnergyFloor * num, range);
    for (std::size_t i = 0; i < n; ++i) {
      g_proj[i] = -slope.num * 2.0 * f.s_proj[i];
      g_dist[i] = -slope.den * 2.0 * f.e_dist[i];
    }
  } else {
    RealMatrix d_proj(f.pow_proj.rows(), f.pow_proj.cols());
    RealMatrix d_dist(f.pow_dist.rows(), f.pow_dist.cols());
    if (!weighted()) {
      const double floor = kEnergyFloor * Sum(f.pow_proj);
      const double scale = 1.0 / static_cast<double>(d_proj.size());
      for (std::size_t i = 0; i < d_proj.size(); ++i) {
        const DbSlope s =
            BinDbSlope(f.pow_proj.flat()[i], f.pow_dist.flat()[i], 0.0, floor, range);
        d_proj.flat()[i] = -scale * s.num;
        d_dist.flat()[i] = -scale * s.den;
      }
    } else {
      const RealMatrix& w = f.weights->w;
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        num += w.flat()[i] * f.pow_proj.flat()[i];
        den += w.flat()[i] * f.pow_dist.flat()[i];
      }
      const DbSlope s = BinDbSlope(num, den, kWeightedSumFloor, kWeightedSumFloor, range);
      for (std::size_t i = 0; i < w.size(); ++i) {
        d_proj.flat()[i] = -s.num * w.flat()[i];
        d_dist.flat()[i] = -s.den * w.flat()[i];
      }
    }

    // Pooling and |X|^2 back to complex bins: dL/dX = 2 (dL/dP) X.
    auto to_signal = [&](const RealMatrix& d_pow, const ComplexMatrix& spec) {
      const RealMatrix d_bins = pooling() ? BandPoolAdjoint(d_pow, *pooling()) : d_pow;
      ComplexMatrix g(spec.rows(), spec.cols());
      for (std::size_t i = 0; i < g.size(); ++i)
        g.flat()[i] = 2.0 * d_bins.flat()[i] * spec.flat()[i];
      return AnalyzeAdjoint(g, config_, n);
    };
    g_proj = to_signal(d_proj, f.spec_proj);
    g_dist = to_signal(d_dist, f.spec_dist);
  }

  // s_proj = P x and e_dist = (I - P) x with P the orthogonal projector onto
  // clean, so grad = P (g_proj - g_dist) + g_dist.
  const double ss = Energy(clean);
  const Signal diff = Subtract(g_proj, g_dist);
  const double coef = Dot(diff, clean) / ss;
  Signal grad(n);
  for (std::size_t i = 0; i < n; ++i) grad[i] = coef * clean[i] + g_dist[i];
  return grad;
}

LossValue EvaluateLoss(const LossConfig& config, std::span<const double> est,
                       std::span<const double> clean, std::span<const double> noise) {
  return SdrLoss(config).Evaluate(est, clean, noise);
}

Signal LossGradient(const LossConfig& config, std::span<const double> est,
                    std::span<const double> clean, std::span<const double> noise) {
  return SdrLoss(config).Gradient(est, clean, noise);
}

double BatchLoss(const SdrLoss& loss, std::span<const LossTriple> batch, unsigned jobs) {
  Require(!batch.empty(), "batch loss over an empty batch");
  std::vector<double> values(batch.size());
  ParallelFor(batch.size(), jobs, [&](std::size_t i) {
    values[i] = loss.Evaluate(batch[i].est, batch[i].clean, batch[i].noise).value;
  });
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc / static_cast<double>(values.size());
}

GradCheckReport GradCheck(const LossConfig& config, std::size_t trials,
                          std::size_t length, std::uint64_t seed, double step) {
  if (config.signature.domain == LossDomain::kTimeFrequency && !config.stft.center)
    Require(length >= config.stft.fft_size, "grad check length must cover one frame");
  Require(length >= 2, "grad check length must be at least 2");
  Require(step > 0.0, "finite-difference step must be positive");

  const SdrLoss loss(config);
  GradCheckReport report{config.id, trials, length, seed, step, 0.0, {}};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (std::size_t trial = 0; trial < trials; ++trial) {
    Signal clean(length), noise(length), est(length);
    for (double& v : clean) v = gauss(rng);
    for (double& v : noise) v = gauss(rng);
    for (std::size_t i = 0; i < length; ++i) est[i] = clean[i] + 0.5 * noise[i] + 0.3 * gauss(rng);

    const WeightMap weights = loss.weighted() ? loss.Weights(est, clean, noise) : WeightMap{};
    auto value_at = [&](const Signal& x) {
      return loss.weighted() ? loss.EvaluateWithWeights(x, clean, noise, weights).value
                             : loss.Evaluate(x, clean, noise).value;
    };
    const Signal analytic = loss.GradientWithWeights(est, clean, noise, weights);

    double err = 0.0, scale = 0.0;
    Signal probe = est;
    for (std::size_t i = 0; i < length; ++i) {
      probe[i] = est[i] + step;
      const double up = value_at(probe);
      probe[i] = est[i] - step;
      const double down = value_at(probe);
      probe[i] = est[i];
      const double fd = (up - down) / (2.0 * step);
      err = std::max(err, std::abs(analytic[i] - fd));
      scale = std::max(scale, std::abs(fd));
    }
    const double rel = scale > 0.0 ? err / scale : err;
    report.trial_errors.push_back(rel);
    report.max_relative_error = std::max(report.max_relative_error, rel);
  }
  return report;
}

}  // namespace sdrkit
