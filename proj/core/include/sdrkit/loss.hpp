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

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdrkit/audio.hpp"
#include "sdrkit/decomposition.hpp"
#include "sdrkit/scales.hpp"
#include "sdrkit/stft.hpp"
#include "sdrkit/weighting.hpp"

namespace sdrkit {

enum class LossId { kL1 = 1, kL2, kL3, kL4, kL5, kL6, kL7, kL8, kL9, kL10, kL11 };

inline constexpr int kLossCount = 11;

enum class LossDomain { kTime, kFrequency, kTimeFrequency };
enum class LossScale { kNone, kLinear, kMel };
enum class LossWeighting { kNone, kSpectralMagnitude, kAnsi, kNegSir, kNegLogSir };

// Where the SIR map feeding kNegSir / kNegLogSir comes from: the estimate's
// own decomposition (s_proj vs e_interf) or the oracle sources (clean vs noise).
enum class WeightSource { kEstimate, kOracleMixture };

struct LossSignature {
  LossDomain domain;
  LossScale scale;
  LossWeighting weighting;

  bool operator==(const LossSignature&) const = default;
};

// The (domain, scale, weighting) row of the catalog for `id`.
LossSignature CatalogSignature(LossId id);

std::vector<LossId> AllLossIds();
std::string LossIdName(LossId id);
std::optional<LossId> ParseLossId(std::string_view name);

std::string_view DomainName(LossDomain d);
std::string_view ScaleName(LossScale s);
std::string_view WeightingName(LossWeighting w);

struct LossConfig {
  LossId id = LossId::kL3;
  LossSignature signature = CatalogSignature(LossId::kL3);
  double gamma = 0.2;
  StftConfig stft;
  int sample_rate = 16000;
  MelOptions mel;
  ClampRange clamp{-60.0, 60.0};
  WeightSource weight_source = WeightSource::kEstimate;
  // Replaces the Mel filterbank when set (e.g. an identity filterbank).
  std::shared_ptr<const Filterbank> mel_override;

  static LossConfig FromId(LossId id);

  void Validate() const;
};

struct LossValue {
  double value = 0.0;  // negative SDR-like objective; minimize
  // Clamped per-bin dB map for unweighted spectral heads.
  std::optional<RealMatrix> bin_db;
  // Weights used by weighted heads.
  std::optional<WeightMap> weights;
};

// A loss instance with its filterbank and importance tables prepared once.
// Immutable after construction; Evaluate / Gradient are thread-safe.
class SdrLoss {
 public:
  explicit SdrLoss(LossConfig config);

  const LossConfig& config() const noexcept { return config_; }

  LossValue Evaluate(std::span<const double> est, std::span<const double> clean,
                     std::span<const double> noise) const;

  // Exact gradient of Evaluate(...).value with respect to est. Weight maps
  // are held constant; clamp- or floor-active terms contribute zero.
  Signal Gradient(std::span<const double> est, std::span<const double> clean,
                  std::span<const double> noise) const;

  // Weighted heads only: the weights Evaluate would use at this point.
  WeightMap Weights(std::span<const double> est, std::span<const double> clean,
                    std::span<const double> noise) const;

  LossValue EvaluateWithWeights(std::span<const double> est,
                                std::span<const double> clean,
                                std::span<const double> noise,
                                const WeightMap& weights) const;
  Signal GradientWithWeights(std::span<const double> est, std::span<const double> clean,
                             std::span<const double> noise,
                             const WeightMap& weights) const;

  bool weighted() const noexcept {
    return config_.signature.weighting != LossWeighting::kNone;
  }

 private:
  struct Forward;

  Forward RunForward(std::span<const double> est, std::span<const double> clean,
                     std::span<const double> noise, const WeightMap* weights) const;
  const Filterbank* pooling() const noexcept;

  LossConfig config_;
  std::optional<Filterbank> mel_;
  BandImportance importance_;
};

LossValue EvaluateLoss(const LossConfig& config, std::span<const double> est,
                       std::span<const double> clean, std::span<const double> noise);
Signal LossGradient(const LossConfig& config, std::span<const double> est,
                    std::span<const double> clean, std::span<const double> noise);

// Weighted TF SDR in dB: 10 log10(sum w P_proj / sum w P_dist), both sums
// floored. The loss is its clamped negative.
double WeightedSdrDb(const RealMatrix& weights, const RealMatrix& proj_power,
                     const RealMatrix& dist_power);

struct LossTriple {
  Signal est;
  Signal clean;
  Signal noise;
};

// Mean of per-utterance losses; utterances are spread over `jobs` threads
// and reduced in input order.
double BatchLoss(const SdrLoss& loss, std::span<const LossTriple> batch,
                 unsigned jobs = 1);

struct GradCheckReport {
  LossId id = LossId::kL1;
  std::size_t trials = 0;
  std::size_t length = 0;
  std::uint64_t seed = 0;
  double step = 1e-5;
  // max over trials of ||g_analytic - g_fd||_inf / ||g_fd||_inf
  double max_relative_error = 0.0;
  std::vector<double> trial_errors;
};

// Random triples est = clean + a*noise + b*artefact; compares the analytic
// gradient against central differences with weights frozen at each point.
GradCheckReport GradCheck(const LossConfig& config, std::size_t trials,
                          std::size_t length, std::uint64_t seed, double step = 1e-5);

}  // namespace sdrkit
