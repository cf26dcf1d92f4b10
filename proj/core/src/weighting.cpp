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

#include "sdrkit/weighting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "sdrkit/error.hpp"

namespace sdrkit {

WeightMap WeightsSpectralMagnitude(const RealMatrix& clean_power, double gamma) {
  Require(gamma >= 0.0 && std::isfinite(gamma), "gamma must be a finite nonnegative exponent");
  WeightMap out{RealMatrix(clean_power.rows(), clean_power.cols()), false};
  for (std::size_t i = 0; i < clean_power.size(); ++i) {
    const double p = clean_power.flat()[i];
    Require(p >= 0.0, "spectral magnitude weights: negative power entry");
    out.w.flat()[i] = std::pow(std::sqrt(p), gamma);
  }
  return out;
}

WeightMap WeightsAnsi(const BandImportance& importance, std::size_t frames,
                      std::size_t target_bands) {
  if (target_bands != importance.values.size())
    Fail(ErrorCode::kInvalidArgument,
         "ANSI weighting needs " + std::to_string(importance.values.size()) +
             " bands, target filterbank has " + std::to_string(target_bands));
  const double total =
      std::accumulate(importance.values.begin(), importance.values.end(), 0.0);
  Require(total > 0.0, "band importance must have positive mass");
  WeightMap out{RealMatrix(importance.values.size(), frames), true};
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t b = 0; b < importance.values.size(); ++b)
      out.w(b, t) = importance.values[b] / total;
  return out;
}

WeightMap WeightsSirSoftmax(const RealMatrix& sir, SirWeighting variant) {
  Require(!sir.empty(), "SIR softmax over an empty map");
  WeightMap out{RealMatrix(sir.rows(), sir.cols()), true};
  auto values = sir.flat();
  auto w = out.w.flat();
  for (double v : values)
    if (std::isnan(v)) Fail(ErrorCode::kInvalidArgument, "SIR map contains NaN");

  if (variant == SirWeighting::kNegSir) {
    const double peak = -*std::min_element(values.begin(), values.end());
    double total = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] = std::exp(-values[i] - peak);
      total += w[i];
    }
    for (double& x : w) x /= total;
  } else {
    double total = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!(values[i] > 0.0) || !std::isfinite(values[i]))
        Fail(ErrorCode::kInvalidArgument,
             "log-SIR weighting requires strictly positive finite linear SIR");
      w[i] = 1.0 / values[i];
      total += w[i];
    }
    for (double& x : w) x /= total;
  }
  return out;
}

RealMatrix SirMapDb(const RealMatrix& target_power, const RealMatrix& interf_power) {
  Require(target_power.rows() == interf_power.rows() &&
              target_power.cols() == interf_power.cols(),
          "SIR map: power maps differ in shape");
  const double floor =
      kEnergyFloor *
      std::accumulate(target_power.flat().begin(), target_power.flat().end(), 0.0);
  RealMatrix out(target_power.rows(), target_power.cols());
  for (std::size_t i = 0; i < out.size(); ++i)
    out.flat()[i] = ClampedBinDb(target_power.flat()[i], interf_power.flat()[i], floor,
                                 kSirWeightClamp);
  return out;
}

RealMatrix DbToLinear(const RealMatrix& db) {
  RealMatrix out(db.rows(), db.cols());
  for (std::size_t i = 0; i < db.size(); ++i)
    out.flat()[i] = std::pow(10.0, db.flat()[i] / 10.0);
  return out;
}

void WriteWeightMapCsv(std::ostream& out, const WeightMap& map) {
  out << "band,frame,weight\n";
  const auto old = out.precision(17);
  for (std::size_t t = 0; t < map.w.cols(); ++t)
    for (std::size_t b = 0; b < map.w.rows(); ++b)
      out << b << ',' << t << ',' << map.w(b, t) << '\n';
  out.precision(old);
}

}  // namespace sdrkit
