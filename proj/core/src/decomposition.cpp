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

#include "sdrkit/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sdrkit/error.hpp"

namespace sdrkit {

Signal Decomposition::e_dist() const {
  Signal out(e_interf.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = e_interf[i] + e_artif[i];
  return out;
}

Decomposition Decompose(std::span<const double> est, std::span<const double> clean,
                        std::span<const double> noise) {
  Require(est.size() == clean.size() && est.size() == noise.size(),
          "decompose: est, clean and noise must have equal lengths");
  const double ss = Energy(clean);
  if (ss == 0.0) Fail(ErrorCode::kDegenerate, "decompose: clean reference has zero energy");
  const double nn = Energy(noise);
  const double sn = Dot(clean, noise);
  const double xs = Dot(est, clean);
  const double xn = Dot(est, noise);

  // Closed-form 2x2 Gram solve. Condition number of the symmetric Gram
  // matrix from its eigenvalues.
  const double det = ss * nn - sn * sn;
  const double half_trace = 0.5 * (ss + nn);
  const double spread = std::sqrt(0.25 * (ss - nn) * (ss - nn) + sn * sn);
  const double lam_max = half_trace + spread;
  const double lam_min = det / lam_max;
  if (!(lam_min > 0.0) || lam_max / lam_min > kCollinearityThreshold)
    Fail(ErrorCode::kDegenerate,
         "decompose: clean and noise are collinear (degenerate decomposition)");

  const double a = (nn * xs - sn * xn) / det;  // clean coefficient in span projection
  const double b = (ss * xn - sn * xs) / det;  // noise coefficient
  const double c = xs / ss;                    // clean coefficient of s_proj

  Decomposition d;
  d.s_proj.resize(est.size());
  d.e_interf.resize(est.size());
  d.e_artif.resize(est.size());
  for (std::size_t i = 0; i < est.size(); ++i) {
    const double proj = c * clean[i];
    const double span_proj = a * clean[i] + b * noise[i];
    d.s_proj[i] = proj;
    d.e_interf[i] = span_proj - proj;
    d.e_artif[i] = est[i] - span_proj;
  }
  // Residuals at round-off level are exact zeros: a perfect estimate must
  // hit the +inf sentinel rather than a ratio of rounding errors.
  const double tiny = kRoundoffEnergy * Energy(est);
  for (Signal* part : {&d.e_interf, &d.e_artif})
    if (Energy(*part) <= tiny) std::fill(part->begin(), part->end(), 0.0);
  return d;
}

double RatioDb(double num, double den) {
  if (num == 0.0) return -kPositiveInfinityDb;
  if (den == 0.0) return kPositiveInfinityDb;
  return 10.0 * std::log10(num / den);
}

RatioReport TimeRatios(const Decomposition& d) {
  const double proj = Energy(d.s_proj);
  const Signal dist = d.e_dist();
  Signal target(d.length());
  for (std::size_t i = 0; i < target.size(); ++i) target[i] = d.s_proj[i] + d.e_interf[i];
  return {RatioDb(proj, Energy(dist)), RatioDb(proj, Energy(d.e_interf)),
          RatioDb(Energy(target), Energy(d.e_artif))};
}

double ClampedBinDb(double num, double den, double floor, ClampRange range) {
  if (den <= 0.0) return range.hi;
  if (num <= 0.0) return range.lo;
  return std::clamp(10.0 * std::log10(num / std::max(den, floor)), range.lo, range.hi);
}

namespace {

RealMatrix ComponentPower(std::span<const double> x, SpectralDomain domain,
                          const StftConfig& config, int sample_rate,
                          const Filterbank* fb) {
  RealMatrix power = domain == SpectralDomain::kFrequency
                         ? PowerMap(FullDft(x))
                         : PowerMap(Stft(x, config, sample_rate).bins);
  return fb != nullptr ? BandPool(power, *fb) : power;
}

double Sum(const RealMatrix& m) {
  return std::accumulate(m.flat().begin(), m.flat().end(), 0.0);
}

RealMatrix BinDbMap(const RealMatrix& num, const RealMatrix& den, ClampRange range,
                    double* mean) {
  const double floor = kEnergyFloor * Sum(num);
  RealMatrix out(num.rows(), num.cols());
  double acc = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.flat()[i] = ClampedBinDb(num.flat()[i], den.flat()[i], floor, range);
    acc += out.flat()[i];
  }
  *mean = acc / static_cast<double>(out.size());
  return out;
}

}  // namespace

BinwiseRatios ComputeBinwiseRatios(const Decomposition& d, SpectralDomain domain,
                                   const StftConfig& config, int sample_rate,
                                   const Filterbank* fb, ClampRange range) {
  if (d.length() == 0) Fail(ErrorCode::kInvalidArgument, "empty decomposition");
  Signal target(d.length());
  for (std::size_t i = 0; i < target.size(); ++i) target[i] = d.s_proj[i] + d.e_interf[i];

  const RealMatrix proj = ComponentPower(d.s_proj, domain, config, sample_rate, fb);
  const RealMatrix dist = ComponentPower(d.e_dist(), domain, config, sample_rate, fb);
  const RealMatrix interf = ComponentPower(d.e_interf, domain, config, sample_rate, fb);
  const RealMatrix artif = ComponentPower(d.e_artif, domain, config, sample_rate, fb);
  const RealMatrix tgt = ComponentPower(target, domain, config, sample_rate, fb);

  BinwiseRatios out;
  out.sdr_db = BinDbMap(proj, dist, range, &out.mean_sdr_db);
  out.sir_db = BinDbMap(proj, interf, range, &out.mean_sir_db);
  out.sar_db = BinDbMap(tgt, artif, range, &out.mean_sar_db);
  return out;
}

}  // namespace sdrkit
