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

#include "sdrkit/stoi.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include "fft.hpp"
#include "sdrkit/error.hpp"
#include "sdrkit/matrix.hpp"

namespace sdrkit {
namespace {

constexpr int kStoiRate = 10000;
constexpr std::size_t kFrame = 256;
constexpr std::size_t kHop = 128;
constexpr std::size_t kFft = 512;
constexpr std::size_t kBands = 15;
constexpr double kMinFreq = 150.0;
constexpr std::size_t kSegment = 30;
constexpr double kBeta = -15.0;
constexpr double kDynamicRange = 40.0;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Hann of length n + 2 with the zero end points dropped.
std::vector<double> InteriorHann(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i + 1) /
                                static_cast<double>(n + 1));
  return w;
}

double BesselI0(double x) {
  double sum = 1.0, term = 1.0;
  for (int k = 1; k < 64; ++k) {
    term *= (x / (2.0 * k)) * (x / (2.0 * k));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

struct SilenceTrimmed {
  Signal clean;
  Signal est;
};

SilenceTrimmed RemoveSilentFrames(std::span<const double> x, std::span<const double> y) {
  const std::vector<double> w = InteriorHann(kFrame);
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i + kFrame <= x.size(); i += kHop) starts.push_back(i);
  if (starts.empty()) Fail(ErrorCode::kTooShort, "STOI: signal shorter than one frame");

  std::vector<double> energy_db(starts.size());
  for (std::size_t f = 0; f < starts.size(); ++f) {
    double e = 0.0;
    for (std::size_t i = 0; i < kFrame; ++i) {
      const double v = w[i] * x[starts[f] + i];
      e += v * v;
    }
    energy_db[f] = 20.0 * std::log10(std::sqrt(e) + kEps);
  }
  const double peak = *std::max_element(energy_db.begin(), energy_db.end());

  std::vector<std::size_t> kept;
  for (std::size_t f = 0; f < starts.size(); ++f)
    if (energy_db[f] > peak - kDynamicRange) kept.push_back(starts[f]);

  SilenceTrimmed out;
  const std::size_t len = (kept.size() - 1) * kHop + kFrame;
  out.clean.assign(len, 0.0);
  out.est.assign(len, 0.0);
  for (std::size_t k = 0; k < kept.size(); ++k) {
    for (std::size_t i = 0; i < kFrame; ++i) {
      out.clean[k * kHop + i] += w[i] * x[kept[k] + i];
      out.est[k * kHop + i] += w[i] * y[kept[k] + i];
    }
  }
  return out;
}

// One-third-octave band envelopes [kBands x frames].
RealMatrix BandEnvelopes(std::span<const double> x, const RealMatrix& bands) {
  const std::vector<double> w = InteriorHann(kFrame);
  std::vector<std::size_t> starts;
  // Frames start strictly before len - frame, matching the reference pipeline.
  for (std::size_t i = 0; i + kFrame < x.size(); i += kHop) starts.push_back(i);
  RealMatrix env(kBands, starts.size());
  std::vector<double> frame(kFft);
  std::vector<std::complex<double>> spec(kFft / 2 + 1);
  for (std::size_t t = 0; t < starts.size(); ++t) {
    std::fill(frame.begin(), frame.end(), 0.0);
    for (std::size_t i = 0; i < kFrame; ++i) frame[i] = w[i] * x[starts[t] + i];
    fft::RealForward(frame, spec);
    for (std::size_t b = 0; b < kBands; ++b) {
      double acc = 0.0;
      for (std::size_t k = 0; k < spec.size(); ++k) acc += bands(b, k) * std::norm(spec[k]);
      env(b, t) = std::sqrt(acc);
    }
  }
  return env;
}

RealMatrix ThirdOctaveMatrix() {
  const std::size_t bins = kFft / 2 + 1;
  RealMatrix m(kBands, bins);
  auto closest_bin = [&](double hz) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * kStoiRate / static_cast<double>(kFft);
      const double d = (f - hz) * (f - hz);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    return best;
  };
  for (std::size_t b = 0; b < kBands; ++b) {
    const double k = static_cast<double>(b);
    const std::size_t lo = closest_bin(kMinFreq * std::pow(2.0, (2.0 * k - 1.0) / 6.0));
    const std::size_t hi = closest_bin(kMinFreq * std::pow(2.0, (2.0 * k + 1.0) / 6.0));
    for (std::size_t f = lo; f < hi; ++f) m(b, f) = 1.0;
  }
  return m;
}

}  // namespace

Signal Resample(std::span<const double> x, int from_rate, int to_rate) {
  Require(from_rate > 0 && to_rate > 0, "resample rates must be positive");
  if (from_rate == to_rate) return Signal(x.begin(), x.end());
  const int g = std::gcd(from_rate, to_rate);
  const long up = to_rate / g;
  const long down = from_rate / g;
  const long max_ratio = std::max(up, down);

  // Anti-aliasing low-pass at the upsampled rate: Kaiser-windowed sinc for
  // 60 dB rejection with a transition band one tenth of the cutoff, scaled
  // to unit DC gain per output phase (the reference STOI resampler).
  constexpr double kRejectionDb = 60.0;
  const double stop = 1.0 / (2.0 * static_cast<double>(max_ratio));
  const double roll_off = stop / 10.0;
  const long half = static_cast<long>(std::ceil((kRejectionDb - 8.0) / (28.714 * roll_off)));
  const double beta = 0.1102 * (kRejectionDb - 8.7);
  std::vector<double> h(static_cast<std::size_t>(2 * half + 1));
  const double i0_beta = BesselI0(beta);
  double sum = 0.0;
  for (long n = -half; n <= half; ++n) {
    const double t = static_cast<double>(n);
    const double arg = std::numbers::pi * 2.0 * stop * t;
    const double sinc = n == 0 ? 1.0 : std::sin(arg) / arg;
    const double r = t / static_cast<double>(half);
    const double kaiser = BesselI0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0_beta;
    h[static_cast<std::size_t>(n + half)] = sinc * kaiser;
    sum += sinc * kaiser;
  }
  for (double& v : h) v *= static_cast<double>(up) / sum;

  const std::size_t out_len =
      static_cast<std::size_t>((static_cast<long>(x.size()) * up + down - 1) / down);
  Signal out(out_len, 0.0);
  const long in_len = static_cast<long>(x.size());
  for (std::size_t m = 0; m < out_len; ++m) {
    // Output sample m sits at position m*down on the upsampled grid.
    const long centre = static_cast<long>(m) * down;
    // Input samples j contribute at upsampled index j*up.
    long j_lo = (centre - half + up - 1) / up;
    if (centre - half < 0) j_lo = -((half - centre) / up);
    const long j_hi = (centre + half) / up;
    double acc = 0.0;
    for (long j = std::max(0L, j_lo); j <= std::min(in_len - 1, j_hi); ++j)
      acc += x[static_cast<std::size_t>(j)] * h[static_cast<std::size_t>(centre - j * up + half)];
    out[m] = acc;
  }
  return out;
}

double Stoi(std::span<const double> clean, std::span<const double> est, int sample_rate) {
  Require(clean.size() == est.size(), "STOI: clean and estimate lengths differ");
  Require(sample_rate > 0, "STOI: sample rate must be positive");
  if (std::all_of(clean.begin(), clean.end(), [](double v) { return v == 0.0; }))
    Fail(ErrorCode::kDegenerate, "STOI: clean signal is silent");

  const Signal x10 = Resample(clean, sample_rate, kStoiRate);
  const Signal y10 = Resample(est, sample_rate, kStoiRate);
  const SilenceTrimmed trimmed = RemoveSilentFrames(x10, y10);

  static const RealMatrix bands = ThirdOctaveMatrix();
  const RealMatrix x_env = BandEnvelopes(trimmed.clean, bands);
  const RealMatrix y_env = BandEnvelopes(trimmed.est, bands);
  const std::size_t frames = x_env.cols();
  if (frames < kSegment)
    Fail(ErrorCode::kTooShort, "STOI: fewer than 30 frames remain after silence removal");

  const double clip = std::pow(10.0, -kBeta / 20.0);
  double total = 0.0;
  std::size_t count = 0;
  std::vector<double> xs(kSegment), ys(kSegment);
  for (std::size_t m = kSegment; m <= frames; ++m) {
    for (std::size_t b = 0; b < kBands; ++b) {
      double x_norm = 0.0, y_norm = 0.0;
      for (std::size_t i = 0; i < kSegment; ++i) {
        xs[i] = x_env(b, m - kSegment + i);
        ys[i] = y_env(b, m - kSegment + i);
        x_norm += xs[i] * xs[i];
        y_norm += ys[i] * ys[i];
      }
      const double gain = std::sqrt(x_norm) / (std::sqrt(y_norm) + kEps);
      double x_mean = 0.0, y_mean = 0.0;
      for (std::size_t i = 0; i < kSegment; ++i) {
        ys[i] = std::min(ys[i] * gain, xs[i] * (1.0 + clip));
        x_mean += xs[i];
        y_mean += ys[i];
      }
      x_mean /= kSegment;
      y_mean /= kSegment;
      double xx = 0.0, yy = 0.0, xy = 0.0;
      for (std::size_t i = 0; i < kSegment; ++i) {
        const double a = xs[i] - x_mean, c = ys[i] - y_mean;
        xx += a * a;
        yy += c * c;
        xy += a * c;
      }
      total += xy / ((std::sqrt(xx) + kEps) * (std::sqrt(yy) + kEps));
      ++count;
    }
  }
  return std::clamp(total / static_cast<double>(count), 0.0, 1.0);
}

}  // namespace sdrkit
