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

// Deterministic signal fixtures and independent oracles shared by the test
// suites. Nothing here calls into the library's spectral code paths.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "sdrkit/audio.hpp"

namespace sdrkit::testing {

// Distribution helpers built only on the raw mt19937_64 stream (which the
// standard fixes bit for bit), so frozen reference values do not depend on
// the standard library's distribution algorithms.
inline double Uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double StdNormal(std::mt19937_64& rng) {
  const double u1 = 1.0 - Uniform01(rng);  // (0, 1]
  const double u2 = Uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline Signal Gaussian(std::size_t n, std::mt19937_64& rng, double sigma = 1.0) {
  Signal x(n);
  for (double& v : x) v = sigma * StdNormal(rng);
  return x;
}

inline Signal Sine(std::size_t n, double hz, int sr, double amp = 1.0, double phase = 0.0) {
  Signal x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = amp * std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) / sr + phase);
  return x;
}

// Speech-like signal: voiced syllables (gliding f0, harmonics shaped by three
// formant resonances), fricative noise bursts and pauses.
inline Signal SyntheticSpeech(std::uint64_t seed, int sr, double seconds) {
  std::mt19937_64 rng(seed);
  auto u = [](std::mt19937_64& r) { return Uniform01(r); };
  auto g = [](std::mt19937_64& r) { return StdNormal(r); };
  const std::size_t total = static_cast<std::size_t>(seconds * sr);
  Signal out(total, 0.0);
  std::size_t pos = static_cast<std::size_t>(0.1 * sr);
  double phase = 0.0;
  while (pos < total) {
    const double kind = u(rng);
    if (kind < 0.65) {
      const std::size_t len = static_cast<std::size_t>((0.12 + 0.2 * u(rng)) * sr);
      const double f0a = 90.0 + 140.0 * u(rng);
      const double f0b = f0a * (0.8 + 0.4 * u(rng));
      const double formants[3] = {300.0 + 600.0 * u(rng), 900.0 + 1600.0 * u(rng),
                                  2500.0 + 1000.0 * u(rng)};
      const double widths[3] = {90.0, 140.0, 220.0};
      for (std::size_t i = 0; i < len && pos + i < total; ++i) {
        const double frac = static_cast<double>(i) / static_cast<double>(len);
        const double f0 = f0a + (f0b - f0a) * frac;
        phase += 2.0 * std::numbers::pi * f0 / sr;
        double v = 0.0;
        for (int h = 1; h * f0 < sr / 2.0; ++h) {
          const double f = h * f0;
          double gain = 0.02;
          for (int k = 0; k < 3; ++k) gain += 1.0 / (1.0 + std::pow((f - formants[k]) / widths[k], 2));
          v += gain * std::sin(h * phase) / std::sqrt(static_cast<double>(h));
        }
        const double env = std::sin(std::numbers::pi * frac);
        out[pos + i] += 0.15 * env * v;
      }
      pos += len;
    } else if (kind < 0.85) {
      const std::size_t len = static_cast<std::size_t>((0.05 + 0.1 * u(rng)) * sr);
      double prev = 0.0;
      for (std::size_t i = 0; i < len && pos + i < total; ++i) {
        const double w = g(rng);
        const double hp = w - 0.9 * prev;
        prev = w;
        const double env = std::sin(std::numbers::pi * static_cast<double>(i) / len);
        out[pos + i] += 0.05 * env * hp;
      }
      pos += len;
    } else {
      pos += static_cast<std::size_t>((0.05 + 0.15 * u(rng)) * sr);
    }
  }
  return out;
}

// Direct O(N^2) DFT of one frame, bins 0..N/2.
inline std::vector<std::complex<double>> NaiveDft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      acc += x[i] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * i % n) /
                                        static_cast<double>(n));
    out[k] = acc;
  }
  return out;
}

// Independent framing: centre-padded periodic-Hann frames, naive DFT,
// returns |X|^2 as [frame][bin].
inline std::vector<std::vector<double>> NaiveStftPower(const Signal& x, std::size_t n,
                                                       std::size_t hop) {
  const std::size_t pad = n / 2;
  const std::size_t frames = (x.size() + 2 * pad - n) / hop + 1;
  std::vector<std::vector<double>> out;
  for (std::size_t t = 0; t < frames; ++t) {
    std::vector<double> frame(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const long p = static_cast<long>(t * hop + i) - static_cast<long>(pad);
      if (p >= 0 && p < static_cast<long>(x.size()))
        frame[i] = (0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n)) * x[p];
    }
    const auto spec = NaiveDft(frame);
    std::vector<double> pw(spec.size());
    for (std::size_t k = 0; k < spec.size(); ++k) pw[k] = std::norm(spec[k]);
    out.push_back(std::move(pw));
  }
  return out;
}

inline Signal NaiveConvolve(const Signal& a, const Signal& b) {
  Signal out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

inline double RelativeL2(const Signal& a, const Signal& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / std::max(den, 1e-300));
}

inline double MaxAbsDiff(const Signal& a, const Signal& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace sdrkit::testing
