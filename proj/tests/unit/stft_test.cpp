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

#include "sdrkit/stft.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "sdrkit/error.hpp"

namespace sdrkit {
namespace {

using testing::Gaussian;

double RealInner(const ComplexMatrix& a, const ComplexMatrix& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (std::conj(a.flat()[i]) * b.flat()[i]).real();
  return acc;
}

TEST(StftTest, FrameCountFollowsPaddedLength) {
  StftConfig cfg;
  EXPECT_EQ(cfg.FrameCount(16000), (16000 + 512 - 512) / 256 + 1);
  cfg.center = false;
  EXPECT_EQ(cfg.FrameCount(511), 0u);
  EXPECT_EQ(cfg.FrameCount(512), 1u);
  EXPECT_EQ(cfg.FrameCount(1023), 2u);
}

TEST(StftTest, ZeroSignalGivesZeroSpectrogram) {
  const Spectrogram s = Stft(Signal(4000, 0.0), {}, 16000);
  EXPECT_EQ(s.bins.rows(), 257u);
  for (const auto& v : s.bins.flat()) EXPECT_EQ(v, std::complex<double>(0.0));
}

TEST(StftTest, MatchesDirectDft) {
  std::mt19937_64 rng(5);
  const Signal x = Gaussian(1500, rng);
  const StftConfig cfg{256, 64};
  const Spectrogram s = Stft(x, cfg, 16000);
  const auto ref = testing::NaiveStftPower(x, 256, 64);
  ASSERT_EQ(ref.size(), s.bins.cols());
  for (std::size_t t = 0; t < ref.size(); ++t)
    for (std::size_t k = 0; k < 129; ++k)
      ASSERT_NEAR(std::norm(s.bins(k, t)), ref[t][k], 1e-9 * (1.0 + ref[t][k]));
}

TEST(StftTest, ImpulseEnergyMatchesWindowNorm) {
  // An impulse at the centre of frame t only excites frames whose window
  // covers it; each frame contributes N * w[n]^2 (two-sided Parseval).
  const StftConfig cfg{512, 128};
  Signal x(4096, 0.0);
  x[2048] = 1.0;
  const Spectrogram s = Stft(x, cfg, 16000);
  const std::vector<double> w = HannWindow(512);
  double expected = 0.0;
  for (std::size_t t = 0; t < s.bins.cols(); ++t) {
    const long i = 2048 + 256 - static_cast<long>(t * 128);
    if (i >= 0 && i < 512) expected += 512.0 * w[i] * w[i];
  }
  // Closed form: the hop-128 shifts of a periodic Hann squared sum to 3/2.
  EXPECT_NEAR(expected, 512.0 * 1.5, 1e-9);
  EXPECT_NEAR(SpectralEnergy(s.bins, 512), expected, 1e-9 * expected);
}

TEST(StftTest, ParsevalWithWindowCompensation) {
  std::mt19937_64 rng(17);
  for (std::size_t n : {256u, 512u, 1024u}) {
    const StftConfig cfg{n, n / 4};
    Signal x(8 * n, 0.0);
    for (std::size_t i = n; i < 7 * n; ++i) x[i] = std::normal_distribution<double>()(rng);
    const double cw = n * (3.0 * n / 8.0) / static_cast<double>(cfg.hop);
    const double lhs = SpectralEnergy(Stft(x, cfg, 16000).bins, n);
    EXPECT_NEAR(lhs / (cw * Energy(x)), 1.0, 1e-8) << "fft " << n;
  }
}

TEST(StftTest, BinCentredSineConcentratesInMainLobe) {
  const int sr = 16000;
  const std::size_t k = 40;
  const Signal x = testing::Sine(8192, k * sr / 512.0, sr);
  const Spectrogram s = Stft(x, {}, sr);
  for (std::size_t t = 2; t + 2 < s.bins.cols(); ++t) {
    double total = 0.0;
    for (std::size_t b = 0; b < 257; ++b) total += std::norm(s.bins(b, t));
    const double lobe = std::norm(s.bins(k - 1, t)) + std::norm(s.bins(k, t)) +
                        std::norm(s.bins(k + 1, t));
    EXPECT_GE(lobe / total, 0.99);
    // Periodic Hann: sidelobe bins carry exactly half the centre amplitude.
    EXPECT_NEAR(std::abs(s.bins(k + 1, t)) / std::abs(s.bins(k, t)), 0.5, 1e-9);
    EXPECT_NEAR(std::abs(s.bins(k, t)), 512.0 / 4.0, 1e-8);
  }
}

TEST(StftTest, Linearity) {
  std::mt19937_64 rng(23);
  const Signal x = Gaussian(3000, rng), y = Gaussian(3000, rng);
  const double a = 1.7, b = -0.3;
  Signal z(3000);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = a * x[i] + b * y[i];
  const auto sx = Stft(x, {}, 16000), sy = Stft(y, {}, 16000), sz = Stft(z, {}, 16000);
  double err = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < sz.bins.size(); ++i) {
    err += std::norm(sz.bins.flat()[i] - (a * sx.bins.flat()[i] + b * sy.bins.flat()[i]));
    ref += std::norm(sz.bins.flat()[i]);
  }
  EXPECT_LE(std::sqrt(err / ref), 1e-12);
}

TEST(StftTest, RoundtripRandomSecond) {
  std::mt19937_64 rng(29);
  const Signal x = Gaussian(16000, rng);
  for (std::size_t hop : {256u, 128u}) {
    const Signal y = Istft(Stft(x, {512, hop}, 16000));
    ASSERT_EQ(y.size(), x.size());
    EXPECT_LE(testing::RelativeL2(y, x), 1e-10);
  }
}

TEST(StftTest, IstftOfZeroIsZero) {
  Spectrogram s{ComplexMatrix(257, 10), StftConfig{}, 16000, 2304};
  for (double v : Istft(s)) EXPECT_EQ(v, 0.0);
}

TEST(StftTest, IstftIsLinear) {
  std::mt19937_64 rng(31);
  const auto a = Stft(Gaussian(5000, rng), {}, 16000);
  auto b = Stft(Gaussian(5000, rng), {}, 16000);
  Spectrogram sum = a;
  for (std::size_t i = 0; i < sum.bins.size(); ++i) sum.bins.flat()[i] += b.bins.flat()[i];
  const Signal ya = Istft(a), yb = Istft(b), ys = Istft(sum);
  for (std::size_t i = 0; i < ys.size(); ++i) ASSERT_NEAR(ys[i], ya[i] + yb[i], 1e-12);
}

TEST(StftTest, AdjointIdentity) {
  std::mt19937_64 rng(37);
  for (const StftConfig cfg : {StftConfig{}, StftConfig{256, 64}, StftConfig{512, 256, Window::kHann, false}}) {
    const Signal x = Gaussian(2000, rng);
    const Spectrogram sx = Stft(x, cfg, 16000);
    ComplexMatrix y(sx.bins.rows(), sx.bins.cols());
    for (auto& v : y.flat()) v = {std::normal_distribution<double>()(rng), std::normal_distribution<double>()(rng)};
    const double lhs = RealInner(y, sx.bins);
    const double rhs = Dot(x, StftAdjoint(y, cfg, x.size()));
    EXPECT_NEAR(lhs, rhs, 1e-9 * std::abs(lhs) + 1e-9);
  }
}

TEST(StftTest, FullDftAdjointIdentity) {
  std::mt19937_64 rng(41);
  for (std::size_t len : {64u, 65u, 1000u}) {
    const Signal x = Gaussian(len, rng);
    const ComplexMatrix fx = FullDft(x);
    ComplexMatrix y(fx.rows(), 1);
    for (auto& v : y.flat()) v = {std::normal_distribution<double>()(rng), std::normal_distribution<double>()(rng)};
    const double lhs = RealInner(y, fx);
    EXPECT_NEAR(lhs, Dot(x, FullDftAdjoint(y, len)), 1e-9 * std::abs(lhs) + 1e-9);
  }
}

TEST(StftTest, ConfigErrors) {
  EXPECT_THROW((StftConfig{512, 300}.Validate()), Error);
  EXPECT_THROW((StftConfig{512, 0}.Validate()), Error);
  EXPECT_THROW((StftConfig{512, 513}.Validate()), Error);
  EXPECT_NO_THROW((StftConfig{512, 128}.Validate()));
  try {
    Stft(Signal(100, 1.0), StftConfig{512, 256, Window::kHann, false}, 16000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooShort);
  }
  Spectrogram bad{ComplexMatrix(257, 4), StftConfig{512, 300}, 16000, 1000};
  EXPECT_THROW(Istft(bad), Error);
}

}  // namespace
}  // namespace sdrkit
