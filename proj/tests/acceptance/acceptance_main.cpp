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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Each check compares the library against an independent oracle
// or a stated invariant at the criterion's own tolerance.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "sdrkit/decomposition.hpp"
#include "sdrkit/loss.hpp"
#include "sdrkit/metrics.hpp"
#include "sdrkit/mixer.hpp"
#include "sdrkit/phoneme.hpp"
#include "sdrkit/scales.hpp"
#include "sdrkit/stoi.hpp"
#include "sdrkit/wav.hpp"
#include "sdrkit/weighting.hpp"

namespace sdrkit {
namespace {

using testing::Gaussian;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a failed requirement; keeps the first few messages.
  void Require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass) detail << "failed: ";
    else detail << "; ";
    if (++failures <= 3) detail << what;
    pass = false;
  }
  int failures = 0;
};

class Stopwatch {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Signal Axpy(const Signal& x, double a, const Signal& y) {
  Signal out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * y[i];
  return out;
}

// Noise scaled so that 10 log10(E_clean / E_noise) = snr_db.
Signal NoiseAtSnr(const Signal& clean, const Signal& noise, double snr_db) {
  const double g = std::sqrt(Energy(clean) / (Energy(noise) * std::pow(10.0, snr_db / 10.0)));
  Signal out(noise);
  for (double& v : out) v *= g;
  return out;
}

void DecompositionExactness(Outcome& o) {
  std::mt19937_64 rng(2024);
  double recon = 0.0, ortho = 0.0, ratio = 0.0;
  const Stopwatch clock;
  for (int trial = 0; trial < 1000; ++trial) {
    const Signal s = Gaussian(64, rng), n = Gaussian(64, rng), a = Gaussian(64, rng);
    const double ks = 0.2 + testing::Uniform01(rng), kn = testing::Uniform01(rng);
    const double ka = 0.05 + 0.5 * testing::Uniform01(rng);
    Signal est(64);
    for (std::size_t i = 0; i < 64; ++i) est[i] = ks * s[i] + kn * n[i] + ka * a[i];

    const Decomposition d = Decompose(est, s, n);
    Signal sum(64), target(64);
    for (std::size_t i = 0; i < 64; ++i) {
      sum[i] = d.s_proj[i] + d.e_interf[i] + d.e_artif[i];
      target[i] = d.s_proj[i] + d.e_interf[i];
    }
    recon = std::max(recon, testing::RelativeL2(sum, est));
    const double norm_p = std::sqrt(testing::SumSq(d.s_proj));
    const double norm_t = std::sqrt(testing::SumSq(target));
    ortho = std::max({ortho,
                      std::abs(Dot(d.s_proj, d.e_interf)) / (norm_p * std::sqrt(testing::SumSq(d.e_interf))),
                      std::abs(Dot(target, d.e_artif)) / (norm_t * std::sqrt(testing::SumSq(d.e_artif))),
                      std::abs(Dot(d.s_proj, d.e_artif)) / (norm_p * std::sqrt(testing::SumSq(d.e_artif)))});

    const testing::OracleParts q = testing::NormalEquationOracle(est, s, n);
    Signal q_dist(64), q_target(64);
    for (std::size_t i = 0; i < 64; ++i) {
      q_dist[i] = q.e_interf[i] + q.e_artif[i];
      q_target[i] = q.s_proj[i] + q.e_interf[i];
    }
    const RatioReport r = TimeRatios(d);
    ratio = std::max({ratio,
                      std::abs(r.sdr_db - testing::Db(testing::SumSq(q.s_proj), testing::SumSq(q_dist))),
                      std::abs(r.sir_db - testing::Db(testing::SumSq(q.s_proj), testing::SumSq(q.e_interf))),
                      std::abs(r.sar_db - testing::Db(testing::SumSq(q_target), testing::SumSq(q.e_artif)))});
  }
  const double secs = clock.Seconds();
  o.Require(recon <= 1e-10, "reconstruction " + Num(recon));
  o.Require(ortho <= 1e-8, "orthogonality " + Num(ortho));
  o.Require(ratio <= 1e-9, "oracle ratio gap " + Num(ratio) + " dB");
  o.Require(secs < 5.0, "runtime " + Num(secs) + " s");
  o.detail << (o.pass ? "" : " | ") << "1000 triples, recon " << Num(recon) << ", ortho "
           << Num(ortho) << ", oracle gap " << Num(ratio) << " dB, " << Num(secs) << " s";
}

void ParsevalConsistency(Outcome& o) {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t len = 64 + 5 * static_cast<std::size_t>(trial);
    const Signal s = Gaussian(len, rng), n = Gaussian(len, rng), a = Gaussian(len, rng);
    Signal est(len);
    for (std::size_t i = 0; i < len; ++i) est[i] = s[i] + 0.5 * n[i] + 0.3 * a[i];
    const Decomposition d = Decompose(est, s, n);
    const double time_db = TimeRatios(d).sdr_db;
    const double naive_db = testing::Db(testing::NaiveSpectralEnergy(d.s_proj),
                                        testing::NaiveSpectralEnergy(d.e_dist()));
    const double fft_db = testing::Db(SpectralEnergy(FullDft(d.s_proj), len),
                                      SpectralEnergy(FullDft(d.e_dist()), len));
    worst = std::max({worst, std::abs(time_db - naive_db), std::abs(time_db - fft_db)});
  }
  o.Require(worst <= 1e-6, "gap " + Num(worst) + " dB");
  o.detail << (o.pass ? "" : " | ") << "100 instances, max gap " << Num(worst) << " dB";
}

void ConstantWeightReduction(Outcome& o) {
  std::mt19937_64 rng(11);
  const std::size_t len = 6000;
  const Signal clean = testing::SyntheticSpeech(77, 16000, len / 16000.0);
  const Signal noise = Gaussian(clean.size(), rng, 0.1), art = Gaussian(clean.size(), rng, 0.02);
  Signal est(clean.size());
  for (std::size_t i = 0; i < est.size(); ++i) est[i] = clean[i] + 0.4 * noise[i] + art[i];

  // Unweighted aggregate from naive framing and DFT.
  const Decomposition d = Decompose(est, clean, noise);
  const auto pp = testing::NaiveStftPower(d.s_proj, 512, 256);
  const auto pd = testing::NaiveStftPower(d.e_dist(), 512, 256);
  const Filterbank mel = MelFilterbank(512, 16000, MelOptions{});
  auto aggregate_db = [&](bool pooled) {
    double a = 0.0, b = 0.0;
    for (std::size_t t = 0; t < pp.size(); ++t)
      for (std::size_t k = 0; k < pp[t].size(); ++k) {
        double w = 1.0;
        if (pooled) {
          w = 0.0;
          for (std::size_t band = 0; band < mel.bands(); ++band) w += mel.weights(band, k);
        }
        a += w * pp[t][k];
        b += w * pd[t][k];
      }
    return testing::Db(a, b);
  };
  const double linear_db = aggregate_db(false), mel_db = aggregate_db(true);

  double worst = 0.0;
  for (LossId id : {LossId::kL5, LossId::kL6, LossId::kL7, LossId::kL8, LossId::kL9,
                    LossId::kL10, LossId::kL11}) {
    const SdrLoss loss(LossConfig::FromId(id));
    const WeightMap shape = loss.Weights(est, clean, noise);
    const bool pooled = CatalogSignature(id).scale == LossScale::kMel;
    for (double c : {1.0, 0.37}) {
      const WeightMap w{RealMatrix(shape.w.rows(), shape.w.cols(), c), false};
      const double v = loss.EvaluateWithWeights(est, clean, noise, w).value;
      const double gap = std::abs(-v - (pooled ? mel_db : linear_db));
      worst = std::max(worst, gap);
      o.Require(gap <= 1e-10, LossIdName(id) + " gap " + Num(gap) + " dB");
    }
  }
  o.detail << (o.pass ? "" : " | ") << "L5-L11 at two constants, linear and Mel scales, max gap "
           << Num(worst) << " dB";
}

void SoftmaxSuite(Outcome& o) {
  std::mt19937_64 rng(13);
  RealMatrix db(40, 25);
  for (double& v : db.flat()) v = -60.0 + 120.0 * testing::Uniform01(rng);
  const RealMatrix lin = DbToLinear(db);

  double sum_err = 0.0, shift_err = 0.0, scale_err = 0.0;
  for (const WeightMap& w :
       {WeightsSirSoftmax(db, SirWeighting::kNegSir), WeightsSirSoftmax(lin, SirWeighting::kNegLogSir)}) {
    double s = 0.0;
    for (double v : w.w.flat()) s += v;
    sum_err = std::max(sum_err, std::abs(s - 1.0));
  }
  const WeightMap base = WeightsSirSoftmax(db, SirWeighting::kNegSir);
  for (double shift : {-30.0, 3.5, 41.0}) {
    RealMatrix m = db;
    for (double& v : m.flat()) v += shift;
    const WeightMap w = WeightsSirSoftmax(m, SirWeighting::kNegSir);
    for (std::size_t i = 0; i < m.size(); ++i)
      shift_err = std::max(shift_err, std::abs(w.w.flat()[i] - base.w.flat()[i]));
  }
  const WeightMap lbase = WeightsSirSoftmax(lin, SirWeighting::kNegLogSir);
  for (double scale : {1e-3, 2.0, 1e4}) {
    RealMatrix m = lin;
    for (double& v : m.flat()) v *= scale;
    const WeightMap w = WeightsSirSoftmax(m, SirWeighting::kNegLogSir);
    for (std::size_t i = 0; i < m.size(); ++i)
      scale_err = std::max(scale_err, std::abs(w.w.flat()[i] - lbase.w.flat()[i]));
  }

  RealMatrix two_db(2, 1), two_lin(2, 1);
  two_db(0, 0) = 10.0;
  two_db(1, 0) = 0.0;
  two_lin(0, 0) = 4.0;
  two_lin(1, 0) = 1.0;
  const WeightMap a = WeightsSirSoftmax(two_db, SirWeighting::kNegSir);
  const WeightMap b = WeightsSirSoftmax(two_lin, SirWeighting::kNegLogSir);
  const double e = std::exp(-10.0);
  const double hand = std::max({std::abs(a.w(0, 0) - e / (1.0 + e)), std::abs(a.w(1, 0) - 1.0 / (1.0 + e)),
                                std::abs(b.w(0, 0) - 0.2), std::abs(b.w(1, 0) - 0.8)});

  o.Require(sum_err <= 1e-9, "sum " + Num(sum_err));
  o.Require(shift_err <= 1e-12, "dB shift " + Num(shift_err));
  o.Require(scale_err <= 1e-12, "linear scale " + Num(scale_err));
  o.Require(hand <= 1e-12, "two-bin examples " + Num(hand));
  o.detail << (o.pass ? "" : " | ") << "sum " << Num(sum_err) << ", shift " << Num(shift_err)
           << ", scale " << Num(scale_err) << ", two-bin " << Num(hand);
}

void GradientChecks(Outcome& o) {
  const Stopwatch clock;
  const double step = 1e-5;
  double worst = 0.0;
  std::string worst_id;
  for (LossId id : AllLossIds()) {
    const SdrLoss loss(LossConfig::FromId(id));
    std::mt19937_64 rng(5000 + static_cast<int>(id));
    double id_worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const Signal clean = Gaussian(1024, rng), noise = Gaussian(1024, rng);
      const Signal art = Gaussian(1024, rng, 0.3);
      Signal est(1024);
      for (std::size_t i = 0; i < 1024; ++i) est[i] = clean[i] + 0.5 * noise[i] + art[i];

      // Weights are detached: frozen at the expansion point.
      const WeightMap w = loss.weighted() ? loss.Weights(est, clean, noise) : WeightMap{};
      const auto f = [&](const Signal& x) {
        return loss.weighted() ? loss.EvaluateWithWeights(x, clean, noise, w).value
                               : loss.Evaluate(x, clean, noise).value;
      };
      const Signal g = loss.weighted() ? loss.GradientWithWeights(est, clean, noise, w)
                                       : loss.Gradient(est, clean, noise);
      double err = 0.0, scale = 0.0;
      Signal probe = est;
      for (std::size_t i = 0; i < 1024; ++i) {
        probe[i] = est[i] + step;
        const double up = f(probe);
        probe[i] = est[i] - step;
        const double down = f(probe);
        probe[i] = est[i];
        const double fd = (up - down) / (2.0 * step);
        err = std::max(err, std::abs(g[i] - fd));
        scale = std::max(scale, std::abs(fd));
      }
      id_worst = std::max(id_worst, err / scale);
    }
    o.Require(id_worst < 1e-5, LossIdName(id) + " rel err " + Num(id_worst));
    if (id_worst >= worst) {
      worst = id_worst;
      worst_id = LossIdName(id);
    }
  }
  const double secs = clock.Seconds();
  o.Require(secs < 60.0, "runtime " + Num(secs) + " s");
  o.detail << (o.pass ? "" : " | ") << "L1-L11 x 10 triples x 1024, worst " << worst_id << " "
           << Num(worst) << ", " << Num(secs) << " s";
}

void CatalogIntegrity(Outcome& o) {
  using D = LossDomain;
  using S = LossScale;
  using W = LossWeighting;
  const LossSignature table[kLossCount] = {
      {D::kTime, S::kNone, W::kNone},
      {D::kFrequency, S::kNone, W::kNone},
      {D::kTimeFrequency, S::kLinear, W::kNone},
      {D::kTimeFrequency, S::kMel, W::kNone},
      {D::kTimeFrequency, S::kLinear, W::kSpectralMagnitude},
      {D::kTimeFrequency, S::kMel, W::kSpectralMagnitude},
      {D::kTimeFrequency, S::kMel, W::kAnsi},
      {D::kTimeFrequency, S::kLinear, W::kNegSir},
      {D::kTimeFrequency, S::kLinear, W::kNegLogSir},
      {D::kTimeFrequency, S::kMel, W::kNegSir},
      {D::kTimeFrequency, S::kMel, W::kNegLogSir},
  };
  const auto ids = AllLossIds();
  o.Require(ids.size() == kLossCount, "catalog size");
  for (std::size_t i = 0; i < ids.size() && i < kLossCount; ++i) {
    o.Require(LossIdName(ids[i]) == "L" + std::to_string(i + 1), "id order");
    o.Require(CatalogSignature(ids[i]) == table[i], LossIdName(ids[i]) + " signature");
    o.Require(LossConfig::FromId(ids[i]).signature == table[i], LossIdName(ids[i]) + " config");
  }

  std::mt19937_64 rng(17);
  const Signal clean = testing::SyntheticSpeech(19, 16000, 0.5);
  const Signal noise = Gaussian(clean.size(), rng, 0.1);
  const Signal est = Axpy(Axpy(clean, 0.5, noise), 0.05, Gaussian(clean.size(), rng, 0.1));
  const auto identity = std::make_shared<const Filterbank>(Filterbank::Identity(257, 31.25));
  double worst = 0.0;
  for (auto [mel_id, lin_id] : {std::pair{LossId::kL4, LossId::kL3}, {LossId::kL6, LossId::kL5},
                                {LossId::kL10, LossId::kL8}, {LossId::kL11, LossId::kL9}}) {
    LossConfig cfg = LossConfig::FromId(mel_id);
    cfg.mel_override = identity;
    const double a = EvaluateLoss(cfg, est, clean, noise).value;
    const double b = EvaluateLoss(LossConfig::FromId(lin_id), est, clean, noise).value;
    worst = std::max(worst, std::abs(a - b));
    o.Require(std::abs(a - b) <= 1e-10, LossIdName(mel_id) + " vs " + LossIdName(lin_id));
  }
  o.detail << (o.pass ? "" : " | ") << "11 signatures, identity-filterbank gap " << Num(worst);
}

void StoiChecks(Outcome& o) {
  double identity_err = 0.0;
  int monotone = 0;
  for (int k = 0; k < 10; ++k) {
    const Signal clean = testing::SyntheticSpeech(101 + k, 16000, 3.0);
    std::mt19937_64 rng(1000 + k);
    const Signal white = Gaussian(clean.size(), rng);
    identity_err = std::max(identity_err, std::abs(Stoi(clean, clean, 16000) - 1.0));
    double prev = 2.0;
    bool ok = true;
    for (double snr : {20.0, 10.0, 0.0, -10.0}) {
      const double v = Stoi(clean, Axpy(clean, 1.0, NoiseAtSnr(clean, white, snr)), 16000);
      ok = ok && v < prev;
      prev = v;
    }
    monotone += ok;
    o.Require(ok, "fixture " + std::to_string(k) + " not strictly decreasing");
  }
  o.Require(identity_err <= 1e-6, "identity " + Num(identity_err));
  o.detail << (o.pass ? "" : " | ") << "identity err " << Num(identity_err) << ", strictly decreasing on "
           << monotone << "/10 fixtures";
}

void L3Monotonicity(Outcome& o) {
  const SdrLoss loss(LossConfig::FromId(LossId::kL3));
  int ok_count = 0;
  for (int k = 0; k < 5; ++k) {
    const Signal clean = testing::SyntheticSpeech(300 + k, 16000, 1.5);
    std::mt19937_64 rng(400 + k);
    const Signal noise = NoiseAtSnr(clean, Gaussian(clean.size(), rng), 0.0);
    double prev = -1e300;
    bool ok = true;
    for (double alpha : {0.1, 0.5, 1.0}) {
      const double v = loss.Evaluate(Axpy(clean, alpha, noise), clean, noise).value;
      ok = ok && v > prev;
      prev = v;
    }
    ok_count += ok;
    o.Require(ok, "fixture " + std::to_string(k));
  }
  o.detail << (o.pass ? "" : " | ") << "strictly increasing on " << ok_count << "/5 fixtures";
}

std::vector<double> BandSpectrumDb(std::span<const AudioBuffer> items) {
  const std::vector<double> psd = WelchPsd(items, 512);
  const Filterbank fb = ThirdOctaveBands(512, 16000);
  std::vector<double> bands(fb.bands(), 0.0);
  double total = 0.0;
  for (std::size_t b = 0; b < fb.bands(); ++b) {
    for (std::size_t k = 0; k < fb.bins(); ++k) bands[b] += fb.weights(b, k) * psd[k];
    total += bands[b];
  }
  for (double& v : bands) v = 10.0 * std::log10(v / total);
  return bands;
}

void MixerChecks(Outcome& o) {
  std::mt19937_64 rng(23);
  const Signal dry_clean = testing::SyntheticSpeech(51, 16000, 2.0);
  const Signal dry_noise = Gaussian(dry_clean.size(), rng, 0.2);
  std::vector<Signal> rc(4), rn(4);
  for (std::size_t c = 0; c < 4; ++c) {
    rc[c] = Gaussian(1200, rng, 0.05);
    rn[c] = Gaussian(1200, rng, 0.05);
    for (std::size_t i = 0; i < 1200; ++i) {
      rc[c][i] *= std::exp(-0.006 * i);
      rn[c][i] *= std::exp(-0.004 * i);
    }
    rc[c][3 * c] += 1.0;
    rn[c][7 + c] += 0.8;
  }
  const AudioBuffer clean = AudioBuffer::Mono(dry_clean, 16000);
  const AudioBuffer noise = AudioBuffer::Mono(dry_noise, 16000);
  const AudioBuffer rir_c(rc, 16000), rir_n(rn, 16000);
  double sir_err = 0.0;
  for (std::size_t ref : {0u, 3u})
    for (double target : {-10.0, -5.0, 0.0, 5.0, 10.0}) {
      MixSpec spec;
      spec.target_sir_db = target;
      spec.ref_channel = ref;
      const SpatialMix m = MixSources(clean, noise, rir_c, rir_n, spec);
      // Re-measured from the delivered signals: noise = mixture - clean image.
      const auto mix = m.mix.mixture.channel(ref), img = m.clean_image.channel(ref);
      Signal residual(mix.size());
      for (std::size_t i = 0; i < mix.size(); ++i) residual[i] = mix[i] - img[i];
      const double measured = testing::Db(Energy(img), Energy(residual));
      sir_err = std::max(sir_err, std::abs(measured - target));
    }
  o.Require(sir_err <= 0.01, "SIR error " + Num(sir_err) + " dB");

  std::vector<AudioBuffer> corpus;
  for (int k = 0; k < 10; ++k)
    corpus.push_back(AudioBuffer::Mono(testing::SyntheticSpeech(500 + k, 16000, 3.5), 16000));
  const AudioBuffer ssn = GenerateSsn(corpus, 60.0, 11);
  const auto want = BandSpectrumDb(corpus);
  const auto got = BandSpectrumDb(std::span<const AudioBuffer>(&ssn, 1));
  double band_err = 0.0;
  for (std::size_t b = 0; b < want.size(); ++b) band_err = std::max(band_err, std::abs(got[b] - want[b]));
  o.Require(band_err <= 1.0, "SSN band deviation " + Num(band_err) + " dB");
  o.detail << (o.pass ? "" : " | ") << "max SIR error " << Num(sir_err)
           << " dB over 10 targets, SSN max band deviation " << Num(band_err) << " dB (160-8000 Hz)";
}

void PhonemePipeline(Outcome& o) {
  const int sr = 16000;
  const Signal clean = testing::SyntheticSpeech(61, sr, 2.5);
  std::mt19937_64 rng(62);
  const Signal noise = Gaussian(clean.size(), rng, 0.05);
  const Signal mixture = Axpy(clean, 1.0, noise);
  const Signal est = Axpy(Axpy(clean, 0.3, noise), 1.0, Gaussian(clean.size(), rng, 0.01));

  const auto seg = [](double a, double b, const char* label) {
    return PhonemeSegment{a, b, label, Categorize(label)};
  };
  const std::vector<PhonemeSegment> base{seg(0.1, 0.7, "T"), seg(0.7, 1.4, "IY1"),
                                         seg(1.4, 2.2, "SH"), seg(2.2, 2.5, "N")};
  const std::vector<PhonemeSegment> split{seg(0.1, 0.35, "T"), seg(0.35, 0.7, "D"),
                                          seg(0.7, 1.1, "IY1"), seg(1.1, 1.4, "IY0"),
                                          seg(1.4, 1.9, "SH"), seg(1.9, 2.2, "S"),
                                          seg(2.2, 2.5, "N")};
  const CategoryTable a = PerCategoryMetrics(est, mixture, clean, noise, sr, base);
  const CategoryTable b = PerCategoryMetrics(est, mixture, clean, noise, sr, split);
  double split_gap = 0.0;
  o.Require(a.rows.size() == 4 && b.rows.size() == 4, "row count");
  for (std::size_t r = 0; r < std::min(a.rows.size(), b.rows.size()); ++r) {
    const MetricReport& x = a.rows[r].report;
    const MetricReport& y = b.rows[r].report;
    for (auto [p, q] : {std::pair{x.sir_in, y.sir_in}, {x.sir_out, y.sir_out}, {x.sar_out, y.sar_out},
                        {x.sdr_out, y.sdr_out}, {x.fw_sir_in, y.fw_sir_in}, {x.fw_sir_out, y.fw_sir_out},
                        {x.fw_sar_out, y.fw_sar_out}, {x.fw_sdr_out, y.fw_sdr_out}})
      split_gap = std::max(split_gap, std::abs(p - q));
  }
  o.Require(split_gap <= 1e-9, "split gap " + Num(split_gap) + " dB");

  MetricConfig cfg;
  cfg.with_stoi = false;
  const MetricReport whole = Report(mixture, est, clean, noise, sr, cfg);
  const std::vector<PhonemeSegment> full{seg(0.0, 2.5, "AA1")};
  const CategoryTable single = PerCategoryMetrics(est, mixture, clean, noise, sr, full);
  o.Require(single.rows.size() == 1, "single-segment row count");
  if (!single.rows.empty())
    o.Require(ReportToJson(single.rows[0].report) == ReportToJson(whole),
              "single segment differs from whole utterance");

  const std::string header =
      "Loss,Phoneme,SIR_in,SIR_out,SAR_out,SDR_out,FW-SIR_in,FW-SIR_out,FW-SAR_out,FW-SDR_out";
  o.Require(PhonemeCsvHeader() == header, "CSV header");
  o.detail << (o.pass ? "" : " | ") << "split gap " << Num(split_gap)
           << " dB, single segment equals whole utterance, header matches";
}

#ifdef SDRKIT_CLI_PATH
struct Proc {
  int code = -1;
  std::string out;
};

Proc RunCli(const std::filesystem::path& dir, const std::string& args) {
  const std::string cmd = "cd '" + dir.string() + "' && '" SDRKIT_CLI_PATH "' " + args + " 2>/dev/null";
  Proc p;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return p;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) p.out.append(buf, n);
  const int status = ::pclose(pipe);
  p.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return p;
}
#endif

void CliRegression(Outcome& o) {
#ifndef SDRKIT_CLI_PATH
  o.Require(false, "command-line tool not built");
#else
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("sdrkit_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  int triples = 0;
  for (int k = 0; k < 3; ++k) {
    const Signal clean = testing::SyntheticSpeech(800 + k, 16000, 2.0);
    std::mt19937_64 rng(900 + k);
    const Signal noise = Gaussian(clean.size(), rng, 0.05);
    const auto write = [&](const std::string& name, const Signal& x) {
      WriteWav(AudioBuffer::Mono(x, 16000), dir / (name + std::to_string(k) + ".wav"));
    };
    write("clean", clean);
    write("noise", noise);
    write("mix", Axpy(clean, 1.0, noise));
    write("est", Axpy(Axpy(clean, 0.3, noise), 1.0, Gaussian(clean.size(), rng, 0.005)));
    const std::string kk = std::to_string(k);
    const std::string files = "est" + kk + ".wav mix" + kk + ".wav clean" + kk + ".wav noise" + kk + ".wav";
    for (const std::string& args :
         {"eval " + files, "loss --id L3 --id L11 est" + kk + ".wav clean" + kk + ".wav noise" + kk + ".wav"}) {
      const Proc first = RunCli(dir, args), second = RunCli(dir, args);
      o.Require(first.code == 0 && !first.out.empty(), "'" + args + "' failed");
      o.Require(first.out == second.out, "'" + args + "' output differs between runs");
    }
    ++triples;
  }
  const Proc csv = RunCli(dir, "eval --format csv est0.wav mix0.wav clean0.wav noise0.wav");
  const std::string table_order = "SIR_out,SAR_out,SDR_out,FW-SIR_out,FW-SAR_out,FW-SDR_out,STOI_out";
  o.Require(csv.code == 0 && csv.out.rfind(table_order + "\n", 0) == 0, "eval CSV header order");
  std::error_code ec;
  fs::remove_all(dir, ec);
  o.detail << (o.pass ? "" : " | ") << triples << " fixture triples byte-stable (eval, loss); eval CSV header "
           << (csv.out.rfind(table_order, 0) == 0 ? "matches" : "differs");
#endif
}

struct Criterion {
  const char* name;
  std::function<void(Outcome&)> run;
};

}  // namespace
}  // namespace sdrkit

int main() {
  using namespace sdrkit;
  const Criterion criteria[] = {
      {"decomposition-exactness", DecompositionExactness},
      {"parseval-consistency", ParsevalConsistency},
      {"constant-weight-reduction", ConstantWeightReduction},
      {"softmax-weights", SoftmaxSuite},
      {"gradient-checks", GradientChecks},
      {"catalog-integrity", CatalogIntegrity},
      {"stoi", StoiChecks},
      {"l3-monotonicity", L3Monotonicity},
      {"mixer", MixerChecks},
      {"phoneme-pipeline", PhonemePipeline},
      {"cli-regression", CliRegression},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.Require(false, std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.name << "  " << o.detail.str() << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
