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

#include <benchmark/benchmark.h>

#include <random>

#include "fixtures.hpp"
#include "sdrkit/decomposition.hpp"
#include "sdrkit/loss.hpp"
#include "sdrkit/metrics.hpp"
#include "sdrkit/stft.hpp"
#include "sdrkit/stoi.hpp"

namespace sdrkit {
namespace {

struct Triple {
  Signal est, clean, noise;
};

Triple MakeTriple(std::size_t n) {
  std::mt19937_64 rng(1);
  Triple t{{}, testing::SyntheticSpeech(3, 16000, n / 16000.0), {}};
  t.noise = testing::Gaussian(t.clean.size(), rng, 0.1);
  const Signal art = testing::Gaussian(t.clean.size(), rng, 0.01);
  t.est.resize(t.clean.size());
  for (std::size_t i = 0; i < t.est.size(); ++i) t.est[i] = t.clean[i] + 0.3 * t.noise[i] + art[i];
  return t;
}

void BM_Stft(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const Signal x = testing::Gaussian(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(Stft(x, {}, 16000));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Stft)->Arg(16000)->Arg(64000);

void BM_Decompose(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const auto n = static_cast<std::size_t>(state.range(0));
  const Signal clean = testing::Gaussian(n, rng), noise = testing::Gaussian(n, rng);
  const Signal est = testing::Gaussian(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(Decompose(est, clean, noise));
}
BENCHMARK(BM_Decompose)->Arg(64)->Arg(64000);

void BM_LossEvaluate(benchmark::State& state) {
  const Triple t = MakeTriple(32000);
  const SdrLoss loss(LossConfig::FromId(static_cast<LossId>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(loss.Evaluate(t.est, t.clean, t.noise));
  state.SetLabel(LossIdName(loss.config().id));
}
BENCHMARK(BM_LossEvaluate)->DenseRange(1, kLossCount)->Unit(benchmark::kMillisecond);

void BM_LossGradient(benchmark::State& state) {
  const Triple t = MakeTriple(32000);
  const SdrLoss loss(LossConfig::FromId(static_cast<LossId>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(loss.Gradient(t.est, t.clean, t.noise));
  state.SetLabel(LossIdName(loss.config().id));
}
BENCHMARK(BM_LossGradient)->DenseRange(1, kLossCount)->Unit(benchmark::kMillisecond);

void BM_Stoi(benchmark::State& state) {
  const Triple t = MakeTriple(48000);
  for (auto _ : state) benchmark::DoNotOptimize(Stoi(t.clean, t.est, 16000));
}
BENCHMARK(BM_Stoi)->Unit(benchmark::kMillisecond);

void BM_Report(benchmark::State& state) {
  const Triple t = MakeTriple(48000);
  Signal mix(t.clean.size());
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = t.clean[i] + t.noise[i];
  for (auto _ : state) benchmark::DoNotOptimize(Report(mix, t.est, t.clean, t.noise, 16000));
}
BENCHMARK(BM_Report)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace sdrkit

BENCHMARK_MAIN();
