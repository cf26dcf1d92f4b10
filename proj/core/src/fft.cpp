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

#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "sdrkit/error.hpp"

namespace sdrkit::fft {
namespace {

enum class Kind { kR2C, kC2R };

// FFTW's planner is not re-entrant; executing an existing plan on new
// arrays is. Plans are created once per size and kept for process lifetime.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan Get(Kind kind, std::size_t n) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find({kind, n});
    if (it != plans_.end()) return it->second;
    double* real = fftw_alloc_real(n);
    fftw_complex* spec = fftw_alloc_complex(n / 2 + 1);
    const int size = static_cast<int>(n);
    constexpr unsigned kFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = kind == Kind::kR2C
                         ? fftw_plan_dft_r2c_1d(size, real, spec, kFlags)
                         : fftw_plan_dft_c2r_1d(size, spec, real, kFlags);
    fftw_free(real);
    fftw_free(spec);
    if (plan == nullptr) Fail(ErrorCode::kInvalidArgument, "FFT planning failed");
    plans_.emplace(std::make_pair(kind, n), plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<Kind, std::size_t>, fftw_plan> plans_;
};

PlanCache& Cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

void RealForward(std::span<const double> in, std::span<std::complex<double>> out) {
  const std::size_t n = in.size();
  Require(n > 0, "FFT of empty input");
  Require(out.size() == BinCount(n), "FFT output size mismatch");
  thread_local std::vector<double> scratch;
  scratch.assign(in.begin(), in.end());
  fftw_execute_dft_r2c(Cache().Get(Kind::kR2C, n), scratch.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void RealInverse(std::span<const std::complex<double>> in, std::span<double> out) {
  const std::size_t n = out.size();
  Require(n > 0, "inverse FFT of empty output");
  Require(in.size() == BinCount(n), "inverse FFT input size mismatch");
  // c2r overwrites its input.
  thread_local std::vector<std::complex<double>> scratch;
  scratch.assign(in.begin(), in.end());
  scratch.front() = scratch.front().real();
  if (n % 2 == 0) scratch.back() = scratch.back().real();
  fftw_execute_dft_c2r(Cache().Get(Kind::kC2R, n),
                       reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
}

}  // namespace sdrkit::fft
