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

#include <complex>
#include <cstddef>
#include <span>

namespace sdrkit::fft {

// Unnormalized real DFT: out[k] = sum_n in[n] exp(-2 pi i k n / N),
// k = 0..N/2. Thread-safe.
void RealForward(std::span<const double> in, std::span<std::complex<double>> out);

// Unnormalized Hermitian inverse: out[n] = sum_{k=0}^{N-1} X[k] exp(2 pi i k n / N)
// where X is the Hermitian extension of `in` (N/2+1 bins). Imaginary parts of
// the DC bin (and the Nyquist bin for even N) are ignored. Thread-safe.
void RealInverse(std::span<const std::complex<double>> in, std::span<double> out);

inline std::size_t BinCount(std::size_t n) { return n / 2 + 1; }

}  // namespace sdrkit::fft
