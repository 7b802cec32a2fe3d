/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The fhcomp Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Compiled with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "fhc/kernels.hpp"

namespace fhc::kernels {

namespace {

inline __m256d abs_pd(__m256d x) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x); }

inline double hmax_pd(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  hi = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, hi));
}

// Round half away from zero. x - trunc(x) is exact, so this agrees with
// std::round for every finite double.
inline __m256d round_away_pd(__m256d x) {
  const __m256d t = _mm256_round_pd(x, _MM_FROUND_TO_ZERO | _MM_FROUND_NO_EXC);
  const __m256d frac = abs_pd(_mm256_sub_pd(x, t));
  const __m256d need = _mm256_cmp_pd(frac, _mm256_set1_pd(0.5), _CMP_GE_OQ);
  const __m256d one = _mm256_or_pd(_mm256_set1_pd(1.0), _mm256_and_pd(x, _mm256_set1_pd(-0.0)));
  return _mm256_add_pd(t, _mm256_and_pd(need, one));
}

inline double round_away(double x) {
  const double t = std::trunc(x);
  return std::fabs(x - t) >= 0.5 ? t + std::copysign(1.0, x) : t;
}

void block_max_abs(const double* blocks, std::size_t n_blocks, double* out) {
  for (std::size_t b = 0; b < n_blocks; ++b) {
    const double* x = blocks + b * 24;
    __m256d m0 = _mm256_max_pd(abs_pd(_mm256_loadu_pd(x)), abs_pd(_mm256_loadu_pd(x + 4)));
    __m256d m1 = _mm256_max_pd(abs_pd(_mm256_loadu_pd(x + 8)), abs_pd(_mm256_loadu_pd(x + 12)));
    __m256d m2 = _mm256_max_pd(abs_pd(_mm256_loadu_pd(x + 16)), abs_pd(_mm256_loadu_pd(x + 20)));
    out[b] = hmax_pd(_mm256_max_pd(m0, _mm256_max_pd(m1, m2)));
  }
}

void quantize_round(const double* x, std::size_t n, double divisor, double multiplier,
                    std::int32_t lo, std::int32_t hi, std::int32_t* codes) {
  const __m256d vdiv = _mm256_set1_pd(divisor);
  const __m256d vmul = _mm256_set1_pd(multiplier);
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vhi = _mm256_set1_pd(hi);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d q = _mm256_mul_pd(_mm256_div_pd(_mm256_loadu_pd(x + i), vdiv), vmul);
    q = _mm256_max_pd(_mm256_min_pd(round_away_pd(q), vhi), vlo);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(codes + i), _mm256_cvtpd_epi32(q));
  }
  for (; i < n; ++i) {
    const double r = round_away((x[i] / divisor) * multiplier);
    codes[i] = static_cast<std::int32_t>(std::clamp(r, double(lo), double(hi)));
  }
}

void quantize_floor(const double* x, std::size_t n, double step, std::int32_t lo,
                    std::int32_t hi, std::int32_t* codes) {
  const __m256d vstep = _mm256_set1_pd(step);
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vhi = _mm256_set1_pd(hi);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d q = _mm256_floor_pd(_mm256_div_pd(_mm256_loadu_pd(x + i), vstep));
    q = _mm256_max_pd(_mm256_min_pd(q, vhi), vlo);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(codes + i), _mm256_cvtpd_epi32(q));
  }
  for (; i < n; ++i) {
    const double r = std::floor(x[i] / step);
    codes[i] = static_cast<std::int32_t>(std::clamp(r, double(lo), double(hi)));
  }
}

void dequantize(const std::int32_t* codes, std::size_t n, double offset, double step,
                double* out) {
  const __m256d voff = _mm256_set1_pd(offset);
  const __m256d vstep = _mm256_set1_pd(step);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d c =
        _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<const __m128i*>(codes + i)));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_add_pd(c, voff), vstep));
  }
  for (; i < n; ++i) out[i] = (double(codes[i]) + offset) * step;
}

constexpr CodecKernels kAvx2{"avx2", block_max_abs, quantize_round, quantize_floor, dequantize};

}  // namespace

namespace detail {
const CodecKernels* avx2_table() {
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &kAvx2 : nullptr;
}
}  // namespace detail

}  // namespace fhc::kernels
