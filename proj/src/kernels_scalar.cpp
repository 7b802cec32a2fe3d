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

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string_view>

#include "fhc/kernels.hpp"

namespace fhc::kernels {

namespace detail {
const CodecKernels* avx2_table();  // kernels_avx2.cpp, or the stub below
}

namespace {

void block_max_abs(const double* blocks, std::size_t n_blocks, double* out) {
  for (std::size_t b = 0; b < n_blocks; ++b) {
    const double* x = blocks + b * 24;
    double m = 0.0;
    for (std::size_t i = 0; i < 24; ++i) m = std::max(m, std::fabs(x[i]));
    out[b] = m;
  }
}

void quantize_round(const double* x, std::size_t n, double divisor, double multiplier,
                    std::int32_t lo, std::int32_t hi, std::int32_t* codes) {
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::round((x[i] / divisor) * multiplier);
    codes[i] = static_cast<std::int32_t>(std::clamp(r, double(lo), double(hi)));
  }
}

void quantize_floor(const double* x, std::size_t n, double step, std::int32_t lo,
                    std::int32_t hi, std::int32_t* codes) {
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::floor(x[i] / step);
    codes[i] = static_cast<std::int32_t>(std::clamp(r, double(lo), double(hi)));
  }
}

void dequantize(const std::int32_t* codes, std::size_t n, double offset, double step,
                double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (double(codes[i]) + offset) * step;
}

constexpr CodecKernels kScalar{"scalar", block_max_abs, quantize_round, quantize_floor,
                               dequantize};

}  // namespace

const CodecKernels& scalar() { return kScalar; }

const CodecKernels* avx2() { return detail::avx2_table(); }

const CodecKernels& active() {
  static const CodecKernels* chosen = [] {
    const char* env = std::getenv("FHC_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return &kScalar;
    const CodecKernels* simd = avx2();
    return simd != nullptr ? simd : &kScalar;
  }();
  return *chosen;
}

#ifndef FHC_HAVE_AVX2
namespace detail {
const CodecKernels* avx2_table() { return nullptr; }
}  // namespace detail
#endif

}  // namespace fhc::kernels
