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

#pragma once

// Data-parallel inner loops of the block codecs. Every variant must be
// bit-identical to the scalar reference; the AVX2 table is picked at runtime
// when the CPU supports it.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace fhc::kernels {

struct CodecKernels {
  std::string_view name;

  /// out[b] = max over the 24 components of block b of |x|.
  /// `blocks` holds n_blocks * 24 interleaved doubles.
  void (*block_max_abs)(const double* blocks, std::size_t n_blocks, double* out);

  /// codes[i] = clamp(round_half_away((x[i] / divisor) * multiplier), lo, hi)
  void (*quantize_round)(const double* x, std::size_t n, double divisor, double multiplier,
                         std::int32_t lo, std::int32_t hi, std::int32_t* codes);

  /// codes[i] = clamp(floor(x[i] / step), lo, hi)   (midrise uniform quantizer)
  void (*quantize_floor)(const double* x, std::size_t n, double step, std::int32_t lo,
                         std::int32_t hi, std::int32_t* codes);

  /// out[i] = (codes[i] + offset) * step
  void (*dequantize)(const std::int32_t* codes, std::size_t n, double offset, double step,
                     double* out);
};

const CodecKernels& scalar();

/// nullptr when the build has no AVX2 variant or the CPU lacks AVX2.
const CodecKernels* avx2();

/// Best available table. Setting FHC_SIMD=scalar in the environment forces
/// the reference path.
const CodecKernels& active();

}  // namespace fhc::kernels
