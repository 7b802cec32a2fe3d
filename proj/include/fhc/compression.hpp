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

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "fhc/iq_core.hpp"
#include "fhc/kernels.hpp"

namespace fhc {

enum class CompressionMethod { None, Bfp, BlockScaling, MuLaw, Uniform };

std::string_view to_string(CompressionMethod m);
/// Accepts "none", "bfp", "bs", "mulaw", "uniform" (case-insensitive).
CompressionMethod parse_method(std::string_view s);

struct CompressionConfig {
  CompressionMethod method = CompressionMethod::None;
  int m_bits = 16;
  double lambda = 1.0;  ///< block scaling design parameter
  double mu = 8.0;      ///< mu-law curve parameter
  std::optional<double> delta;  ///< uniform step; resolved by optimize_delta when absent

  void validate() const;
};

struct BfpExponent {
  int exponent;
  friend bool operator==(const BfpExponent&, const BfpExponent&) = default;
};
struct BlockScale {
  double scale;  ///< on the quantize_block_scale grid when produced by the encoder
  friend bool operator==(const BlockScale&, const BlockScale&) = default;
};
struct MuLawShift {
  unsigned shift;
  double mu;
  friend bool operator==(const MuLawShift&, const MuLawShift&) = default;
};
struct UniformStep {
  double delta;
  friend bool operator==(const UniformStep&, const UniformStep&) = default;
};

/// None carries 16-bit fixed-point codes (Q1.15) and no side information.
using SideInfo = std::variant<std::monostate, BfpExponent, BlockScale, MuLawShift, UniformStep>;

struct CompressedBlock {
  CompressionMethod method = CompressionMethod::None;
  int m_bits = 16;
  SideInfo side;
  std::array<std::int32_t, kComponentsPerPrb> codes{};  ///< I then Q per sample

  friend bool operator==(const CompressedBlock&, const CompressedBlock&) = default;
};

inline constexpr int kBfpMinExponent = -8;
inline constexpr int kBfpMaxExponent = 7;
inline constexpr unsigned kMuLawMaxShift = 15;
inline constexpr int kBlockScaleMinExponent = -8;
inline constexpr int kBlockScaleMaxExponent = 7;

/// Smallest value >= s of the form mantissa/128 * 2^e with an 8-bit
/// mantissa and e in [-8, 7], the precision the wire carries. Saturates at
/// 255/128 * 2^7.
double quantize_block_scale(double s);

/// Inclusive code range for `m_bits` under `method`.
std::pair<std::int32_t, std::int32_t> code_range(CompressionMethod method, int m_bits);

/// Smallest exponent e with max_abs * 2^-e <= 1 - 2^-m_bits, clamped to the
/// 4-bit signed range. Zero blocks get the minimum exponent.
int bfp_exponent(double max_abs, int m_bits);

/// Block shift normalizing the block maximum into [0.5, 1].
unsigned mulaw_shift(double max_abs);

/// F(v) = sgn(v) ln(1 + mu|v|) / ln(1 + mu), |v| <= 1.
double mulaw_compand(double v, double mu);
/// Inverse of mulaw_compand.
double mulaw_expand(double c, double mu);

CompressedBlock bfp_compress(const PrbBlock& block, const CompressionConfig& cfg);
CompressedBlock bs_compress(const PrbBlock& block, const CompressionConfig& cfg);
CompressedBlock mulaw_compress(const PrbBlock& block, const CompressionConfig& cfg);
CompressedBlock uniform_compress(const PrbBlock& block, const CompressionConfig& cfg);

/// Method-dispatched compression of one block.
CompressedBlock compress(const PrbBlock& block, const CompressionConfig& cfg);
PrbBlock decompress(const CompressedBlock& cb);

/// Batch forms used on the hot path. The kernel table defaults to the best
/// one available; passing a table explicitly is for equivalence testing.
std::vector<CompressedBlock> compress_blocks(std::span<const PrbBlock> blocks,
                                             const CompressionConfig& cfg,
                                             const kernels::CodecKernels& k = kernels::active());
std::vector<PrbBlock> decompress_blocks(std::span<const CompressedBlock> cbs,
                                        const kernels::CodecKernels& k = kernels::active());

inline constexpr std::uint64_t kDeltaSearchSeed = 0x5eed0fde17aULL;
inline constexpr std::size_t kDeltaSearchSamples = 100'000;

/// Mean squared error per component of the midrise uniform quantizer on a
/// seeded circular Gaussian sample set of the given complex power.
double uniform_quantizer_mse(double delta, int m_bits, double input_power,
                             std::uint64_t seed = kDeltaSearchSeed);

/// MSE-optimal uniform step for a zero-mean circular Gaussian input of the
/// given complex power (E|y|^2). Golden-section search; m_bits >= 1.
double optimize_delta(int m_bits, double input_power, std::uint64_t seed = kDeltaSearchSeed);

struct BussgangStats {
  double alpha;                ///< least-squares real linear gain
  double distortion_power;     ///< mean |ŷ - αy|²
  double cross_corr;           ///< |Re Σ δ·conj(y)| / sqrt(Σ|δ|² Σ|y|²)
  double input_power;          ///< mean |y|²
};

/// Linear-gain-plus-distortion fit ŷ = αy + δ over at least `min_samples` samples.
BussgangStats bussgang_estimate(std::span<const ComplexSample> original,
                                std::span<const ComplexSample> quantized,
                                std::size_t min_samples = 1000);

/// 10 log10(Σ|y|² / Σ|ŷ - y|²); +infinity when the distortion is zero.
double sqnr_db(std::span<const ComplexSample> original, std::span<const ComplexSample> quantized);

}  // namespace fhc
