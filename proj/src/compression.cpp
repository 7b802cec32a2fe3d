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

#include "fhc/compression.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "fhc/error.hpp"

namespace fhc {

static_assert(sizeof(PrbBlock) == kComponentsPerPrb * sizeof(double),
              "batch kernels walk PRB blocks as one contiguous double array");

std::string_view to_string(CompressionMethod m) {
  switch (m) {
    case CompressionMethod::None: return "none";
    case CompressionMethod::Bfp: return "bfp";
    case CompressionMethod::BlockScaling: return "bs";
    case CompressionMethod::MuLaw: return "mulaw";
    case CompressionMethod::Uniform: return "uniform";
  }
  return "?";
}

CompressionMethod parse_method(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "none") return CompressionMethod::None;
  if (lower == "bfp") return CompressionMethod::Bfp;
  if (lower == "bs" || lower == "block_scaling" || lower == "blockscaling")
    return CompressionMethod::BlockScaling;
  if (lower == "mulaw" || lower == "mu-law" || lower == "mu_law") return CompressionMethod::MuLaw;
  if (lower == "uniform") return CompressionMethod::Uniform;
  throw ConfigError("unknown compression method '" + std::string(s) + "'");
}

void CompressionConfig::validate() const {
  if (method != CompressionMethod::None && (m_bits < 2 || m_bits > 16)) {
    throw ConfigError("compression: m_bits must be in [2, 16], got " + std::to_string(m_bits));
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("compression: lambda must be > 0");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ConfigError("compression: mu must be > 0");
  if (delta && (!(*delta > 0.0) || !std::isfinite(*delta))) {
    throw ConfigError("compression: delta must be > 0");
  }
}

std::pair<std::int32_t, std::int32_t> code_range(CompressionMethod method, int m_bits) {
  switch (method) {
    case CompressionMethod::None: return {-32767, 32767};
    case CompressionMethod::Bfp:
    case CompressionMethod::MuLaw: {
      const std::int32_t lim = (std::int32_t{1} << (m_bits - 1)) - 1;
      return {-lim, lim};
    }
    case CompressionMethod::BlockScaling:
    case CompressionMethod::Uniform: {
      const std::int32_t half = std::int32_t{1} << (m_bits - 1);
      return {-half, half - 1};
    }
  }
  return {0, 0};
}

int bfp_exponent(double max_abs, int m_bits) {
  if (max_abs <= 0.0) return kBfpMinExponent;
  int k = 0;
  const double f = std::frexp(max_abs, &k);  // max_abs = f * 2^k, f in [0.5, 1)
  int e = (f == 0.5) ? k - 1 : k;            // ceil(log2(max_abs))
  // Headroom so the largest mantissa never rounds past the top code.
  if (std::ldexp(max_abs, -e) > 1.0 - std::ldexp(1.0, -m_bits)) ++e;
  return std::clamp(e, kBfpMinExponent, kBfpMaxExponent);
}

unsigned mulaw_shift(double max_abs) {
  if (max_abs <= 0.0) return kMuLawMaxShift;
  unsigned s = 0;
  while (s < kMuLawMaxShift && std::ldexp(max_abs, static_cast<int>(s)) < 0.5) ++s;
  return s;
}

double quantize_block_scale(double s) {
  if (!(s > 0.0)) return 0.0;
  int e = kBlockScaleMinExponent;
  while (e < kBlockScaleMaxExponent && std::ceil(std::ldexp(s, -e) * 128.0) > 255.0) ++e;
  const double m = std::min(std::ceil(std::ldexp(s, -e) * 128.0), 255.0);
  return std::ldexp(m / 128.0, e);
}

double mulaw_compand(double v, double mu) {
  return std::copysign(std::log1p(mu * std::fabs(v)) / std::log1p(mu), v);
}

double mulaw_expand(double c, double mu) {
  return std::copysign(std::expm1(std::fabs(c) * std::log1p(mu)) / mu, c);
}

namespace {

void require_method(const CompressionConfig& cfg, CompressionMethod m, const char* op) {
  if (cfg.method != m) {
    throw ConfigError(std::string(op) + ": configuration method is " +
                      std::string(to_string(cfg.method)));
  }
  cfg.validate();
}

void require_finite(std::span<const PrbBlock> blocks) {
  for (const auto& b : blocks) {
    if (!is_finite(b)) throw ConfigError("compression: non-finite input sample");
  }
}

// Per-method batch encoders. Each one fills out[i] for blocks[i].

void encode_none(std::span<const PrbBlock> blocks, const kernels::CodecKernels& k,
                 std::span<CompressedBlock> out) {
  const auto [lo, hi] = code_range(CompressionMethod::None, 16);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    out[i] = {CompressionMethod::None, 16, std::monostate{}, {}};
    k.quantize_round(components(blocks[i]).data(), kComponentsPerPrb, 1.0, 32768.0, lo, hi,
                     out[i].codes.data());
  }
}

void encode_bfp(std::span<const PrbBlock> blocks, const CompressionConfig& cfg,
                const kernels::CodecKernels& k, std::span<const double> max_abs,
                std::span<CompressedBlock> out) {
  const auto [lo, hi] = code_range(CompressionMethod::Bfp, cfg.m_bits);
  const double mantissa_scale = std::ldexp(1.0, cfg.m_bits - 1);  // 1 / Δ_m
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const int e = bfp_exponent(max_abs[i], cfg.m_bits);
    out[i] = {CompressionMethod::Bfp, cfg.m_bits, BfpExponent{e}, {}};
    k.quantize_round(components(blocks[i]).data(), kComponentsPerPrb, std::ldexp(1.0, e),
                     mantissa_scale, lo, hi, out[i].codes.data());
  }
}

void encode_bs(std::span<const PrbBlock> blocks, const CompressionConfig& cfg,
               const kernels::CodecKernels& k, std::span<const double> max_abs,
               std::span<CompressedBlock> out) {
  const auto [lo, hi] = code_range(CompressionMethod::BlockScaling, cfg.m_bits);
  const double levels = std::ldexp(1.0, cfg.m_bits - 1) - 1.0;  // L/2 - 1
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const double s = quantize_block_scale(max_abs[i] / cfg.lambda);
    out[i] = {CompressionMethod::BlockScaling, cfg.m_bits, BlockScale{s}, {}};
    if (s > 0.0) {
      k.quantize_round(components(blocks[i]).data(), kComponentsPerPrb, s, levels, lo, hi,
                       out[i].codes.data());
    }
  }
}

void encode_mulaw(std::span<const PrbBlock> blocks, const CompressionConfig& cfg,
                  const kernels::CodecKernels& k, std::span<const double> max_abs,
                  std::span<CompressedBlock> out) {
  const auto [lo, hi] = code_range(CompressionMethod::MuLaw, cfg.m_bits);
  const double inv_step = std::ldexp(1.0, cfg.m_bits - 1);
  std::array<double, kComponentsPerPrb> companded{};
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const unsigned s = mulaw_shift(max_abs[i]);
    out[i] = {CompressionMethod::MuLaw, cfg.m_bits, MuLawShift{s, cfg.mu}, {}};
    const auto c = components(blocks[i]);
    for (std::size_t j = 0; j < kComponentsPerPrb; ++j) {
      const double v = std::clamp(std::ldexp(c[j], static_cast<int>(s)), -1.0, 1.0);
      companded[j] = mulaw_compand(v, cfg.mu);
    }
    k.quantize_round(companded.data(), kComponentsPerPrb, 1.0, inv_step, lo, hi,
                     out[i].codes.data());
  }
}

void encode_uniform(std::span<const PrbBlock> blocks, const CompressionConfig& cfg,
                    const kernels::CodecKernels& k, std::span<CompressedBlock> out) {
  if (!cfg.delta) throw ConfigError("uniform_compress: step size delta is not resolved");
  const double delta = *cfg.delta;
  const auto [lo, hi] = code_range(CompressionMethod::Uniform, cfg.m_bits);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    out[i] = {CompressionMethod::Uniform, cfg.m_bits, UniformStep{delta}, {}};
    k.quantize_floor(components(blocks[i]).data(), kComponentsPerPrb, delta, lo, hi,
                     out[i].codes.data());
  }
}

void check_side_info(const CompressedBlock& cb) {
  bool ok = false;
  switch (cb.method) {
    case CompressionMethod::None: ok = std::holds_alternative<std::monostate>(cb.side); break;
    case CompressionMethod::Bfp: ok = std::holds_alternative<BfpExponent>(cb.side); break;
    case CompressionMethod::BlockScaling: ok = std::holds_alternative<BlockScale>(cb.side); break;
    case CompressionMethod::MuLaw: ok = std::holds_alternative<MuLawShift>(cb.side); break;
    case CompressionMethod::Uniform: ok = std::holds_alternative<UniformStep>(cb.side); break;
  }
  if (!ok) throw ConfigError("decompress: side information does not match the method");
  if (cb.method != CompressionMethod::None && (cb.m_bits < 1 || cb.m_bits > 16)) {
    throw ConfigError("decompress: m_bits out of range");
  }
}

void decode_one(const CompressedBlock& cb, const kernels::CodecKernels& k, PrbBlock& out) {
  check_side_info(cb);
  auto y = components(out);
  switch (cb.method) {
    case CompressionMethod::None:
      k.dequantize(cb.codes.data(), kComponentsPerPrb, 0.0, std::ldexp(1.0, -15), y.data());
      break;
    case CompressionMethod::Bfp: {
      const int e = std::get<BfpExponent>(cb.side).exponent;
      k.dequantize(cb.codes.data(), kComponentsPerPrb, 0.0, std::ldexp(1.0, e + 1 - cb.m_bits),
                   y.data());
      break;
    }
    case CompressionMethod::BlockScaling: {
      const double s = std::get<BlockScale>(cb.side).scale;
      const double levels = std::ldexp(1.0, cb.m_bits - 1) - 1.0;
      k.dequantize(cb.codes.data(), kComponentsPerPrb, 0.0, s / levels, y.data());
      break;
    }
    case CompressionMethod::MuLaw: {
      const auto [shift, mu] = std::get<MuLawShift>(cb.side);
      k.dequantize(cb.codes.data(), kComponentsPerPrb, 0.0, std::ldexp(1.0, 1 - cb.m_bits),
                   y.data());
      for (double& v : y) v = std::ldexp(mulaw_expand(v, mu), -static_cast<int>(shift));
      break;
    }
    case CompressionMethod::Uniform:
      k.dequantize(cb.codes.data(), kComponentsPerPrb, 0.5, std::get<UniformStep>(cb.side).delta,
                   y.data());
      break;
  }
}

}  // namespace

std::vector<CompressedBlock> compress_blocks(std::span<const PrbBlock> blocks,
                                             const CompressionConfig& cfg,
                                             const kernels::CodecKernels& k) {
  cfg.validate();
  require_finite(blocks);
  std::vector<CompressedBlock> out(blocks.size());
  if (cfg.method == CompressionMethod::None) {
    encode_none(blocks, k, out);
    return out;
  }
  if (cfg.method == CompressionMethod::Uniform) {
    encode_uniform(blocks, cfg, k, out);
    return out;
  }
  std::vector<double> max_abs(blocks.size());
  if (!blocks.empty()) {
    k.block_max_abs(components(blocks.front()).data(), blocks.size(), max_abs.data());
  }
  switch (cfg.method) {
    case CompressionMethod::Bfp: encode_bfp(blocks, cfg, k, max_abs, out); break;
    case CompressionMethod::BlockScaling: encode_bs(blocks, cfg, k, max_abs, out); break;
    case CompressionMethod::MuLaw: encode_mulaw(blocks, cfg, k, max_abs, out); break;
    default: break;
  }
  return out;
}

std::vector<PrbBlock> decompress_blocks(std::span<const CompressedBlock> cbs,
                                        const kernels::CodecKernels& k) {
  std::vector<PrbBlock> out(cbs.size());
  for (std::size_t i = 0; i < cbs.size(); ++i) decode_one(cbs[i], k, out[i]);
  return out;
}

CompressedBlock compress(const PrbBlock& block, const CompressionConfig& cfg) {
  return compress_blocks(std::span<const PrbBlock>(&block, 1), cfg).front();
}

PrbBlock decompress(const CompressedBlock& cb) {
  PrbBlock out{};
  decode_one(cb, kernels::active(), out);
  return out;
}

CompressedBlock bfp_compress(const PrbBlock& block, const CompressionConfig& cfg) {
  require_method(cfg, CompressionMethod::Bfp, "bfp_compress");
  return compress(block, cfg);
}

CompressedBlock bs_compress(const PrbBlock& block, const CompressionConfig& cfg) {
  require_method(cfg, CompressionMethod::BlockScaling, "bs_compress");
  return compress(block, cfg);
}

CompressedBlock mulaw_compress(const PrbBlock& block, const CompressionConfig& cfg) {
  require_method(cfg, CompressionMethod::MuLaw, "mulaw_compress");
  return compress(block, cfg);
}

CompressedBlock uniform_compress(const PrbBlock& block, const CompressionConfig& cfg) {
  require_method(cfg, CompressionMethod::Uniform, "uniform_compress");
  return compress(block, cfg);
}

namespace {

std::vector<double> gaussian_components(double input_power, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(input_power / 2.0));
  std::vector<double> x(2 * kDeltaSearchSamples);
  for (double& v : x) v = normal(rng);
  return x;
}

double midrise_mse(std::span<const double> x, double delta, int m_bits) {
  const double lo = -std::ldexp(1.0, m_bits - 1);
  const double hi = -lo - 1.0;
  double acc = 0.0;
  for (double v : x) {
    const double q = (std::clamp(std::floor(v / delta), lo, hi) + 0.5) * delta;
    acc += (q - v) * (q - v);
  }
  return acc / static_cast<double>(x.size());
}

}  // namespace

double uniform_quantizer_mse(double delta, int m_bits, double input_power, std::uint64_t seed) {
  if (m_bits < 1 || m_bits > 16 || !(delta > 0.0) || !(input_power > 0.0)) {
    throw ConfigError("uniform_quantizer_mse: invalid arguments");
  }
  return midrise_mse(gaussian_components(input_power, seed), delta, m_bits);
}

double optimize_delta(int m_bits, double input_power, std::uint64_t seed) {
  if (m_bits < 1 || m_bits > 16) throw ConfigError("optimize_delta: m_bits must be in [1, 16]");
  if (!(input_power > 0.0) || !std::isfinite(input_power)) {
    throw ConfigError("optimize_delta: input power must be > 0");
  }
  const auto x = gaussian_components(input_power, seed);
  const double sigma = std::sqrt(input_power / 2.0);
  // Search over the overload point A = Δ·2^(m-1), bracketed in units of σ.
  const double half_levels = std::ldexp(1.0, m_bits - 1);
  auto mse_at = [&](double a) { return midrise_mse(x, a / half_levels, m_bits); };

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.25 * sigma;
  double b = 8.0 * sigma;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = mse_at(c);
  double fd = mse_at(d);
  while (b - a > 1e-7 * sigma) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = mse_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = mse_at(d);
    }
  }
  return 0.5 * (a + b) / half_levels;
}

BussgangStats bussgang_estimate(std::span<const ComplexSample> original,
                                std::span<const ComplexSample> quantized,
                                std::size_t min_samples) {
  if (original.size() != quantized.size()) {
    throw ConfigError("bussgang_estimate: sequences differ in length");
  }
  if (original.size() < std::max<std::size_t>(min_samples, 1)) {
    throw ConfigError("bussgang_estimate: too few samples");
  }
  double py = 0.0;
  double cross = 0.0;
  for (std::size_t i = 0; i < original.size(); ++i) {
    py += std::norm(original[i]);
    cross += (quantized[i] * std::conj(original[i])).real();
  }
  if (!(py > 0.0)) throw ConfigError("bussgang_estimate: input has zero power");
  const double alpha = cross / py;
  double pd = 0.0;
  double dy = 0.0;
  for (std::size_t i = 0; i < original.size(); ++i) {
    const ComplexSample delta = quantized[i] - alpha * original[i];
    pd += std::norm(delta);
    dy += (delta * std::conj(original[i])).real();
  }
  const double n = static_cast<double>(original.size());
  const double corr = pd > 0.0 ? std::fabs(dy) / std::sqrt(pd * py) : 0.0;
  return {alpha, pd / n, std::min(corr, 1.0), py / n};
}

double sqnr_db(std::span<const ComplexSample> original, std::span<const ComplexSample> quantized) {
  if (original.size() != quantized.size()) throw ConfigError("sqnr: sequences differ in length");
  double ps = 0.0;
  double pe = 0.0;
  for (std::size_t i = 0; i < original.size(); ++i) {
    ps += std::norm(original[i]);
    pe += std::norm(quantized[i] - original[i]);
  }
  if (pe == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(ps / pe);
}

}  // namespace fhc
