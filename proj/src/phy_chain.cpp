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

#include "fhc/phy_chain.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <string>

#include "fhc/error.hpp"

namespace fhc {

std::string_view to_string(Modulation m) {
  switch (m) {
    case Modulation::Qpsk: return "QPSK";
    case Modulation::Qam16: return "16QAM";
    case Modulation::Qam64: return "64QAM";
    case Modulation::Qam256: return "256QAM";
  }
  return "?";
}

Modulation parse_modulation(std::string_view s) {
  std::string u(s);
  std::transform(u.begin(), u.end(), u.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (u == "QPSK") return Modulation::Qpsk;
  if (u == "16QAM" || u == "QAM16") return Modulation::Qam16;
  if (u == "64QAM" || u == "QAM64") return Modulation::Qam64;
  if (u == "256QAM" || u == "QAM256") return Modulation::Qam256;
  throw ConfigError("unknown modulation '" + std::string(s) + "'");
}

void McsConfig::validate() const {
  if (!(code_rate > 0.0 && code_rate < 1.0)) throw ConfigError("mcs: code rate must be in (0, 1)");
  if (tbs == 0) throw ConfigError("mcs: tbs must be positive");
  if (n_prb == 0 || n_data_symbols == 0 || n_data_symbols > kSymbolsPerSlot) {
    throw ConfigError("mcs: n_prb must be positive and n_data_symbols in [1, 14]");
  }
  const std::size_t capacity =
      std::size_t(bits_per_symbol(modulation)) * kSubcarriersPerPrb * n_prb * n_data_symbols;
  if (tbs + kCrcBits >= capacity) throw ConfigError("mcs: tbs does not fit the allocation");
}

McsConfig table1_mcs(int index) {
  switch (index) {
    case 1: return {Modulation::Qpsk, 120.0 / 1024.0, 25, 848, 12};
    case 2: return {Modulation::Qam16, 434.0 / 1024.0, 25, 6016, 12};
    case 3: return {Modulation::Qam64, 616.0 / 1024.0, 25, 13064, 12};
    case 4: return {Modulation::Qam256, 682.5 / 1024.0, 25, 18960, 12};
    default: throw ConfigError("MCS index must be 1..4, got " + std::to_string(index));
  }
}

std::uint16_t crc16(std::span<const std::uint8_t> bits) {
  std::uint16_t reg = 0xFFFF;
  for (auto b : bits) {
    const bool feedback = ((reg >> 15) & 1u) ^ (b & 1u);
    reg = static_cast<std::uint16_t>(reg << 1);
    if (feedback) reg ^= 0x1021;
  }
  return reg;
}

TransportBlock TransportBlock::from_payload(std::vector<std::uint8_t> payload) {
  TransportBlock tb;
  tb.payload = std::move(payload);
  tb.crc = crc16(tb.payload);
  return tb;
}

std::vector<std::uint8_t> TransportBlock::info_bits() const {
  std::vector<std::uint8_t> bits(payload);
  for (int i = 15; i >= 0; --i) bits.push_back(static_cast<std::uint8_t>((crc >> i) & 1u));
  return bits;
}

namespace {

double amplitude_norm(Modulation m) {
  switch (m) {
    case Modulation::Qpsk: return 1.0 / std::sqrt(2.0);
    case Modulation::Qam16: return 1.0 / std::sqrt(10.0);
    case Modulation::Qam64: return 1.0 / std::sqrt(42.0);
    case Modulation::Qam256: return 1.0 / std::sqrt(170.0);
  }
  return 1.0;
}

/// PAM level for the per-dimension label (c0 first), before normalization.
double pam_level(unsigned label, int n) {
  auto bit = [&](int j) { return double(1 - 2 * int((label >> (n - 1 - j)) & 1u)); };
  double t = bit(n - 1);
  for (int j = n - 2; j >= 0; --j) t = bit(j) * (std::ldexp(1.0, n - 1 - j) - t);
  return t;
}

/// levels[label] for one dimension; label bit (n-1-j) is dimension bit j.
struct PamTable {
  int n = 0;
  std::array<double, 16> levels{};
};

PamTable pam_table(Modulation m) {
  PamTable t;
  t.n = bits_per_symbol(m) / 2;
  const double norm = amplitude_norm(m);
  for (unsigned label = 0; label < (1u << t.n); ++label) t.levels[label] = pam_level(label, t.n) * norm;
  return t;
}

}  // namespace

std::vector<ComplexSample> modulate(std::span<const std::uint8_t> bits, Modulation mod) {
  const int q = bits_per_symbol(mod);
  if (bits.size() % std::size_t(q) != 0) {
    throw ConfigError("modulate: bit count is not a multiple of bits per symbol");
  }
  const PamTable t = pam_table(mod);
  std::vector<ComplexSample> out(bits.size() / std::size_t(q));
  for (std::size_t s = 0; s < out.size(); ++s) {
    const auto* b = bits.data() + s * std::size_t(q);
    unsigned li = 0;
    unsigned lq = 0;
    for (int j = 0; j < t.n; ++j) {
      li = (li << 1) | (b[2 * j] & 1u);
      lq = (lq << 1) | (b[2 * j + 1] & 1u);
    }
    out[s] = {t.levels[li], t.levels[lq]};
  }
  return out;
}

LlrVector soft_demap(std::span<const ComplexSample> symbols, std::span<const double> noise_var,
                     Modulation mod) {
  if (noise_var.size() != symbols.size()) {
    throw ConfigError("soft_demap: one noise variance per symbol required");
  }
  const int q = bits_per_symbol(mod);
  const PamTable t = pam_table(mod);
  const unsigned n_labels = 1u << t.n;
  LlrVector llr(symbols.size() * std::size_t(q));
  std::array<double, 16> dist{};
  for (std::size_t s = 0; s < symbols.size(); ++s) {
    if (!(noise_var[s] > 0.0)) throw ConfigError("soft_demap: noise variance must be positive");
    const double inv = 1.0 / noise_var[s];
    for (int dim = 0; dim < 2; ++dim) {
      const double r = dim == 0 ? symbols[s].real() : symbols[s].imag();
      for (unsigned l = 0; l < n_labels; ++l) dist[l] = (r - t.levels[l]) * (r - t.levels[l]);
      for (int j = 0; j < t.n; ++j) {
        double d0 = std::numeric_limits<double>::infinity();
        double d1 = d0;
        const unsigned mask = 1u << (t.n - 1 - j);
        for (unsigned l = 0; l < n_labels; ++l) {
          if (l & mask) d1 = std::min(d1, dist[l]);
          else d0 = std::min(d0, dist[l]);
        }
        const double v = std::clamp((d1 - d0) * inv, -double(kLlrClamp), double(kLlrClamp));
        llr[s * std::size_t(q) + std::size_t(2 * j + dim)] = static_cast<float>(v);
      }
    }
  }
  return llr;
}

std::string_view code_file_name(MotherCode c) {
  switch (c) {
    case MotherCode::Rate1_8: return "qc_r1_8.alist";
    case MotherCode::Rate1_2: return "qc_r1_2.alist";
    case MotherCode::Rate5_8: return "qc_r5_8.alist";
    case MotherCode::Rate2_3: return "qc_r2_3.alist";
  }
  return "";
}

double nominal_rate(MotherCode c) {
  switch (c) {
    case MotherCode::Rate1_8: return 1.0 / 8.0;
    case MotherCode::Rate1_2: return 1.0 / 2.0;
    case MotherCode::Rate5_8: return 5.0 / 8.0;
    case MotherCode::Rate2_3: return 2.0 / 3.0;
  }
  return 0.0;
}

MotherCode select_mother_code(double code_rate) {
  for (auto c : {MotherCode::Rate1_8, MotherCode::Rate1_2, MotherCode::Rate5_8,
                 MotherCode::Rate2_3}) {
    if (code_rate <= nominal_rate(c) + 1e-9) return c;
  }
  throw ConfigError("no shipped mother code for rate " + std::to_string(code_rate));
}

std::filesystem::path codes_directory() {
  if (const char* env = std::getenv("FHC_CODES_DIR"); env != nullptr && *env != '\0') return env;
  return std::filesystem::path(FHC_SOURCE_DIR) / "codes";
}

const LdpcCode& mother_code(MotherCode c) {
  static std::mutex mu;
  static std::array<std::unique_ptr<LdpcCode>, 4> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[static_cast<std::size_t>(c)];
  if (!slot) slot = std::make_unique<LdpcCode>(LdpcCode::load(codes_directory() / code_file_name(c)));
  return *slot;
}

TbPlan plan_transport_block(const McsConfig& mcs, const LdpcCode& code, MotherCode tag) {
  mcs.validate();
  TbPlan p;
  p.mcs = mcs;
  p.mother = tag;
  p.code = &code;
  const std::size_t bits_per_re = std::size_t(bits_per_symbol(mcs.modulation));
  for (std::size_t s = mcs.n_data_symbols; s >= 1; --s) {
    const std::size_t tbs = mcs.tbs * s / mcs.n_data_symbols;
    const std::size_t capacity = mcs.n_prb * kSubcarriersPerPrb * s * bits_per_re;
    if (tbs > 0 && tbs + kCrcBits <= code.k() && tbs + kCrcBits < capacity) {
      p.n_symbols = s;
      p.tbs = tbs;
      p.info_bits = tbs + kCrcBits;
      p.capacity_bits = capacity;
      p.tbs_scale = double(s) / double(mcs.n_data_symbols);
      return p;
    }
  }
  throw ConfigError("mcs: transport block cannot be mapped onto the mother code");
}

TbPlan plan_transport_block(const McsConfig& mcs) {
  const MotherCode c = select_mother_code(mcs.code_rate);
  return plan_transport_block(mcs, mother_code(c), c);
}

namespace {

/// Index into the full codeword of the i-th bit of the circular buffer,
/// which holds the non-filler information bits followed by all parity bits.
std::size_t buffer_to_codeword(const TbPlan& plan, std::size_t i) {
  return i < plan.info_bits ? i : plan.code->k() + (i - plan.info_bits);
}

std::size_t buffer_length(const TbPlan& plan) { return plan.info_bits + plan.code->m(); }

}  // namespace

std::vector<std::uint8_t> encode(const TransportBlock& tb, const TbPlan& plan) {
  if (tb.payload.size() != plan.tbs) throw ConfigError("encode: payload size does not match plan");
  std::vector<std::uint8_t> info = tb.info_bits();
  info.resize(plan.code->k(), 0);  // shortening fillers
  const auto cw = plan.code->encode(info);
  const std::size_t len = buffer_length(plan);
  std::vector<std::uint8_t> out(plan.capacity_bits);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = cw[buffer_to_codeword(plan, i % len)];
  return out;
}

DecodeOutcome decode(std::span<const float> llrs, const TbPlan& plan,
                     const LdpcDecoderConfig& cfg) {
  if (llrs.size() != plan.capacity_bits) throw ConfigError("decode: LLR count does not match plan");
  const LdpcCode& code = *plan.code;
  // Fillers are known zeros.
  constexpr float kKnown = 1.0e4f;
  std::vector<float> full(code.n(), 0.0f);
  std::fill(full.begin() + std::ptrdiff_t(plan.info_bits), full.begin() + std::ptrdiff_t(code.k()),
            kKnown);
  const std::size_t len = buffer_length(plan);
  for (std::size_t i = 0; i < llrs.size(); ++i) full[buffer_to_codeword(plan, i % len)] += llrs[i];

  const auto res = ldpc_decode(code, full, cfg);
  DecodeOutcome out;
  out.iterations = res.iterations;
  out.tb.payload.assign(res.bits.begin(), res.bits.begin() + std::ptrdiff_t(plan.tbs));
  std::uint16_t crc = 0;
  for (std::size_t i = 0; i < kCrcBits; ++i) crc = static_cast<std::uint16_t>((crc << 1) | res.bits[plan.tbs + i]);
  out.tb.crc = crc;
  out.pass = res.parity_ok && out.tb.crc_ok();
  return out;
}

}  // namespace fhc
