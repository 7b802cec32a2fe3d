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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fhc/iq_core.hpp"
#include "fhc/ldpc.hpp"

namespace fhc {

enum class Modulation { Qpsk = 2, Qam16 = 4, Qam64 = 6, Qam256 = 8 };

inline constexpr int bits_per_symbol(Modulation m) { return static_cast<int>(m); }
std::string_view to_string(Modulation m);
Modulation parse_modulation(std::string_view s);

struct McsConfig {
  Modulation modulation = Modulation::Qpsk;
  double code_rate = 120.0 / 1024.0;
  std::size_t n_prb = 25;
  std::size_t tbs = 848;                ///< information bits, CRC excluded
  std::size_t n_data_symbols = 12;      ///< PUSCH data symbols in the slot

  void validate() const;
};

/// Rows 1..4 of the evaluated MCS set (QPSK, 16QAM, 64QAM, 256QAM on 25 PRBs).
McsConfig table1_mcs(int index);

inline constexpr std::size_t kCrcBits = 16;

/// CRC-16/CCITT-FALSE (poly 0x1021, init 0xFFFF, no reflection, no xorout)
/// over a bit sequence, MSB first.
std::uint16_t crc16(std::span<const std::uint8_t> bits);

struct TransportBlock {
  std::vector<std::uint8_t> payload;  ///< one bit per element
  std::uint16_t crc = 0;

  static TransportBlock from_payload(std::vector<std::uint8_t> payload);
  bool crc_ok() const { return crc16(payload) == crc; }
  /// payload followed by the CRC, MSB first.
  std::vector<std::uint8_t> info_bits() const;

  friend bool operator==(const TransportBlock&, const TransportBlock&) = default;
};

inline constexpr float kLlrClamp = 50.0f;
using LlrVector = std::vector<float>;

/// Gray-mapped, unit average power constellation (38.211 bit labelling:
/// even bits select the I level, odd bits the Q level).
std::vector<ComplexSample> modulate(std::span<const std::uint8_t> bits, Modulation mod);

/// Max-log LLRs, clamped to ±kLlrClamp. `noise_var` holds one complex noise
/// variance per symbol.
LlrVector soft_demap(std::span<const ComplexSample> symbols, std::span<const double> noise_var,
                     Modulation mod);

/// Mother codes shipped under codes/, by nominal rate.
enum class MotherCode { Rate1_8, Rate1_2, Rate5_8, Rate2_3 };
std::string_view code_file_name(MotherCode c);
double nominal_rate(MotherCode c);
/// Lowest-rate-above-target choice: the smallest nominal rate >= code_rate.
MotherCode select_mother_code(double code_rate);

/// Directory holding the alist files; FHC_CODES_DIR overrides the built-in path.
std::filesystem::path codes_directory();
/// Cached, thread-safe load of a shipped code.
const LdpcCode& mother_code(MotherCode c);

/// How one transport block is laid onto the slot at desk scale: a single
/// code block, shortened to the TB size and circularly rate matched onto the
/// used REs. When the TBS would not fit the mother code, the number of data
/// symbols (and the TBS with it) is scaled down proportionally.
struct TbPlan {
  McsConfig mcs;
  MotherCode mother{};
  const LdpcCode* code = nullptr;
  std::size_t n_symbols = 0;      ///< data symbols actually used
  std::size_t tbs = 0;            ///< effective TBS after scaling
  std::size_t info_bits = 0;      ///< tbs + CRC
  std::size_t capacity_bits = 0;  ///< coded bits mapped onto the grid
  double tbs_scale = 1.0;         ///< n_symbols / mcs.n_data_symbols

  std::size_t n_subcarriers() const { return mcs.n_prb * kSubcarriersPerPrb; }
  std::size_t n_res() const { return n_subcarriers() * n_symbols; }
  double effective_rate() const { return double(info_bits) / double(capacity_bits); }
};

TbPlan plan_transport_block(const McsConfig& mcs);
/// Same, with an explicit code (tests use small toy codes).
TbPlan plan_transport_block(const McsConfig& mcs, const LdpcCode& code, MotherCode tag);

/// Systematic encoding of tb into exactly plan.capacity_bits coded bits.
std::vector<std::uint8_t> encode(const TransportBlock& tb, const TbPlan& plan);

struct DecodeOutcome {
  TransportBlock tb;
  bool pass = false;  ///< parity satisfied and CRC matches
  int iterations = 0;
};

DecodeOutcome decode(std::span<const float> llrs, const TbPlan& plan,
                     const LdpcDecoderConfig& cfg = {});

}  // namespace fhc
