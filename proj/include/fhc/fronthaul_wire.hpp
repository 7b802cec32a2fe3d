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

// Per-PRB fronthaul section, loosely modelled on the O-RAN U-plane PRB
// section. Not interoperable with real O-RUs; all multi-byte fields are
// big-endian and sample codes are packed MSB-first.
//
//   byte 0   method (high nibble) | IQ width (low nibble, 0 means 16)
//   byte 1   reserved zero (high) | scale exponent + 8 (low, block scaling only)
//   byte 2-3 PRB index
//   byte 4   compression parameter
//   byte 5.. 24 two's-complement codes of m bits each, I then Q per sample
//
// Parameter byte by method:
//   none     0
//   bfp      reserved zero nibble | exponent + 8
//   bs       Q1.7 scale mantissa (exponent lives in byte 1)
//   mulaw    reserved zero nibble | shift
//   uniform  0 (the step size is configuration, not transported)

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fhc/compression.hpp"
#include "fhc/error.hpp"

namespace fhc {

class WireError : public RuntimeError {
 public:
  using RuntimeError::RuntimeError;
};

inline constexpr std::size_t kSectionHeaderBytes = 4;

/// Block scale as carried on the wire: mantissa/128 * 2^exponent.
struct Q17Scale {
  std::int8_t exponent = kBlockScaleMinExponent;  ///< [-8, 7], sent as exponent + 8
  std::uint8_t mantissa = 0;                      ///< Q1.7

  double value() const;
  /// Nearest representable scale using the smallest exponent that keeps the
  /// mantissa in 8 bits. Idempotent: from_value(q.value()) == q.
  static Q17Scale from_value(double scale);

  friend bool operator==(const Q17Scale&, const Q17Scale&) = default;
};

std::uint8_t method_code(CompressionMethod m);
CompressionMethod method_from_code(std::uint8_t code);

/// Parameter byte plus packed codes: (8 + 24 m) bits, rounded up to bytes.
std::size_t payload_bytes(int m_bits);
std::size_t section_bytes(int m_bits);

/// Serializes one block as a complete section.
std::vector<std::uint8_t> pack(const CompressedBlock& cb, std::uint16_t prb_index = 0);
/// Appends the section to `out`.
void pack_into(const CompressedBlock& cb, std::uint16_t prb_index, std::vector<std::uint8_t>& out);

struct UnpackedSection {
  CompressedBlock block;
  std::uint16_t prb_index = 0;
};

/// Parses one section. `cfg` supplies what the wire does not carry (uniform
/// step, mu) and the expected method and width. Block scales come back
/// quantized to Q17Scale.
UnpackedSection unpack_section(std::span<const std::uint8_t> bytes, const CompressionConfig& cfg);
CompressedBlock unpack(std::span<const std::uint8_t> bytes, const CompressionConfig& cfg);

/// Compressed payload bits per slot, excluding section headers.
std::uint64_t fronthaul_load(std::uint64_t n_prb, std::uint64_t n_symbols, std::uint64_t n_antennas,
                             int m_bits);

}  // namespace fhc
