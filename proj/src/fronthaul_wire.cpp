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

#include "fhc/fronthaul_wire.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fhc {

namespace {

class BitWriter {
 public:
  explicit BitWriter(std::vector<std::uint8_t>& out) : out_(out) {}

  void put(std::uint32_t value, int bits) {
    for (int b = bits - 1; b >= 0; --b) {
      if (fill_ == 0) out_.push_back(0);
      if ((value >> b) & 1u) out_.back() |= static_cast<std::uint8_t>(0x80u >> fill_);
      fill_ = (fill_ + 1) % 8;
    }
  }

 private:
  std::vector<std::uint8_t>& out_;
  int fill_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint32_t get(int bits) {
    std::uint32_t v = 0;
    for (int b = 0; b < bits; ++b, ++pos_) {
      v = (v << 1) | ((in_[pos_ / 8] >> (7 - pos_ % 8)) & 1u);
    }
    return v;
  }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

std::int32_t sign_extend(std::uint32_t v, int bits) {
  const std::uint32_t sign = 1u << (bits - 1);
  return static_cast<std::int32_t>((v ^ sign)) - static_cast<std::int32_t>(sign);
}

int wire_width(const CompressedBlock& cb) {
  return cb.method == CompressionMethod::None ? 16 : cb.m_bits;
}

}  // namespace

double Q17Scale::value() const { return std::ldexp(mantissa / 128.0, exponent); }

Q17Scale Q17Scale::from_value(double scale) {
  if (!(scale > 0.0)) return {};
  int e = kBlockScaleMinExponent;
  while (e < kBlockScaleMaxExponent && std::ldexp(scale, -e) * 128.0 >= 255.5) ++e;
  const double m = std::round(std::ldexp(scale, -e) * 128.0);
  return {static_cast<std::int8_t>(e), static_cast<std::uint8_t>(std::min(m, 255.0))};
}

std::uint8_t method_code(CompressionMethod m) {
  switch (m) {
    case CompressionMethod::None: return 0;
    case CompressionMethod::Bfp: return 1;
    case CompressionMethod::BlockScaling: return 2;
    case CompressionMethod::MuLaw: return 3;
    case CompressionMethod::Uniform: return 4;
  }
  return 0xF;
}

CompressionMethod method_from_code(std::uint8_t code) {
  switch (code) {
    case 0: return CompressionMethod::None;
    case 1: return CompressionMethod::Bfp;
    case 2: return CompressionMethod::BlockScaling;
    case 3: return CompressionMethod::MuLaw;
    case 4: return CompressionMethod::Uniform;
    default: throw WireError("wire: unknown method code " + std::to_string(code));
  }
}

std::size_t payload_bytes(int m_bits) {
  return (8 + kComponentsPerPrb * static_cast<std::size_t>(m_bits) + 7) / 8;
}

std::size_t section_bytes(int m_bits) { return kSectionHeaderBytes + payload_bytes(m_bits); }

void pack_into(const CompressedBlock& cb, std::uint16_t prb_index, std::vector<std::uint8_t>& out) {
  const int m = wire_width(cb);
  if (m < 1 || m > 16) throw WireError("wire: m_bits out of range");
  const auto [lo, hi] = code_range(cb.method, m);
  for (auto c : cb.codes) {
    if (c < lo || c > hi) {
      throw WireError("wire: code " + std::to_string(c) + " does not fit " + std::to_string(m) +
                      " bits");
    }
  }

  std::uint8_t shift_nibble = 0;
  std::uint8_t param = 0;
  switch (cb.method) {
    case CompressionMethod::None:
    case CompressionMethod::Uniform: break;
    case CompressionMethod::Bfp: {
      const int e = std::get<BfpExponent>(cb.side).exponent;
      if (e < kBfpMinExponent || e > kBfpMaxExponent) throw WireError("wire: exponent out of range");
      param = static_cast<std::uint8_t>(e - kBfpMinExponent);
      break;
    }
    case CompressionMethod::BlockScaling: {
      const auto q = Q17Scale::from_value(std::get<BlockScale>(cb.side).scale);
      shift_nibble = static_cast<std::uint8_t>(q.exponent - kBlockScaleMinExponent);
      param = q.mantissa;
      break;
    }
    case CompressionMethod::MuLaw: {
      const unsigned s = std::get<MuLawShift>(cb.side).shift;
      if (s > kMuLawMaxShift) throw WireError("wire: mu-law shift out of range");
      param = static_cast<std::uint8_t>(s);
      break;
    }
  }

  out.reserve(out.size() + section_bytes(m));
  out.push_back(static_cast<std::uint8_t>((method_code(cb.method) << 4) | (m & 0xF)));
  out.push_back(shift_nibble);
  out.push_back(static_cast<std::uint8_t>(prb_index >> 8));
  out.push_back(static_cast<std::uint8_t>(prb_index & 0xFF));
  out.push_back(param);
  BitWriter w(out);
  const std::uint32_t mask = (1u << m) - 1u;
  for (auto c : cb.codes) w.put(static_cast<std::uint32_t>(c) & mask, m);
}

std::vector<std::uint8_t> pack(const CompressedBlock& cb, std::uint16_t prb_index) {
  std::vector<std::uint8_t> out;
  pack_into(cb, prb_index, out);
  return out;
}

UnpackedSection unpack_section(std::span<const std::uint8_t> bytes, const CompressionConfig& cfg) {
  const int m = cfg.method == CompressionMethod::None ? 16 : cfg.m_bits;
  if (m < 1 || m > 16) throw WireError("wire: m_bits out of range");
  if (bytes.size() != section_bytes(m)) {
    throw WireError("wire: section length " + std::to_string(bytes.size()) + ", expected " +
                    std::to_string(section_bytes(m)));
  }
  const auto method = method_from_code(bytes[0] >> 4);
  const int width = (bytes[0] & 0xF) == 0 ? 16 : (bytes[0] & 0xF);
  if (method != cfg.method || width != m) {
    throw WireError("wire: section header does not match the expected method/width");
  }
  if ((bytes[1] & 0xF0) != 0) throw WireError("wire: reserved header bits set");
  const std::uint8_t shift_nibble = bytes[1] & 0x0F;
  if (shift_nibble != 0 && method != CompressionMethod::BlockScaling) {
    throw WireError("wire: scale exponent set for a method without block scale");
  }

  UnpackedSection sec;
  sec.prb_index = static_cast<std::uint16_t>((bytes[2] << 8) | bytes[3]);
  CompressedBlock& cb = sec.block;
  cb.method = method;
  cb.m_bits = m;
  const std::uint8_t param = bytes[4];
  switch (method) {
    case CompressionMethod::None:
      if (param != 0) throw WireError("wire: reserved parameter bits set");
      cb.side = std::monostate{};
      break;
    case CompressionMethod::Uniform:
      if (param != 0) throw WireError("wire: reserved parameter bits set");
      if (!cfg.delta) throw WireError("wire: uniform step size not configured");
      cb.side = UniformStep{*cfg.delta};
      break;
    case CompressionMethod::Bfp:
      if (param & 0xF0) throw WireError("wire: reserved parameter bits set");
      cb.side = BfpExponent{static_cast<int>(param) + kBfpMinExponent};
      break;
    case CompressionMethod::BlockScaling:
      cb.side = BlockScale{
          Q17Scale{static_cast<std::int8_t>(shift_nibble + kBlockScaleMinExponent), param}.value()};
      break;
    case CompressionMethod::MuLaw:
      if (param & 0xF0) throw WireError("wire: reserved parameter bits set");
      cb.side = MuLawShift{param, cfg.mu};
      break;
  }

  BitReader r(bytes.subspan(kSectionHeaderBytes + 1));
  const auto [lo, hi] = code_range(method, m);
  for (auto& c : cb.codes) {
    c = sign_extend(r.get(m), m);
    if (c < lo || c > hi) throw WireError("wire: code outside the method's range");
  }
  return sec;
}

CompressedBlock unpack(std::span<const std::uint8_t> bytes, const CompressionConfig& cfg) {
  return unpack_section(bytes, cfg).block;
}

std::uint64_t fronthaul_load(std::uint64_t n_prb, std::uint64_t n_symbols, std::uint64_t n_antennas,
                             int m_bits) {
  if (n_prb == 0 || n_symbols == 0 || n_antennas == 0 || m_bits < 1 || m_bits > 16) {
    throw ConfigError("fronthaul_load: all arguments must be positive and m_bits <= 16");
  }
  return n_prb * n_symbols * n_antennas *
         (8 + kComponentsPerPrb * static_cast<std::uint64_t>(m_bits));
}

}  // namespace fhc
