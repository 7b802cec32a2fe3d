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
#include <cstddef>
#include <span>
#include <vector>

namespace fhc {

/// One IQ sample in the normalized full-scale domain (±1.0 is the largest
/// representable amplitude per component).
using ComplexSample = std::complex<double>;

inline constexpr std::size_t kSubcarriersPerPrb = 12;
inline constexpr std::size_t kComponentsPerPrb = 2 * kSubcarriersPerPrb;
inline constexpr std::size_t kSymbolsPerSlot = 14;

/// The atomic compression unit: 12 adjacent subcarriers of one symbol.
using PrbBlock = std::array<ComplexSample, kSubcarriersPerPrb>;

/// View of a block as 24 interleaved components (re0, im0, re1, ...).
/// std::complex guarantees the array-of-two layout.
inline std::span<const double, kComponentsPerPrb> components(const PrbBlock& b) {
  return std::span<const double, kComponentsPerPrb>(reinterpret_cast<const double*>(b.data()),
                                                    kComponentsPerPrb);
}
inline std::span<double, kComponentsPerPrb> components(PrbBlock& b) {
  return std::span<double, kComponentsPerPrb>(reinterpret_cast<double*>(b.data()),
                                              kComponentsPerPrb);
}

bool is_finite(const PrbBlock& block);

/// Frequency-domain samples of one slot: (subcarrier, symbol, antenna).
/// Subcarrier-major within a symbol so a PRB column is contiguous.
class ResourceGrid {
 public:
  ResourceGrid() = default;
  ResourceGrid(std::size_t n_subcarriers, std::size_t n_symbols, std::size_t n_antennas);

  std::size_t n_subcarriers() const { return n_subcarriers_; }
  std::size_t n_symbols() const { return n_symbols_; }
  std::size_t n_antennas() const { return n_antennas_; }
  std::size_t n_prb() const { return n_subcarriers_ / kSubcarriersPerPrb; }

  ComplexSample& at(std::size_t subcarrier, std::size_t symbol, std::size_t antenna);
  const ComplexSample& at(std::size_t subcarrier, std::size_t symbol, std::size_t antenna) const;

  /// Contiguous subcarrier column for (symbol, antenna).
  std::span<ComplexSample> column(std::size_t symbol, std::size_t antenna);
  std::span<const ComplexSample> column(std::size_t symbol, std::size_t antenna) const;

  std::span<const ComplexSample> data() const { return data_; }
  std::span<ComplexSample> data() { return data_; }

  friend bool operator==(const ResourceGrid&, const ResourceGrid&) = default;

 private:
  std::size_t offset(std::size_t subcarrier, std::size_t symbol, std::size_t antenna) const;

  std::size_t n_subcarriers_ = 0;
  std::size_t n_symbols_ = 0;
  std::size_t n_antennas_ = 0;
  std::vector<ComplexSample> data_;
};

struct TopologyConfig {
  std::size_t m_coor = 8;  ///< RUs in the coordination region
  std::size_t n_r = 1;     ///< antennas per RU
  std::size_t k_serv = 2;
  std::size_t k_coor = 2;
  std::size_t k_int = 0;

  std::size_t rx_dims() const { return m_coor * n_r; }
  void validate() const;
};

/// Splits the (antenna, symbol) column into PRB blocks, block b covering
/// subcarriers [12b, 12b+11].
std::vector<PrbBlock> grid_to_prb_blocks(const ResourceGrid& grid, std::size_t antenna,
                                         std::size_t symbol);

/// Writes blocks back into the (antenna, symbol) column; inverse of
/// grid_to_prb_blocks.
void prb_blocks_to_grid(std::span<const PrbBlock> blocks, std::size_t antenna, std::size_t symbol,
                        ResourceGrid& grid);

}  // namespace fhc
