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

#include "fhc/iq_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fhc/error.hpp"

namespace fhc {

bool is_finite(const PrbBlock& block) {
  const auto c = components(block);
  return std::all_of(c.begin(), c.end(), [](double v) { return std::isfinite(v); });
}

ResourceGrid::ResourceGrid(std::size_t n_subcarriers, std::size_t n_symbols,
                           std::size_t n_antennas)
    : n_subcarriers_(n_subcarriers), n_symbols_(n_symbols), n_antennas_(n_antennas) {
  if (n_subcarriers == 0 || n_subcarriers % kSubcarriersPerPrb != 0) {
    throw ConfigError("resource grid: subcarrier count must be a positive multiple of 12, got " +
                      std::to_string(n_subcarriers));
  }
  if (n_symbols == 0 || n_antennas == 0) {
    throw ConfigError("resource grid: symbol and antenna counts must be positive");
  }
  data_.assign(n_subcarriers * n_symbols * n_antennas, ComplexSample{});
}

std::size_t ResourceGrid::offset(std::size_t subcarrier, std::size_t symbol,
                                 std::size_t antenna) const {
  if (subcarrier >= n_subcarriers_ || symbol >= n_symbols_ || antenna >= n_antennas_) {
    throw std::out_of_range("resource grid index out of range");
  }
  return (antenna * n_symbols_ + symbol) * n_subcarriers_ + subcarrier;
}

ComplexSample& ResourceGrid::at(std::size_t subcarrier, std::size_t symbol, std::size_t antenna) {
  return data_[offset(subcarrier, symbol, antenna)];
}

const ComplexSample& ResourceGrid::at(std::size_t subcarrier, std::size_t symbol,
                                      std::size_t antenna) const {
  return data_[offset(subcarrier, symbol, antenna)];
}

std::span<ComplexSample> ResourceGrid::column(std::size_t symbol, std::size_t antenna) {
  return std::span<ComplexSample>(data_).subspan(offset(0, symbol, antenna), n_subcarriers_);
}

std::span<const ComplexSample> ResourceGrid::column(std::size_t symbol,
                                                    std::size_t antenna) const {
  return std::span<const ComplexSample>(data_).subspan(offset(0, symbol, antenna), n_subcarriers_);
}

void TopologyConfig::validate() const {
  if (n_r < 1) throw ConfigError("topology: n_r must be at least 1");
  if (m_coor < 1) throw ConfigError("topology: m_coor must be at least 1");
  if (k_serv > k_coor) throw ConfigError("topology: k_serv must not exceed k_coor");
  if (k_coor < 1) throw ConfigError("topology: k_coor must be at least 1");
}

std::vector<PrbBlock> grid_to_prb_blocks(const ResourceGrid& grid, std::size_t antenna,
                                         std::size_t symbol) {
  const auto col = grid.column(symbol, antenna);
  std::vector<PrbBlock> blocks(grid.n_prb());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    std::copy_n(col.begin() + static_cast<std::ptrdiff_t>(b * kSubcarriersPerPrb),
                kSubcarriersPerPrb, blocks[b].begin());
  }
  return blocks;
}

void prb_blocks_to_grid(std::span<const PrbBlock> blocks, std::size_t antenna, std::size_t symbol,
                        ResourceGrid& grid) {
  if (blocks.size() * kSubcarriersPerPrb != grid.n_subcarriers()) {
    throw ConfigError("prb_blocks_to_grid: " + std::to_string(blocks.size()) +
                      " blocks do not cover " + std::to_string(grid.n_subcarriers()) +
                      " subcarriers");
  }
  auto col = grid.column(symbol, antenna);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    std::copy(blocks[b].begin(), blocks[b].end(),
              col.begin() + static_cast<std::ptrdiff_t>(b * kSubcarriersPerPrb));
  }
}

}  // namespace fhc
