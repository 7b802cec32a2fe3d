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
#include <span>
#include <vector>

#include "fhc/channel.hpp"
#include "fhc/compression.hpp"
#include "fhc/iq_core.hpp"

namespace fhc {

/// Per-subcarrier combining vectors for the served users, stacked over RUs
/// like ChannelRealization.
class CombinerWeights {
 public:
  CombinerWeights() = default;
  CombinerWeights(std::size_t n_served, std::size_t n_subcarriers, std::size_t dims);

  std::size_t n_served() const { return n_served_; }
  std::size_t n_subcarriers() const { return n_sc_; }
  std::size_t dims() const { return dims_; }

  std::span<ComplexSample> w(std::size_t k, std::size_t subcarrier);
  std::span<const ComplexSample> w(std::size_t k, std::size_t subcarrier) const;

 private:
  std::size_t n_served_ = 0;
  std::size_t n_sc_ = 0;
  std::size_t dims_ = 0;
  std::vector<ComplexSample> data_;
};

/// w_k = (sum_j g_j g_j^H + sum_i g_Ii g_Ii^H + sigma^2 I)^-1 g_k for the
/// first `n_served` users, using every coordinated user and interferer in
/// the covariance. Throws RuntimeError when sigma^2 == 0 and the covariance
/// is singular.
CombinerWeights mmse_weights(const ChannelRealization& channel, const NoiseConfig& noise,
                             std::size_t n_served);

/// Per-RU fronthaul distortion seen by the combiner: the Bussgang
/// distortion power plus the bias term |alpha - 1|^2 * input power. Empty
/// means lossless transport.
struct FronthaulDistortion {
  std::vector<double> per_ru;

  static FronthaulDistortion from_bussgang(std::span<const BussgangStats> per_ru);
};

/// Combined output for one user: symbol estimates x_hat = w^H y, the
/// effective gain Re(w^H g) and the effective noise-plus-interference
/// variance, all per RE (subcarrier-major within a symbol column).
struct EqualizedStream {
  std::size_t n_subcarriers = 0;
  std::size_t n_symbols = 0;
  std::vector<ComplexSample> x_hat;
  std::vector<double> eff_gain;
  std::vector<double> eff_noise_var;

  /// Estimates scaled by 1/eff_gain and noise variances by 1/eff_gain^2,
  /// ready for the demapper.
  void normalized(std::vector<ComplexSample>& symbols, std::vector<double>& noise_var) const;
};

EqualizedStream equalize(const CombinerWeights& weights, std::size_t user,
                         std::span<const ResourceGrid> received, const ChannelRealization& channel,
                         const NoiseConfig& noise, const FronthaulDistortion& distortion = {});

/// RMS error vector magnitude in percent of the reference RMS, after
/// removing the effective gain.
double evm_percent(const EqualizedStream& stream, std::span<const ComplexSample> reference);

}  // namespace fhc
