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
#include <iosfwd>
#include <span>
#include <vector>

#include "fhc/iq_core.hpp"

namespace fhc {

struct Position {
  double x = 0.0;
  double y = 0.0;
};

/// Log-distance pathloss with log-normal shadowing. Defaults follow the
/// common 128.1 + 37.6 log10(d/km) macro model; they are configuration, not
/// measured ground truth.
struct PathlossParams {
  double pl0_db = 128.1;
  double d0_m = 1000.0;
  double exponent = 3.76;
  double shadow_sigma_db = 8.0;
  double min_distance_m = 10.0;  ///< distances are clamped up to this
};

double pathloss_db(double distance_m, const PathlossParams& p);

/// Linear power gains beta(m, k) for n_ru RUs and n_users transmitters.
class LargeScale {
 public:
  LargeScale() = default;
  LargeScale(std::size_t n_ru, std::size_t n_users, std::vector<double> beta);

  std::size_t n_ru() const { return n_ru_; }
  std::size_t n_users() const { return n_users_; }
  double operator()(std::size_t ru, std::size_t user) const { return beta_[ru * n_users_ + user]; }

 private:
  std::size_t n_ru_ = 0;
  std::size_t n_users_ = 0;
  std::vector<double> beta_;
};

/// beta = 10^(-(PL(d) + X)/10), X ~ N(0, shadow_sigma_db^2) i.i.d. per link.
/// Throws on a zero distance.
LargeScale pathloss_beta(std::span<const Position> rus, std::span<const Position> users,
                         const PathlossParams& params, std::uint64_t seed);

struct TdlTap {
  double delay_s;
  double power;  ///< linear, taps sum to one
};

struct TdlProfile {
  std::vector<TdlTap> taps;
  double delay_spread_s = 0.0;
  double doppler_hz = 0.0;
};

/// Power-weighted RMS delay spread of the taps.
double rms_delay_spread(std::span<const TdlTap> taps);

/// Reads `delay_ns,power_db` rows (a header line is allowed), normalizes the
/// powers and rescales the delays so the RMS delay spread equals
/// `delay_spread_s`. A single-tap profile is left unscaled.
TdlProfile load_tdl_profile(std::istream& csv, double delay_spread_s);
TdlProfile load_tdl_profile(const std::filesystem::path& path, double delay_spread_s);
TdlProfile flat_profile();

/// Frequency-domain channel of one slot. Doppler is zero, so one response
/// per subcarrier holds for every symbol. Vectors are stacked over RUs:
/// entry ru * n_r + antenna.
class ChannelRealization {
 public:
  ChannelRealization() = default;
  ChannelRealization(std::size_t n_ru, std::size_t n_r, std::size_t n_users, std::size_t n_int,
                     std::size_t n_subcarriers);

  std::size_t n_ru() const { return n_ru_; }
  std::size_t n_r() const { return n_r_; }
  std::size_t rx_dims() const { return n_ru_ * n_r_; }
  std::size_t n_users() const { return n_users_; }
  std::size_t n_interferers() const { return n_int_; }
  std::size_t n_subcarriers() const { return n_sc_; }

  std::span<ComplexSample> user(std::size_t k, std::size_t subcarrier);
  std::span<const ComplexSample> user(std::size_t k, std::size_t subcarrier) const;
  std::span<ComplexSample> interferer(std::size_t k, std::size_t subcarrier);
  std::span<const ComplexSample> interferer(std::size_t k, std::size_t subcarrier) const;

  friend bool operator==(const ChannelRealization&, const ChannelRealization&) = default;

 private:
  std::size_t n_ru_ = 0;
  std::size_t n_r_ = 0;
  std::size_t n_users_ = 0;
  std::size_t n_int_ = 0;
  std::size_t n_sc_ = 0;
  std::vector<ComplexSample> g_;  // [transmitter][subcarrier][rx dim]
};

struct NoiseConfig {
  double sigma_z_sq = 0.0;

  /// Unit transmit power per RE, so sigma^2 = 10^(-snr/10).
  static NoiseConfig from_tx_snr_db(double tx_snr_db);
  /// Thermal noise k T B over one RE bandwidth.
  static NoiseConfig from_temperature(double kelvin, double bandwidth_hz);
};

/// Draws a TDL response per (RU, transmitter, antenna): i.i.d. complex
/// Gaussian tap gains with the profile's powers, evaluated at subcarrier
/// frequencies (n - n_sc/2) * scs, then scaled by sqrt(beta). Users are the
/// first k_coor columns of `large_scale`, interferers the next k_int.
ChannelRealization realize_channel(const TdlProfile& profile, const TopologyConfig& topology,
                                   const LargeScale& large_scale, std::size_t n_subcarriers,
                                   double subcarrier_spacing_hz, std::uint64_t seed);

/// y_m = sum_k g_mk x_k + sum_k g_Imk x_Ik + z_m. Transmit grids are single
/// antenna; the result holds one grid per RU with n_r antennas.
std::vector<ResourceGrid> apply_channel(std::span<const ResourceGrid> user_tx,
                                        std::span<const ResourceGrid> interferer_tx,
                                        const ChannelRealization& channel,
                                        const NoiseConfig& noise, std::uint64_t seed);

}  // namespace fhc
