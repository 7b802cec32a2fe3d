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

#include "fhc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "fhc/error.hpp"

namespace fhc {

double pathloss_db(double distance_m, const PathlossParams& p) {
  if (!(distance_m > 0.0)) throw ConfigError("pathloss: distance must be positive");
  const double d = std::max(distance_m, p.min_distance_m);
  return p.pl0_db + 10.0 * p.exponent * std::log10(d / p.d0_m);
}

LargeScale::LargeScale(std::size_t n_ru, std::size_t n_users, std::vector<double> beta)
    : n_ru_(n_ru), n_users_(n_users), beta_(std::move(beta)) {
  if (beta_.size() != n_ru * n_users) throw ConfigError("large scale: size mismatch");
  for (double b : beta_) {
    if (!(b > 0.0)) throw ConfigError("large scale: beta must be positive");
  }
}

LargeScale pathloss_beta(std::span<const Position> rus, std::span<const Position> users,
                         const PathlossParams& params, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> shadow(0.0, params.shadow_sigma_db);
  std::vector<double> beta(rus.size() * users.size());
  for (std::size_t m = 0; m < rus.size(); ++m) {
    for (std::size_t k = 0; k < users.size(); ++k) {
      const double d = std::hypot(rus[m].x - users[k].x, rus[m].y - users[k].y);
      if (!(d > 0.0)) throw ConfigError("pathloss: RU and user are co-located");
      const double x = params.shadow_sigma_db > 0.0 ? shadow(rng) : 0.0;
      beta[m * users.size() + k] = std::pow(10.0, -(pathloss_db(d, params) + x) / 10.0);
    }
  }
  return LargeScale(rus.size(), users.size(), std::move(beta));
}

double rms_delay_spread(std::span<const TdlTap> taps) {
  double p = 0.0, m1 = 0.0, m2 = 0.0;
  for (const auto& t : taps) {
    p += t.power;
    m1 += t.power * t.delay_s;
    m2 += t.power * t.delay_s * t.delay_s;
  }
  if (!(p > 0.0)) return 0.0;
  const double mean = m1 / p;
  return std::sqrt(std::max(0.0, m2 / p - mean * mean));
}

TdlProfile load_tdl_profile(std::istream& csv, double delay_spread_s) {
  TdlProfile prof;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(csv, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double delay_ns = 0.0, power_db = 0.0;
    if (!(ss >> delay_ns >> power_db)) {
      if (prof.taps.empty() && line_no == 1) continue;  // header
      throw ConfigError("TDL profile: malformed row " + std::to_string(line_no));
    }
    if (delay_ns < 0.0) throw ConfigError("TDL profile: negative delay");
    prof.taps.push_back({delay_ns * 1e-9, std::pow(10.0, power_db / 10.0)});
  }
  if (prof.taps.empty()) throw ConfigError("TDL profile: no taps");
  double total = 0.0;
  for (const auto& t : prof.taps) total += t.power;
  for (auto& t : prof.taps) t.power /= total;
  const double ds = rms_delay_spread(prof.taps);
  if (ds > 0.0 && delay_spread_s > 0.0) {
    for (auto& t : prof.taps) t.delay_s *= delay_spread_s / ds;
  }
  prof.delay_spread_s = rms_delay_spread(prof.taps);
  return prof;
}

TdlProfile load_tdl_profile(const std::filesystem::path& path, double delay_spread_s) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open TDL profile " + path.string());
  return load_tdl_profile(in, delay_spread_s);
}

TdlProfile flat_profile() { return TdlProfile{{{0.0, 1.0}}, 0.0, 0.0}; }

ChannelRealization::ChannelRealization(std::size_t n_ru, std::size_t n_r, std::size_t n_users,
                                       std::size_t n_int, std::size_t n_subcarriers)
    : n_ru_(n_ru), n_r_(n_r), n_users_(n_users), n_int_(n_int), n_sc_(n_subcarriers),
      g_((n_users + n_int) * n_subcarriers * n_ru * n_r) {}

std::span<ComplexSample> ChannelRealization::user(std::size_t k, std::size_t n) {
  return std::span<ComplexSample>(g_).subspan((k * n_sc_ + n) * rx_dims(), rx_dims());
}
std::span<const ComplexSample> ChannelRealization::user(std::size_t k, std::size_t n) const {
  return std::span<const ComplexSample>(g_).subspan((k * n_sc_ + n) * rx_dims(), rx_dims());
}
std::span<ComplexSample> ChannelRealization::interferer(std::size_t k, std::size_t n) {
  return user(n_users_ + k, n);
}
std::span<const ComplexSample> ChannelRealization::interferer(std::size_t k, std::size_t n) const {
  return user(n_users_ + k, n);
}

NoiseConfig NoiseConfig::from_tx_snr_db(double tx_snr_db) {
  return {std::pow(10.0, -tx_snr_db / 10.0)};
}

NoiseConfig NoiseConfig::from_temperature(double kelvin, double bandwidth_hz) {
  constexpr double kBoltzmann = 1.380649e-23;
  return {kBoltzmann * kelvin * bandwidth_hz};
}

ChannelRealization realize_channel(const TdlProfile& profile, const TopologyConfig& topology,
                                   const LargeScale& large_scale, std::size_t n_subcarriers,
                                   double subcarrier_spacing_hz, std::uint64_t seed) {
  topology.validate();
  if (profile.taps.empty()) throw ConfigError("realize_channel: empty TDL profile");
  const std::size_t n_tx = topology.k_coor + topology.k_int;
  if (large_scale.n_ru() != topology.m_coor || large_scale.n_users() != n_tx) {
    throw ConfigError("realize_channel: large-scale matrix does not match the topology");
  }
  ChannelRealization ch(topology.m_coor, topology.n_r, topology.k_coor, topology.k_int,
                        n_subcarriers);

  // phasor[p][n] = exp(-j 2 pi f_n tau_p)
  const std::size_t n_taps = profile.taps.size();
  std::vector<ComplexSample> phasor(n_taps * n_subcarriers);
  for (std::size_t p = 0; p < n_taps; ++p) {
    for (std::size_t n = 0; n < n_subcarriers; ++n) {
      const double f = (double(n) - double(n_subcarriers) / 2.0) * subcarrier_spacing_hz;
      phasor[p * n_subcarriers + n] =
          std::polar(1.0, -2.0 * std::numbers::pi * f * profile.taps[p].delay_s);
    }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<ComplexSample> taps(n_taps);
  for (std::size_t t = 0; t < n_tx; ++t) {
    for (std::size_t m = 0; m < topology.m_coor; ++m) {
      const double amp = std::sqrt(large_scale(m, t));
      for (std::size_t a = 0; a < topology.n_r; ++a) {
        for (std::size_t p = 0; p < n_taps; ++p) {
          const double s = std::sqrt(profile.taps[p].power / 2.0);
          const double re = normal(rng);
          const double im = normal(rng);
          taps[p] = {s * re, s * im};
        }
        const std::size_t dim = m * topology.n_r + a;
        for (std::size_t n = 0; n < n_subcarriers; ++n) {
          ComplexSample h{};
          for (std::size_t p = 0; p < n_taps; ++p) h += taps[p] * phasor[p * n_subcarriers + n];
          ch.user(t, n)[dim] = amp * h;
        }
      }
    }
  }
  return ch;
}

std::vector<ResourceGrid> apply_channel(std::span<const ResourceGrid> user_tx,
                                        std::span<const ResourceGrid> interferer_tx,
                                        const ChannelRealization& channel,
                                        const NoiseConfig& noise, std::uint64_t seed) {
  if (user_tx.size() != channel.n_users() || interferer_tx.size() != channel.n_interferers()) {
    throw ConfigError("apply_channel: transmitter count does not match the channel");
  }
  if (user_tx.empty()) throw ConfigError("apply_channel: no users");
  const std::size_t n_sc = user_tx.front().n_subcarriers();
  const std::size_t n_sym = user_tx.front().n_symbols();
  auto check = [&](const ResourceGrid& g) {
    if (g.n_subcarriers() != n_sc || g.n_symbols() != n_sym || g.n_antennas() != 1 ||
        n_sc != channel.n_subcarriers()) {
      throw ConfigError("apply_channel: transmit grid shape mismatch");
    }
  };
  for (const auto& g : user_tx) check(g);
  for (const auto& g : interferer_tx) check(g);
  if (noise.sigma_z_sq < 0.0) throw ConfigError("apply_channel: negative noise power");

  const std::size_t n_r = channel.n_r();
  std::vector<ResourceGrid> rx;
  rx.reserve(channel.n_ru());
  for (std::size_t m = 0; m < channel.n_ru(); ++m) rx.emplace_back(n_sc, n_sym, n_r);

  auto add = [&](const ResourceGrid& tx, auto&& gain_of) {
    for (std::size_t l = 0; l < n_sym; ++l) {
      const auto x = tx.column(l, 0);
      for (std::size_t n = 0; n < n_sc; ++n) {
        const auto g = gain_of(n);
        for (std::size_t m = 0; m < channel.n_ru(); ++m) {
          for (std::size_t a = 0; a < n_r; ++a) rx[m].at(n, l, a) += g[m * n_r + a] * x[n];
        }
      }
    }
  };
  for (std::size_t k = 0; k < user_tx.size(); ++k) {
    add(user_tx[k], [&](std::size_t n) { return channel.user(k, n); });
  }
  for (std::size_t k = 0; k < interferer_tx.size(); ++k) {
    add(interferer_tx[k], [&](std::size_t n) { return channel.interferer(k, n); });
  }

  if (noise.sigma_z_sq > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(noise.sigma_z_sq / 2.0));
    for (auto& grid : rx) {
      for (auto& y : grid.data()) {
        const double re = normal(rng);
        const double im = normal(rng);
        y += ComplexSample{re, im};
      }
    }
  }
  return rx;
}

}  // namespace fhc
