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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "fhc/channel.hpp"
#include "fhc/error.hpp"

using namespace fhc;

namespace {

ResourceGrid random_qpsk(std::size_t n_sc, std::size_t n_sym, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ResourceGrid g(n_sc, n_sym, 1);
  const double a = 1.0 / std::sqrt(2.0);
  for (auto& v : g.data()) v = {(rng() & 1) ? a : -a, (rng() & 1) ? a : -a};
  return g;
}

}  // namespace

TEST_CASE("pathloss at the reference distance") {
  PathlossParams p;
  CHECK(pathloss_db(1000.0, p) == doctest::Approx(128.1));
  CHECK(pathloss_db(100.0, p) == doctest::Approx(128.1 - 37.6));
  CHECK(pathloss_db(1.0, p) == doctest::Approx(pathloss_db(10.0, p)));
  CHECK_THROWS_AS(pathloss_db(0.0, p), ConfigError);

  p.shadow_sigma_db = 0.0;
  const std::vector<Position> ru{{0.0, 0.0}};
  const std::vector<Position> ue{{1000.0, 0.0}};
  const auto beta = pathloss_beta(ru, ue, p, 1);
  CHECK(beta(0, 0) == doctest::Approx(std::pow(10.0, -12.81)));
  CHECK_THROWS_AS(pathloss_beta(ru, ru, p, 1), ConfigError);
}

TEST_CASE("shadowing statistics") {
  PathlossParams p;
  std::vector<Position> rus(200), ues(50);
  for (std::size_t i = 0; i < rus.size(); ++i) rus[i] = {1e6 + double(i), 0.0};
  const auto beta = pathloss_beta(rus, ues, p, 9);
  double sum = 0.0, sq = 0.0;
  std::size_t n = 0;
  for (std::size_t m = 0; m < rus.size(); ++m) {
    for (std::size_t k = 0; k < ues.size(); ++k) {
      const double d = std::hypot(rus[m].x - ues[k].x, rus[m].y - ues[k].y);
      const double x = -10.0 * std::log10(beta(m, k)) - pathloss_db(d, p);
      sum += x;
      sq += x * x;
      ++n;
    }
  }
  const double mean = sum / double(n);
  CHECK(std::abs(mean) < 0.3);
  CHECK(std::sqrt(sq / double(n) - mean * mean) == doctest::Approx(8.0).epsilon(0.03));
}

TEST_CASE("TDL profile loading rescales the delay spread") {
  std::istringstream csv("delay_ns,power_db\n# comment\n0,0\n100,-3\n300,-10\n");
  const auto prof = load_tdl_profile(csv, 30e-9);
  REQUIRE(prof.taps.size() == 3);
  double total = 0.0;
  for (auto t : prof.taps) total += t.power;
  CHECK(total == doctest::Approx(1.0));
  CHECK(rms_delay_spread(prof.taps) == doctest::Approx(30e-9));
  std::istringstream bad("0,0\nfoo\n");
  CHECK_THROWS_AS(load_tdl_profile(bad, 30e-9), ConfigError);
  std::istringstream empty("delay_ns,power_db\n");
  CHECK_THROWS_AS(load_tdl_profile(empty, 30e-9), ConfigError);
  CHECK_THROWS_AS(load_tdl_profile(std::filesystem::path("/nonexistent.csv"), 30e-9), ConfigError);
  const auto shipped =
      load_tdl_profile(std::filesystem::path(FHC_SOURCE_DIR) / "profiles/tdl-b.csv", 30e-9);
  CHECK(shipped.taps.size() == 23);
  CHECK(rms_delay_spread(shipped.taps) == doctest::Approx(30e-9));
}

TEST_CASE("flat profile gives a constant magnitude across subcarriers") {
  TopologyConfig t{2, 2, 1, 1, 0};
  const LargeScale ls(2, 1, {1.0, 0.5});
  const auto ch = realize_channel(flat_profile(), t, ls, 120, 15e3, 4);
  for (std::size_t d = 0; d < ch.rx_dims(); ++d) {
    const double a = std::abs(ch.user(0, 0)[d]);
    for (std::size_t n = 1; n < 120; ++n) CHECK(std::abs(ch.user(0, n)[d]) == doctest::Approx(a));
  }
}

TEST_CASE("channel power follows beta and is seed-deterministic") {
  TopologyConfig t{1, 1, 1, 1, 0};
  const LargeScale ls(1, 1, {0.25});
  const auto prof =
      load_tdl_profile(std::filesystem::path(FHC_SOURCE_DIR) / "profiles/tdl-b.csv", 30e-9);
  double p = 0.0;
  const int draws = 2000;
  for (int s = 0; s < draws; ++s) {
    const auto ch = realize_channel(prof, t, ls, 12, 15e3, std::uint64_t(s));
    p += std::norm(ch.user(0, 0)[0]);
  }
  CHECK(p / draws == doctest::Approx(0.25).epsilon(0.08));
  CHECK(realize_channel(prof, t, ls, 12, 15e3, 3) == realize_channel(prof, t, ls, 12, 15e3, 3));
  CHECK_FALSE(realize_channel(prof, t, ls, 12, 15e3, 3) == realize_channel(prof, t, ls, 12, 15e3, 4));
  CHECK_THROWS_AS(realize_channel(prof, TopologyConfig{2, 1, 1, 1, 0}, ls, 12, 15e3, 3), ConfigError);
}

TEST_CASE("identity channel without noise passes the signal unchanged") {
  ChannelRealization ch(1, 1, 1, 0, 24);
  for (std::size_t n = 0; n < 24; ++n) ch.user(0, n)[0] = 1.0;
  const std::vector<ResourceGrid> tx{random_qpsk(24, 3, 1)};
  const auto rx = apply_channel(tx, {}, ch, NoiseConfig{0.0}, 5);
  REQUIRE(rx.size() == 1);
  CHECK(rx[0].data().size() == tx[0].data().size());
  for (std::size_t i = 0; i < tx[0].data().size(); ++i) CHECK(rx[0].data()[i] == tx[0].data()[i]);
}

TEST_CASE("noise power") {
  ChannelRealization ch(1, 1, 1, 0, 1200);
  const std::vector<ResourceGrid> tx{ResourceGrid(1200, 14, 1)};
  const auto rx = apply_channel(tx, {}, ch, NoiseConfig{1.0}, 8);
  double p = 0.0;
  for (auto v : rx[0].data()) p += std::norm(v);
  p /= double(rx[0].data().size());
  CHECK(rx[0].data().size() >= 10'000);
  CHECK(p == doctest::Approx(1.0).epsilon(0.02));
  CHECK(NoiseConfig::from_tx_snr_db(20.0).sigma_z_sq == doctest::Approx(0.01));
  CHECK(NoiseConfig::from_temperature(290.0, 15e3).sigma_z_sq == doctest::Approx(6.0058e-17).epsilon(1e-3));
  CHECK_THROWS_AS(apply_channel(tx, {}, ch, NoiseConfig{-1.0}, 8), ConfigError);
}

TEST_CASE("orthogonal users land on separate antennas") {
  ChannelRealization ch(1, 2, 2, 0, 12);
  for (std::size_t n = 0; n < 12; ++n) {
    ch.user(0, n)[0] = 1.0;
    ch.user(1, n)[1] = 1.0;
  }
  const std::vector<ResourceGrid> tx{random_qpsk(12, 2, 1), random_qpsk(12, 2, 2)};
  const auto rx = apply_channel(tx, {}, ch, NoiseConfig{0.0}, 1);
  for (std::size_t n = 0; n < 12; ++n) {
    for (std::size_t l = 0; l < 2; ++l) {
      CHECK(rx[0].at(n, l, 0) == tx[0].at(n, l, 0));
      CHECK(rx[0].at(n, l, 1) == tx[1].at(n, l, 0));
    }
  }
}

TEST_CASE("interferers add to the received signal") {
  ChannelRealization ch(2, 1, 1, 1, 12);
  for (std::size_t n = 0; n < 12; ++n) {
    ch.user(0, n)[0] = 1.0;
    ch.interferer(0, n)[1] = ComplexSample(0.0, 2.0);
  }
  const std::vector<ResourceGrid> tx{random_qpsk(12, 1, 1)};
  const std::vector<ResourceGrid> itx{random_qpsk(12, 1, 2)};
  const auto rx = apply_channel(tx, itx, ch, NoiseConfig{0.0}, 1);
  REQUIRE(rx.size() == 2);
  CHECK(rx[1].at(3, 0, 0) == ComplexSample(0.0, 2.0) * itx[0].at(3, 0, 0));
  CHECK(rx[0].at(3, 0, 0) == tx[0].at(3, 0, 0));
  CHECK_THROWS_AS(apply_channel(tx, {}, ch, NoiseConfig{0.0}, 1), ConfigError);
}
