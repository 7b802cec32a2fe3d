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

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "fhc/error.hpp"
#include "fhc/ldpc.hpp"
#include "fhc/phy_chain.hpp"

using namespace fhc;

namespace {

LdpcCode toy_code() {
  // 8 info bits, 8 parity bits in a staircase.
  std::vector<std::vector<std::uint32_t>> rows{
      {0, 1, 8},      {2, 3, 8, 9},   {4, 5, 9, 10},  {6, 7, 10, 11},
      {0, 2, 11, 12}, {1, 4, 12, 13}, {3, 6, 13, 14}, {5, 7, 14, 15}};
  return LdpcCode(16, 8, rows);
}

std::vector<std::uint8_t> random_bits(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::uint8_t> b(n);
  for (auto& v : b) v = std::uint8_t(rng() & 1);
  return b;
}

// Flooding sum-product decoder written directly from the tanh rule, used as
// an independent reference for the layered min-sum decoder.
std::vector<std::uint8_t> sum_product(const LdpcCode& code, const std::vector<double>& llr,
                                      int iterations) {
  const std::size_t n = code.n();
  const std::size_t m = code.m();
  std::vector<double> c2v(code.n_edges(), 0.0);
  std::vector<double> v2c(code.n_edges());
  std::vector<double> total(llr);
  std::vector<std::uint8_t> hard(n);
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t e = code.row_start(r); e < code.row_start(r + 1); ++e) {
        v2c[e] = total[code.edge_var(e)] - c2v[e];
      }
    }
    std::fill(total.begin(), total.end(), 0.0);
    for (std::size_t v = 0; v < n; ++v) total[v] = llr[v];
    for (std::size_t r = 0; r < m; ++r) {
      const std::size_t b = code.row_start(r), end = code.row_start(r + 1);
      for (std::size_t e = b; e < end; ++e) {
        double prod = 1.0;
        for (std::size_t f = b; f < end; ++f) {
          if (f != e) prod *= std::tanh(std::clamp(v2c[f], -40.0, 40.0) / 2.0);
        }
        prod = std::clamp(prod, -1.0 + 1e-15, 1.0 - 1e-15);
        c2v[e] = 2.0 * std::atanh(prod);
        total[code.edge_var(e)] += c2v[e];
      }
    }
    for (std::size_t v = 0; v < n; ++v) hard[v] = total[v] < 0.0;
    if (code.satisfies_parity(hard)) break;
  }
  return hard;
}

}  // namespace

TEST_CASE("toy code is systematic and satisfies parity") {
  const auto code = toy_code();
  CHECK(code.rate() == 0.5);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    const auto info = random_bits(8, rng);
    const auto cw = code.encode(info);
    REQUIRE(cw.size() == 16);
    CHECK(std::equal(info.begin(), info.end(), cw.begin()));
    CHECK(code.satisfies_parity(cw));
    auto bad = cw;
    bad[3] ^= 1;
    CHECK_FALSE(code.satisfies_parity(bad));
  }
}

TEST_CASE("code construction rejects invalid matrices") {
  CHECK_THROWS_AS(LdpcCode(4, 2, {{0, 2}}), ConfigError);
  CHECK_THROWS_AS(LdpcCode(4, 2, {{0, 3}, {1, 3}}), ConfigError);  // upper triangular
  CHECK_THROWS_AS(LdpcCode(4, 2, {{0, 0, 2}, {1, 2, 3}}), ConfigError);
  CHECK_THROWS_AS(LdpcCode(4, 2, {{0, 7}, {1, 3}}), ConfigError);
}

TEST_CASE("alist round trip") {
  const auto code = toy_code();
  std::stringstream ss;
  code.write_alist(ss);
  const auto back = LdpcCode::from_alist(ss);
  CHECK(back.n() == 16);
  CHECK(back.k() == 8);
  CHECK(back.n_edges() == code.n_edges());
  std::mt19937_64 rng(2);
  const auto info = random_bits(8, rng);
  CHECK(back.encode(info) == code.encode(info));
  std::istringstream broken("16 8\n3 4\n");
  CHECK_THROWS_AS(LdpcCode::from_alist(broken), ConfigError);
  CHECK_THROWS_AS(LdpcCode::load("/nonexistent.alist"), ConfigError);
}

TEST_CASE("shipped codes load, have no 4-cycles and encode validly") {
  std::mt19937_64 rng(3);
  for (auto c : {MotherCode::Rate1_8, MotherCode::Rate1_2, MotherCode::Rate5_8,
                 MotherCode::Rate2_3}) {
    const auto& code = mother_code(c);
    CAPTURE(code_file_name(c));
    CHECK(code.n() <= 8192);
    CHECK(code.rate() == doctest::Approx(nominal_rate(c)).epsilon(0.01));
    std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
    bool four_cycle = false;
    for (std::size_t r = 0; r < code.m() && !four_cycle; ++r) {
      for (std::size_t a = code.row_start(r); a < code.row_start(r + 1); ++a) {
        for (std::size_t b = a + 1; b < code.row_start(r + 1); ++b) {
          const std::uint32_t va = code.edge_var(a), vb = code.edge_var(b);
          if (!pairs.insert({std::min(va, vb), std::max(va, vb)}).second) four_cycle = true;
        }
      }
    }
    CHECK_FALSE(four_cycle);
    const auto cw = code.encode(random_bits(code.k(), rng));
    CHECK(code.satisfies_parity(cw));

    std::vector<float> llr(cw.size());
    for (std::size_t i = 0; i < cw.size(); ++i) llr[i] = cw[i] ? -8.0f : 8.0f;
    const auto res = ldpc_decode(code, llr);
    CHECK(res.parity_ok);
    CHECK(res.bits == cw);
    CHECK(res.iterations <= 1);
  }
}

TEST_CASE("decoder corrects a few flipped bits") {
  const auto& code = mother_code(MotherCode::Rate1_2);
  std::mt19937_64 rng(4);
  const auto cw = code.encode(random_bits(code.k(), rng));
  std::vector<float> llr(cw.size());
  for (std::size_t i = 0; i < cw.size(); ++i) llr[i] = cw[i] ? -2.0f : 2.0f;
  for (int i = 0; i < 40; ++i) llr[rng() % llr.size()] *= -1.0f;
  const auto res = ldpc_decode(code, llr);
  CHECK(res.parity_ok);
  CHECK(res.bits == cw);
  CHECK_THROWS_AS(ldpc_decode(code, std::span(llr).first(10)), ConfigError);
}

TEST_CASE("QC construction avoids 4-cycles and is reproducible") {
  const QcCodeSpec spec{4, 4, 16, {3, 3, 2, 2}, 9};
  const auto a = make_qc_staircase_code(spec);
  const auto b = make_qc_staircase_code(spec);
  CHECK(a.n() == 128);
  CHECK(a.k() == 64);
  std::stringstream sa, sb;
  a.write_alist(sa);
  b.write_alist(sb);
  CHECK(sa.str() == sb.str());
  CHECK_THROWS_AS(make_qc_staircase_code({4, 4, 16, {9, 3, 2, 2}, 9}), ConfigError);
}

TEST_CASE("min-sum BER tracks a sum-product reference within 0.2 dB at 1e-3") {
  // Code used by the default configuration (16QAM, rate 434/1024).
  const auto& code = mother_code(select_mother_code(434.0 / 1024.0));
  const double rate = code.rate();
  constexpr int kFrames = 60;
  std::vector<double> ebn0, ber_ms, ber_sp;
  for (double snr = 0.4; snr <= 4.0 + 1e-9; snr += 0.1) {
    std::mt19937_64 rng(std::uint64_t(1000 + std::lround(snr * 10)));
    const double sigma = std::sqrt(1.0 / (2.0 * rate * std::pow(10.0, snr / 10.0)));
    std::normal_distribution<double> noise(0.0, sigma);
    std::size_t err_ms = 0, err_sp = 0;
    for (int f = 0; f < kFrames; ++f) {
      const auto cw = code.encode(random_bits(code.k(), rng));
      std::vector<double> llr(cw.size());
      std::vector<float> llr_f(cw.size());
      for (std::size_t i = 0; i < cw.size(); ++i) {
        const double y = (cw[i] ? -1.0 : 1.0) + noise(rng);
        llr[i] = 2.0 * y / (sigma * sigma);
        llr_f[i] = float(llr[i]);
      }
      const auto ms = ldpc_decode(code, llr_f).bits;
      const auto sp = sum_product(code, llr, 50);
      for (std::size_t i = 0; i < code.k(); ++i) {
        err_ms += ms[i] != cw[i];
        err_sp += sp[i] != cw[i];
      }
    }
    const double bits = double(kFrames) * double(code.k());
    ebn0.push_back(snr);
    ber_ms.push_back(double(err_ms) / bits);
    ber_sp.push_back(double(err_sp) / bits);
    if (ber_ms.back() < 1e-4 && ber_sp.back() < 1e-4) break;
  }
  auto crossing = [&](const std::vector<double>& ber) {
    for (std::size_t i = 1; i < ber.size(); ++i) {
      if (ber[i - 1] >= 1e-3 && ber[i] < 1e-3) {
        const double l0 = std::log10(std::max(ber[i - 1], 1e-7));
        const double l1 = std::log10(std::max(ber[i], 1e-7));
        return ebn0[i - 1] + (-3.0 - l0) / (l1 - l0) * (ebn0[i] - ebn0[i - 1]);
      }
    }
    return std::nan("");
  };
  const double x_ms = crossing(ber_ms);
  const double x_sp = crossing(ber_sp);
  MESSAGE("Eb/N0 at BER 1e-3: min-sum " << x_ms << " dB, sum-product " << x_sp << " dB");
  REQUIRE(std::isfinite(x_ms));
  REQUIRE(std::isfinite(x_sp));
  CHECK(std::abs(x_ms - x_sp) <= 0.2);
}
