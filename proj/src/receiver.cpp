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

#include "fhc/receiver.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "fhc/error.hpp"

namespace fhc {

CombinerWeights::CombinerWeights(std::size_t n_served, std::size_t n_subcarriers, std::size_t dims)
    : n_served_(n_served), n_sc_(n_subcarriers), dims_(dims),
      data_(n_served * n_subcarriers * dims) {}

std::span<ComplexSample> CombinerWeights::w(std::size_t k, std::size_t n) {
  return std::span<ComplexSample>(data_).subspan((k * n_sc_ + n) * dims_, dims_);
}
std::span<const ComplexSample> CombinerWeights::w(std::size_t k, std::size_t n) const {
  return std::span<const ComplexSample>(data_).subspan((k * n_sc_ + n) * dims_, dims_);
}

CombinerWeights mmse_weights(const ChannelRealization& channel, const NoiseConfig& noise,
                             std::size_t n_served) {
  if (n_served == 0 || n_served > channel.n_users()) {
    throw ConfigError("mmse_weights: served users must be in 1..k_coor");
  }
  if (noise.sigma_z_sq < 0.0) throw ConfigError("mmse_weights: negative noise power");
  const std::size_t d = channel.rx_dims();
  const std::size_t n_tx = channel.n_users() + channel.n_interferers();
  if (noise.sigma_z_sq == 0.0 && n_tx < d) {
    throw RuntimeError("mmse_weights: covariance is singular without noise; regularization required");
  }
  CombinerWeights out(n_served, channel.n_subcarriers(), d);
  using Mat = Eigen::MatrixXcd;
  using Vec = Eigen::VectorXcd;
  // All transmitters as columns, served users first.
  Mat h(d, n_tx);
  // With fewer transmitters than receive dimensions the push-through form
  // H (H^H H + s2 I)^-1 is solved instead; it is the same combiner but stays
  // well conditioned when s2 is tiny against the channel gains.
  const bool small_side = n_tx <= d;
  Mat r = small_side ? Mat(n_tx, n_tx) : Mat(d, d);
  for (std::size_t n = 0; n < channel.n_subcarriers(); ++n) {
    for (std::size_t k = 0; k < channel.n_users(); ++k) {
      h.col(Eigen::Index(k)) = Eigen::Map<const Vec>(channel.user(k, n).data(), Eigen::Index(d));
    }
    for (std::size_t k = 0; k < channel.n_interferers(); ++k) {
      h.col(Eigen::Index(channel.n_users() + k)) =
          Eigen::Map<const Vec>(channel.interferer(k, n).data(), Eigen::Index(d));
    }
    Mat w;
    if (small_side) {
      r.noalias() = h.adjoint() * h;
      r.diagonal().array() += noise.sigma_z_sq;
      Eigen::LLT<Mat> llt(r);
      if (llt.info() != Eigen::Success) {
        throw RuntimeError("mmse_weights: covariance is not positive definite");
      }
      w = h * llt.solve(Mat::Identity(Eigen::Index(n_tx), Eigen::Index(n_served)));
    } else {
      r.setZero();
      r.selfadjointView<Eigen::Lower>().rankUpdate(h);
      r.diagonal().array() += noise.sigma_z_sq;
      Eigen::LLT<Mat, Eigen::Lower> llt(r);
      if (llt.info() != Eigen::Success) {
        throw RuntimeError("mmse_weights: covariance is not positive definite");
      }
      w = llt.solve(h.leftCols(Eigen::Index(n_served)));
    }
    for (std::size_t k = 0; k < n_served; ++k) {
      auto dst = out.w(k, n);
      for (std::size_t i = 0; i < d; ++i) dst[i] = w(Eigen::Index(i), Eigen::Index(k));
    }
  }
  return out;
}

FronthaulDistortion FronthaulDistortion::from_bussgang(std::span<const BussgangStats> per_ru) {
  FronthaulDistortion fd;
  fd.per_ru.reserve(per_ru.size());
  for (const auto& s : per_ru) {
    fd.per_ru.push_back(s.distortion_power + (s.alpha - 1.0) * (s.alpha - 1.0) * s.input_power);
  }
  return fd;
}

void EqualizedStream::normalized(std::vector<ComplexSample>& symbols,
                                 std::vector<double>& noise_var) const {
  symbols.resize(x_hat.size());
  noise_var.resize(x_hat.size());
  for (std::size_t i = 0; i < x_hat.size(); ++i) {
    const double gain = eff_gain[i];
    symbols[i] = x_hat[i] / gain;
    noise_var[i] = eff_noise_var[i] / (gain * gain);
  }
}

EqualizedStream equalize(const CombinerWeights& weights, std::size_t user,
                         std::span<const ResourceGrid> received, const ChannelRealization& channel,
                         const NoiseConfig& noise, const FronthaulDistortion& distortion) {
  if (user >= weights.n_served()) throw ConfigError("equalize: user is not served");
  if (received.size() != channel.n_ru()) throw ConfigError("equalize: one grid per RU expected");
  if (!distortion.per_ru.empty() && distortion.per_ru.size() != channel.n_ru()) {
    throw ConfigError("equalize: distortion must be given per RU");
  }
  const std::size_t n_sc = channel.n_subcarriers();
  const std::size_t n_r = channel.n_r();
  const std::size_t n_sym = received.front().n_symbols();
  for (const auto& g : received) {
    if (g.n_subcarriers() != n_sc || g.n_antennas() != n_r || g.n_symbols() != n_sym) {
      throw ConfigError("equalize: received grid shape mismatch");
    }
  }

  EqualizedStream out;
  out.n_subcarriers = n_sc;
  out.n_symbols = n_sym;
  out.x_hat.resize(n_sc * n_sym);
  out.eff_gain.resize(n_sc * n_sym);
  out.eff_noise_var.resize(n_sc * n_sym);

  for (std::size_t n = 0; n < n_sc; ++n) {
    const auto w = weights.w(user, n);
    const auto g = channel.user(user, n);
    ComplexSample wg{};
    for (std::size_t i = 0; i < w.size(); ++i) wg += std::conj(w[i]) * g[i];
    const double gain = wg.real();

    // Residual interference, thermal noise and fronthaul distortion after
    // combining; the self term uses |w^H g|^2 - gain^2 so a complex w^H g
    // counts its imaginary part as noise.
    double var = std::norm(wg) - gain * gain;
    auto add_interference = [&](std::span<const ComplexSample> h) {
      ComplexSample s{};
      for (std::size_t i = 0; i < w.size(); ++i) s += std::conj(w[i]) * h[i];
      var += std::norm(s);
    };
    for (std::size_t k = 0; k < channel.n_users(); ++k) {
      if (k != user) add_interference(channel.user(k, n));
    }
    for (std::size_t k = 0; k < channel.n_interferers(); ++k) {
      add_interference(channel.interferer(k, n));
    }
    for (std::size_t m = 0; m < channel.n_ru(); ++m) {
      double wn = 0.0;
      for (std::size_t a = 0; a < n_r; ++a) wn += std::norm(w[m * n_r + a]);
      var += noise.sigma_z_sq * wn;
      if (!distortion.per_ru.empty()) var += distortion.per_ru[m] * wn;
    }

    for (std::size_t l = 0; l < n_sym; ++l) {
      ComplexSample x{};
      for (std::size_t m = 0; m < channel.n_ru(); ++m) {
        for (std::size_t a = 0; a < n_r; ++a) {
          x += std::conj(w[m * n_r + a]) * received[m].at(n, l, a);
        }
      }
      const std::size_t idx = l * n_sc + n;
      out.x_hat[idx] = x;
      out.eff_gain[idx] = gain;
      out.eff_noise_var[idx] = var;
    }
  }
  return out;
}

double evm_percent(const EqualizedStream& stream, std::span<const ComplexSample> reference) {
  if (reference.size() != stream.x_hat.size()) {
    throw ConfigError("evm: reference length does not match the stream");
  }
  double err = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    err += std::norm(stream.x_hat[i] / stream.eff_gain[i] - reference[i]);
    ref += std::norm(reference[i]);
  }
  if (!(ref > 0.0)) throw ConfigError("evm: reference has zero power");
  return 100.0 * std::sqrt(err / ref);
}

}  // namespace fhc
