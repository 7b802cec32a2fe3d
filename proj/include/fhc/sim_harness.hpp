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
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fhc/channel.hpp"
#include "fhc/compression.hpp"
#include "fhc/iq_core.hpp"
#include "fhc/phy_chain.hpp"
#include "fhc/receiver.hpp"

namespace fhc {

struct SimConfig {
  TopologyConfig topology;
  McsConfig mcs = table1_mcs(1);
  CompressionConfig codec;
  std::filesystem::path tdl_profile;  ///< empty: flat single-tap channel
  double delay_spread_s = 30e-9;
  double subcarrier_spacing_hz = 15e3;
  std::vector<double> snr_points;  ///< TX-SNR in dB, strictly increasing
  std::size_t n_tbs = 1000;
  std::size_t max_errors = 200;  ///< early stop per point
  std::uint64_t master_seed = 1;
  PathlossParams pathloss;
  double region_radius_m = 200.0;  ///< RUs and users uniform in this disc
  double interferer_ring_m = 400.0;  ///< interferers uniform in [radius, ring]
  double ru_backoff_db = -18.0;  ///< RU input power relative to full scale
  int ldpc_max_iterations = 25;
  std::filesystem::path output;

  void validate() const;

  /// Flat JSON object. Relative paths resolve against `base_dir`; an MCS may
  /// be given as "mcs_index" (1..4) with per-field overrides.
  static SimConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  static SimConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

/// Defaults used by the acceptance runs: 8 RUs, 2 UEs, TDL-B at 30 ns.
SimConfig default_sim_config();

/// Splittable 64-bit seed derivation (splitmix64 finalizer chained over the
/// inputs).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t snr_index, std::size_t trial_index);

struct Geometry {
  std::vector<Position> rus;
  std::vector<Position> users;        ///< coordinated users, then interferers
  LargeScale large_scale;
};

/// Uniform-in-disc placement drawn from the master seed, once per sweep.
Geometry draw_geometry(const SimConfig& cfg);

struct TrialOptions {
  bool bypass_compression = false;  ///< drop the fronthaul stage entirely
};

struct TrialResult {
  bool pass = false;
  int ldpc_iterations = 0;
  double evm_percent = 0.0;
  LlrVector llrs;  ///< filled only when requested
};

/// A configured pipeline: plan, geometry and per-point constants resolved
/// once; trials are then pure functions of (snr index, trial index).
class Simulation {
 public:
  explicit Simulation(SimConfig cfg);

  const SimConfig& config() const { return cfg_; }
  const TbPlan& plan() const { return plan_; }
  const Geometry& geometry() const { return geometry_; }
  const TdlProfile& profile() const { return profile_; }
  /// Codec configuration after resolving the uniform step.
  const CompressionConfig& codec() const { return codec_; }
  double ru_gain(std::size_t snr_index, std::size_t ru) const;

  TrialResult run_trial(std::size_t snr_index, std::size_t trial_index,
                        const TrialOptions& opt = {}, bool keep_llrs = false) const;

 private:
  SimConfig cfg_;
  TbPlan plan_;
  Geometry geometry_;
  TdlProfile profile_;
  CompressionConfig codec_;
  std::vector<std::vector<double>> ru_gain_;  // [snr][ru]
};

/// Convenience wrapper that builds a Simulation per call.
bool run_trial(const SimConfig& cfg, std::size_t snr_index, std::size_t trial_index);

struct SimPoint {
  double tx_snr_db = 0.0;
  std::size_t tb_errors = 0;
  std::size_t tb_total = 0;
  double bler() const { return tb_total ? double(tb_errors) / double(tb_total) : 0.0; }
  double ci_low = 0.0;
  double ci_high = 1.0;
};

struct Interval {
  double low;
  double high;
};
/// Wilson score interval at 95 % confidence.
Interval wilson_interval(std::size_t errors, std::size_t total, double z = 1.959963984540054);

struct SweepOptions {
  std::size_t threads = 0;  ///< 0: FHC_THREADS, else hardware concurrency
  std::ostream* csv = nullptr;  ///< rows are written and flushed as points finish
  std::function<void(const SimPoint&)> progress;
  /// Skip the remaining points once one finishes with a BLER below this.
  std::optional<double> stop_below_bler;
};

std::size_t default_thread_count();

std::vector<SimPoint> run_sweep(const Simulation& sim, const SweepOptions& opt = {});
std::vector<SimPoint> run_sweep(const SimConfig& cfg, const SweepOptions& opt = {});

inline constexpr const char* kCsvHeader =
    "method,m_bits,modulation,code_rate,tx_snr_db,tb_total,tb_errors,bler,ci_low,ci_high";
std::string csv_row(const SimConfig& cfg, const SimPoint& p);

/// Run metadata written next to the CSV: resolved plan, placement, seeds.
nlohmann::json sweep_metadata(const Simulation& sim);

struct Crossing {
  std::optional<double> snr_db;
  std::string reason;  ///< set when snr_db is empty
};

/// First downward crossing of `target_bler`, interpolated linearly in dB
/// against log10 BLER. A zero-error point is floored at half an error.
Crossing snr_at_target(std::span<const SimPoint> curve, double target_bler = 0.1);

/// Crossing(curve) - crossing(baseline); empty with a reason when either
/// curve never reaches the target.
Crossing snr_difference(std::span<const SimPoint> curve, std::span<const SimPoint> baseline,
                        double target_bler = 0.1);

struct CurveSummary {
  std::string label;
  std::vector<SimPoint> points;
  Crossing snr_at_target;
  Crossing snr_difference;
};

}  // namespace fhc
