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

#include "fhc/sim_harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "fhc/error.hpp"
#include "fhc/fronthaul_wire.hpp"

namespace fhc {

namespace {

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

std::filesystem::path default_profile_path() {
  return std::filesystem::path(FHC_SOURCE_DIR) / "profiles" / "tdl-b.csv";
}

Position uniform_in_annulus(std::mt19937_64& rng, double r_min, double r_max) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = std::sqrt(r_min * r_min + u(rng) * (r_max * r_max - r_min * r_min));
  const double phi = 2.0 * std::numbers::pi * u(rng);
  return {r * std::cos(phi), r * std::sin(phi)};
}

std::vector<std::uint8_t> random_bits(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::uint8_t> bits(n);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 64 == 0) word = rng();
    bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
  }
  return bits;
}

ResourceGrid grid_from_symbols(std::span<const ComplexSample> syms, std::size_t n_sc,
                               std::size_t n_sym) {
  ResourceGrid g(n_sc, n_sym, 1);
  for (std::size_t l = 0; l < n_sym; ++l) {
    auto col = g.column(l, 0);
    std::copy_n(syms.begin() + std::ptrdiff_t(l * n_sc), n_sc, col.begin());
  }
  return g;
}

// Scales, compresses, packs, unpacks, decompresses and unscales every
// (antenna, symbol) column of one RU grid in place. Returns the Bussgang fit
// of the reconstruction against the input.
BussgangStats fronthaul_roundtrip(ResourceGrid& grid, double gain, const CompressionConfig& codec,
                                  std::vector<std::uint8_t>& wire) {
  const std::vector<ComplexSample> original(grid.data().begin(), grid.data().end());
  for (auto& y : grid.data()) y *= gain;
  for (std::size_t a = 0; a < grid.n_antennas(); ++a) {
    for (std::size_t l = 0; l < grid.n_symbols(); ++l) {
      const auto blocks = grid_to_prb_blocks(grid, a, l);
      const auto compressed = compress_blocks(blocks, codec);
      wire.clear();
      for (std::size_t b = 0; b < compressed.size(); ++b) {
        pack_into(compressed[b], static_cast<std::uint16_t>(b), wire);
      }
      std::vector<CompressedBlock> received;
      received.reserve(compressed.size());
      const std::size_t stride = section_bytes(codec.m_bits);
      for (std::size_t b = 0; b < compressed.size(); ++b) {
        auto sec = unpack_section(std::span(wire).subspan(b * stride, stride), codec);
        if (sec.prb_index != b) throw WireError("fronthaul: PRB sections out of order");
        received.push_back(sec.block);
      }
      prb_blocks_to_grid(decompress_blocks(received), a, l, grid);
    }
  }
  for (auto& y : grid.data()) y /= gain;
  return bussgang_estimate(original, grid.data(), 1);
}

}  // namespace

void SimConfig::validate() const {
  topology.validate();
  mcs.validate();
  codec.validate();
  if (n_tbs < 1) throw ConfigError("n_tbs must be at least 1");
  if (max_errors < 1) throw ConfigError("max_errors must be at least 1");
  if (snr_points.empty()) throw ConfigError("snr_points must not be empty");
  for (std::size_t i = 1; i < snr_points.size(); ++i) {
    if (!(snr_points[i] > snr_points[i - 1])) {
      throw ConfigError("snr_points must be strictly increasing");
    }
  }
  if (!(region_radius_m > 0.0) || !(interferer_ring_m >= region_radius_m)) {
    throw ConfigError("region radius must be positive and the interferer ring outside it");
  }
  if (!(subcarrier_spacing_hz > 0.0) || delay_spread_s < 0.0) {
    throw ConfigError("subcarrier spacing must be positive and delay spread non-negative");
  }
  if (ldpc_max_iterations < 1) throw ConfigError("ldpc_max_iterations must be at least 1");
  if (pathloss.shadow_sigma_db < 0.0 || !(pathloss.d0_m > 0.0)) {
    throw ConfigError("pathloss parameters out of range");
  }
}

SimConfig SimConfig::from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  static const std::set<std::string> known = {
      "method", "m_bits", "lambda", "mu", "delta", "mcs_index", "modulation", "code_rate",
      "tbs", "n_prb", "n_data_symbols", "m_coor", "n_r", "k_serv", "k_coor", "k_int",
      "tdl_profile", "delay_spread_ns", "subcarrier_spacing_hz", "snr_points", "snr_start",
      "snr_stop", "snr_step", "n_tbs", "max_errors", "master_seed", "pl0_db", "d0_m",
      "pathloss_exponent", "shadow_sigma_db", "min_distance_m", "region_radius_m",
      "interferer_ring_m", "ru_backoff_db", "ldpc_max_iterations", "output"};
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError("config: unknown key '" + key + "'");
  }

  try {
    SimConfig c = default_sim_config();
    if (j.contains("method")) c.codec.method = parse_method(j["method"].get<std::string>());
    c.codec.m_bits = j.value("m_bits", c.codec.m_bits);
    c.codec.lambda = j.value("lambda", c.codec.lambda);
    c.codec.mu = j.value("mu", c.codec.mu);
    if (j.contains("delta") && !j["delta"].is_null()) c.codec.delta = j["delta"].get<double>();

    if (j.contains("mcs_index")) c.mcs = table1_mcs(j["mcs_index"].get<int>());
    if (j.contains("modulation")) c.mcs.modulation = parse_modulation(j["modulation"].get<std::string>());
    c.mcs.code_rate = j.value("code_rate", c.mcs.code_rate);
    c.mcs.tbs = j.value("tbs", c.mcs.tbs);
    c.mcs.n_prb = j.value("n_prb", c.mcs.n_prb);
    c.mcs.n_data_symbols = j.value("n_data_symbols", c.mcs.n_data_symbols);

    c.topology.m_coor = j.value("m_coor", c.topology.m_coor);
    c.topology.n_r = j.value("n_r", c.topology.n_r);
    c.topology.k_serv = j.value("k_serv", c.topology.k_serv);
    c.topology.k_coor = j.value("k_coor", c.topology.k_coor);
    c.topology.k_int = j.value("k_int", c.topology.k_int);

    if (j.contains("tdl_profile")) {
      const auto p = j["tdl_profile"].get<std::string>();
      c.tdl_profile = p.empty() ? std::filesystem::path{} : resolve(p, base_dir);
    }
    c.delay_spread_s = j.value("delay_spread_ns", c.delay_spread_s * 1e9) * 1e-9;
    c.subcarrier_spacing_hz = j.value("subcarrier_spacing_hz", c.subcarrier_spacing_hz);

    if (j.contains("snr_points")) {
      c.snr_points = j["snr_points"].get<std::vector<double>>();
    } else if (j.contains("snr_start") || j.contains("snr_stop")) {
      const double start = j.at("snr_start").get<double>();
      const double stop = j.at("snr_stop").get<double>();
      const double step = j.value("snr_step", 1.0);
      if (!(step > 0.0) || stop < start) throw ConfigError("config: bad SNR range");
      c.snr_points.clear();
      const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
      for (std::size_t i = 0; i < n; ++i) c.snr_points.push_back(start + double(i) * step);
    }
    c.n_tbs = j.value("n_tbs", c.n_tbs);
    c.max_errors = j.value("max_errors", c.max_errors);
    c.master_seed = j.value("master_seed", c.master_seed);

    c.pathloss.pl0_db = j.value("pl0_db", c.pathloss.pl0_db);
    c.pathloss.d0_m = j.value("d0_m", c.pathloss.d0_m);
    c.pathloss.exponent = j.value("pathloss_exponent", c.pathloss.exponent);
    c.pathloss.shadow_sigma_db = j.value("shadow_sigma_db", c.pathloss.shadow_sigma_db);
    c.pathloss.min_distance_m = j.value("min_distance_m", c.pathloss.min_distance_m);
    c.region_radius_m = j.value("region_radius_m", c.region_radius_m);
    c.interferer_ring_m = j.value("interferer_ring_m", c.interferer_ring_m);
    c.ru_backoff_db = j.value("ru_backoff_db", c.ru_backoff_db);
    c.ldpc_max_iterations = j.value("ldpc_max_iterations", c.ldpc_max_iterations);
    if (j.contains("output")) c.output = resolve(j["output"].get<std::string>(), base_dir);
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

SimConfig SimConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return from_json(j, path.parent_path());
}

nlohmann::json SimConfig::to_json() const {
  nlohmann::json j;
  j["method"] = std::string(to_string(codec.method));
  j["m_bits"] = codec.m_bits;
  j["lambda"] = codec.lambda;
  j["mu"] = codec.mu;
  j["delta"] = codec.delta ? nlohmann::json(*codec.delta) : nlohmann::json(nullptr);
  j["modulation"] = std::string(to_string(mcs.modulation));
  j["code_rate"] = mcs.code_rate;
  j["tbs"] = mcs.tbs;
  j["n_prb"] = mcs.n_prb;
  j["n_data_symbols"] = mcs.n_data_symbols;
  j["m_coor"] = topology.m_coor;
  j["n_r"] = topology.n_r;
  j["k_serv"] = topology.k_serv;
  j["k_coor"] = topology.k_coor;
  j["k_int"] = topology.k_int;
  j["tdl_profile"] = tdl_profile.string();
  j["delay_spread_ns"] = delay_spread_s * 1e9;
  j["subcarrier_spacing_hz"] = subcarrier_spacing_hz;
  j["snr_points"] = snr_points;
  j["n_tbs"] = n_tbs;
  j["max_errors"] = max_errors;
  j["master_seed"] = master_seed;
  j["pl0_db"] = pathloss.pl0_db;
  j["d0_m"] = pathloss.d0_m;
  j["pathloss_exponent"] = pathloss.exponent;
  j["shadow_sigma_db"] = pathloss.shadow_sigma_db;
  j["min_distance_m"] = pathloss.min_distance_m;
  j["region_radius_m"] = region_radius_m;
  j["interferer_ring_m"] = interferer_ring_m;
  j["ru_backoff_db"] = ru_backoff_db;
  j["ldpc_max_iterations"] = ldpc_max_iterations;
  j["output"] = output.string();
  return j;
}

SimConfig default_sim_config() {
  SimConfig c;
  c.tdl_profile = default_profile_path();
  c.snr_points = {100.0};
  return c;
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t snr_index, std::size_t trial_index) {
  return mix_seed(mix_seed(master_seed, snr_index), trial_index);
}

Geometry draw_geometry(const SimConfig& cfg) {
  const auto& t = cfg.topology;
  std::mt19937_64 rng(mix_seed(cfg.master_seed, 0x6e0ULL));
  Geometry g;
  for (std::size_t m = 0; m < t.m_coor; ++m) {
    g.rus.push_back(uniform_in_annulus(rng, 0.0, cfg.region_radius_m));
  }
  for (std::size_t k = 0; k < t.k_coor; ++k) {
    g.users.push_back(uniform_in_annulus(rng, 0.0, cfg.region_radius_m));
  }
  for (std::size_t k = 0; k < t.k_int; ++k) {
    g.users.push_back(uniform_in_annulus(rng, cfg.region_radius_m, cfg.interferer_ring_m));
  }
  g.large_scale = pathloss_beta(g.rus, g.users, cfg.pathloss, mix_seed(cfg.master_seed, 0x5adULL));
  return g;
}

Simulation::Simulation(SimConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  plan_ = plan_transport_block(cfg_.mcs);
  geometry_ = draw_geometry(cfg_);
  profile_ = cfg_.tdl_profile.empty() ? flat_profile()
                                      : load_tdl_profile(cfg_.tdl_profile, cfg_.delay_spread_s);
  codec_ = cfg_.codec;
  const double target_power = std::pow(10.0, cfg_.ru_backoff_db / 10.0);
  if (codec_.method == CompressionMethod::Uniform && !codec_.delta) {
    codec_.delta = optimize_delta(codec_.m_bits, target_power);
  }
  const std::size_t n_tx = cfg_.topology.k_coor + cfg_.topology.k_int;
  for (double snr : cfg_.snr_points) {
    const double sigma2 = NoiseConfig::from_tx_snr_db(snr).sigma_z_sq;
    // One front-end gain for the whole cluster, set so the strongest RU sits
    // at the backoff. Weaker RUs see a smaller signal at the quantizer.
    double p_max = 0.0;
    for (std::size_t m = 0; m < cfg_.topology.m_coor; ++m) {
      double p = sigma2;
      for (std::size_t k = 0; k < n_tx; ++k) p += geometry_.large_scale(m, k);
      p_max = std::max(p_max, p);
    }
    ru_gain_.push_back(std::vector<double>(cfg_.topology.m_coor, std::sqrt(target_power / p_max)));
  }
}

double Simulation::ru_gain(std::size_t snr_index, std::size_t ru) const {
  return ru_gain_.at(snr_index).at(ru);
}

TrialResult Simulation::run_trial(std::size_t snr_index, std::size_t trial_index,
                                  const TrialOptions& opt, bool keep_llrs) const {
  if (snr_index >= cfg_.snr_points.size()) throw ConfigError("run_trial: SNR index out of range");
  const auto& topo = cfg_.topology;
  const std::uint64_t seed = trial_seed(cfg_.master_seed, snr_index, trial_index);
  const std::size_t n_sc = plan_.n_subcarriers();
  const std::size_t n_sym = plan_.n_symbols;
  const Modulation mod = cfg_.mcs.modulation;

  std::mt19937_64 data_rng(mix_seed(seed, 1));
  const auto tb = TransportBlock::from_payload(random_bits(data_rng, plan_.tbs));
  const auto tx_symbols = modulate(encode(tb, plan_), mod);

  std::vector<ResourceGrid> user_tx;
  user_tx.push_back(grid_from_symbols(tx_symbols, n_sc, n_sym));
  for (std::size_t k = 1; k < topo.k_coor; ++k) {
    const auto bits = random_bits(data_rng, plan_.capacity_bits);
    user_tx.push_back(grid_from_symbols(modulate(bits, mod), n_sc, n_sym));
  }
  std::vector<ResourceGrid> int_tx;
  for (std::size_t k = 0; k < topo.k_int; ++k) {
    const auto bits = random_bits(data_rng, n_sc * n_sym * 2);
    int_tx.push_back(grid_from_symbols(modulate(bits, Modulation::Qpsk), n_sc, n_sym));
  }

  const auto channel = realize_channel(profile_, topo, geometry_.large_scale, n_sc,
                                       cfg_.subcarrier_spacing_hz, mix_seed(seed, 2));
  const auto noise = NoiseConfig::from_tx_snr_db(cfg_.snr_points[snr_index]);
  auto rx = apply_channel(user_tx, int_tx, channel, noise, mix_seed(seed, 3));

  FronthaulDistortion distortion;
  if (codec_.method != CompressionMethod::None && !opt.bypass_compression) {
    std::vector<std::uint8_t> wire;
    std::vector<BussgangStats> stats;
    for (std::size_t m = 0; m < rx.size(); ++m) {
      stats.push_back(fronthaul_roundtrip(rx[m], ru_gain(snr_index, m), codec_, wire));
    }
    distortion = FronthaulDistortion::from_bussgang(stats);
  }

  const auto weights = mmse_weights(channel, noise, topo.k_serv);
  const auto stream = equalize(weights, 0, rx, channel, noise, distortion);
  std::vector<ComplexSample> symbols;
  std::vector<double> noise_var;
  stream.normalized(symbols, noise_var);
  auto llrs = soft_demap(symbols, noise_var, mod);

  LdpcDecoderConfig dec;
  dec.max_iterations = cfg_.ldpc_max_iterations;
  const auto outcome = decode(llrs, plan_, dec);

  TrialResult r;
  r.pass = outcome.pass && outcome.tb == tb;
  r.ldpc_iterations = outcome.iterations;
  r.evm_percent = evm_percent(stream, tx_symbols);
  if (keep_llrs) r.llrs = std::move(llrs);
  return r;
}

bool run_trial(const SimConfig& cfg, std::size_t snr_index, std::size_t trial_index) {
  return Simulation(cfg).run_trial(snr_index, trial_index).pass;
}

Interval wilson_interval(std::size_t errors, std::size_t total, double z) {
  if (total == 0) return {0.0, 1.0};
  const double n = double(total);
  const double p = double(errors) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {errors == 0 ? 0.0 : std::max(0.0, centre - half),
          errors == total ? 1.0 : std::min(1.0, centre + half)};
}

std::size_t default_thread_count() {
  if (const char* env = std::getenv("FHC_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    throw ConfigError("FHC_THREADS must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<SimPoint> run_sweep(const Simulation& sim, const SweepOptions& opt) {
  const auto& cfg = sim.config();
  const std::size_t threads = opt.threads ? opt.threads : default_thread_count();
  // Trials run in index-ordered chunks; the stop point is the index of the
  // max_errors-th failure, so the count never depends on the schedule.
  const std::size_t chunk = std::max<std::size_t>(32, threads * 8);
  if (opt.csv) *opt.csv << kCsvHeader << '\n' << std::flush;

  std::vector<SimPoint> points;
  std::vector<std::uint8_t> failed;
  for (std::size_t si = 0; si < cfg.snr_points.size(); ++si) {
    SimPoint pt;
    pt.tx_snr_db = cfg.snr_points[si];
    std::size_t begin = 0;
    bool done = false;
    while (!done && begin < cfg.n_tbs) {
      const std::size_t end = std::min(cfg.n_tbs, begin + chunk);
      failed.assign(end - begin, 0);
      std::atomic<std::size_t> next{begin};
      std::exception_ptr error;
      std::atomic<bool> has_error{false};
      auto worker = [&] {
        try {
          for (std::size_t t = next++; t < end && !has_error; t = next++) {
            failed[t - begin] = sim.run_trial(si, t).pass ? 0 : 1;
          }
        } catch (...) {
          if (!has_error.exchange(true)) error = std::current_exception();
        }
      };
      const std::size_t n_workers = std::min(threads, end - begin);
      if (n_workers <= 1) {
        worker();
      } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
      }
      if (error) std::rethrow_exception(error);
      for (std::size_t t = begin; t < end; ++t) {
        ++pt.tb_total;
        pt.tb_errors += failed[t - begin];
        if (pt.tb_errors >= cfg.max_errors) {
          done = true;
          break;
        }
      }
      begin = end;
    }
    const auto ci = wilson_interval(pt.tb_errors, pt.tb_total);
    pt.ci_low = ci.low;
    pt.ci_high = ci.high;
    points.push_back(pt);
    if (opt.csv) *opt.csv << csv_row(cfg, pt) << '\n' << std::flush;
    if (opt.progress) opt.progress(pt);
    if (opt.stop_below_bler && pt.bler() < *opt.stop_below_bler) break;
  }
  return points;
}

std::vector<SimPoint> run_sweep(const SimConfig& cfg, const SweepOptions& opt) {
  return run_sweep(Simulation(cfg), opt);
}

std::string csv_row(const SimConfig& cfg, const SimPoint& p) {
  const int m = cfg.codec.method == CompressionMethod::None ? 16 : cfg.codec.m_bits;
  return fmt::format("{},{},{},{:.6f},{:.3f},{},{},{:.8f},{:.8f},{:.8f}",
                     to_string(cfg.codec.method), m, to_string(cfg.mcs.modulation),
                     cfg.mcs.code_rate, p.tx_snr_db, p.tb_total, p.tb_errors, p.bler(), p.ci_low,
                     p.ci_high);
}

nlohmann::json sweep_metadata(const Simulation& sim) {
  const auto& plan = sim.plan();
  nlohmann::json j;
  j["config"] = sim.config().to_json();
  j["plan"] = {{"mother_code", std::string(code_file_name(plan.mother))},
               {"n_symbols", plan.n_symbols},
               {"tbs", plan.tbs},
               {"info_bits", plan.info_bits},
               {"capacity_bits", plan.capacity_bits},
               {"tbs_scale", plan.tbs_scale},
               {"effective_rate", plan.effective_rate()}};
  if (sim.codec().delta) j["uniform_delta"] = *sim.codec().delta;
  j["kernels"] = std::string(kernels::active().name);
  j["placement"] = "uniform in disc (users, RUs), uniform in annulus (interferers)";
  auto pos = nlohmann::json::array();
  for (const auto& p : sim.geometry().rus) pos.push_back({p.x, p.y});
  j["ru_positions_m"] = pos;
  pos = nlohmann::json::array();
  for (const auto& p : sim.geometry().users) pos.push_back({p.x, p.y});
  j["user_positions_m"] = pos;
  auto beta = nlohmann::json::array();
  const auto& ls = sim.geometry().large_scale;
  for (std::size_t m = 0; m < ls.n_ru(); ++m) {
    auto row = nlohmann::json::array();
    for (std::size_t k = 0; k < ls.n_users(); ++k) row.push_back(10.0 * std::log10(ls(m, k)));
    beta.push_back(row);
  }
  j["beta_db"] = beta;
  j["delay_spread_ns"] = sim.profile().delay_spread_s * 1e9;
  return j;
}

Crossing snr_at_target(std::span<const SimPoint> curve, double target_bler) {
  if (!(target_bler > 0.0 && target_bler < 1.0)) return {std::nullopt, "target BLER not in (0, 1)"};
  if (curve.empty()) return {std::nullopt, "empty curve"};
  auto floored = [](const SimPoint& p) {
    return std::max(p.bler(), 0.5 / double(std::max<std::size_t>(p.tb_total, 1)));
  };
  if (curve.front().bler() < target_bler) {
    return {std::nullopt, "curve starts below the target; not bracketed"};
  }
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    const double b0 = curve[i].bler();
    const double b1 = curve[i + 1].bler();
    if (b0 >= target_bler && b1 < target_bler) {
      const double l0 = std::log10(floored(curve[i]));
      const double l1 = std::log10(floored(curve[i + 1]));
      const double lt = std::log10(target_bler);
      const double x0 = curve[i].tx_snr_db;
      const double x1 = curve[i + 1].tx_snr_db;
      if (l0 == l1) return {x0, {}};
      return {x0 + (x1 - x0) * (l0 - lt) / (l0 - l1), {}};
    }
  }
  return {std::nullopt, "target BLER not reached within the swept range"};
}

Crossing snr_difference(std::span<const SimPoint> curve, std::span<const SimPoint> baseline,
                        double target_bler) {
  const auto a = snr_at_target(curve, target_bler);
  if (!a.snr_db) return {std::nullopt, "curve: " + a.reason};
  const auto b = snr_at_target(baseline, target_bler);
  if (!b.snr_db) return {std::nullopt, "baseline: " + b.reason};
  return {*a.snr_db - *b.snr_db, {}};
}

}  // namespace fhc
