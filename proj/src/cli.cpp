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

#include "fhc/cli.hpp"

#include <CLI11.hpp>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <random>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "fhc/compression.hpp"
#include "fhc/error.hpp"
#include "fhc/fronthaul_wire.hpp"
#include "fhc/sim_harness.hpp"

namespace fhc {

namespace {

static_assert(std::endian::native == std::endian::little, "file formats assume little endian");

// Container for `compress`: 32-byte header then back-to-back sections.
//   0  "FHC1"
//   4  method code, m_bits, 2 reserved bytes
//   8  f64 uniform step (0 if unused)
//   16 f64 mu
//   24 u64 sample count before zero padding to whole PRBs
constexpr std::array<char, 4> kMagic = {'F', 'H', 'C', '1'};
constexpr std::size_t kContainerHeader = 32;

template <typename T>
void put(std::vector<std::uint8_t>& out, T v) {
  std::array<std::uint8_t, sizeof(T)> raw;
  std::memcpy(raw.data(), &v, sizeof(T));
  out.insert(out.end(), raw.begin(), raw.end());
}

template <typename T>
T get(std::span<const std::uint8_t> in, std::size_t offset) {
  T v;
  std::memcpy(&v, in.data() + offset, sizeof(T));
  return v;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!out) throw RuntimeError("write failed for " + path);
}

// Interleaved little-endian float32 I/Q pairs.
std::vector<ComplexSample> read_iq(const std::string& path) {
  const auto bytes = read_file(path);
  if (bytes.size() % 8 != 0) throw ConfigError(path + ": not a float32 I/Q file");
  std::vector<ComplexSample> iq(bytes.size() / 8);
  for (std::size_t i = 0; i < iq.size(); ++i) {
    iq[i] = {get<float>(bytes, 8 * i), get<float>(bytes, 8 * i + 4)};
  }
  return iq;
}

void write_iq(const std::string& path, std::span<const ComplexSample> iq) {
  std::vector<std::uint8_t> out;
  out.reserve(iq.size() * 8);
  for (const auto& s : iq) {
    put(out, static_cast<float>(s.real()));
    put(out, static_cast<float>(s.imag()));
  }
  write_file(path, out);
}

std::vector<PrbBlock> gaussian_blocks(std::size_t n, double power, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(power / 2.0));
  std::vector<PrbBlock> blocks(n);
  for (auto& b : blocks) {
    for (auto& s : b) {
      const double re = normal(rng);
      const double im = normal(rng);
      s = {re, im};
    }
  }
  return blocks;
}

CompressionConfig codec_from_args(const std::string& method, int bits, double mu, double lambda) {
  CompressionConfig c;
  c.method = parse_method(method);
  c.m_bits = c.method == CompressionMethod::None ? 16 : bits;
  c.mu = mu;
  c.lambda = lambda;
  c.validate();
  return c;
}

int run_simulate(const std::string& config_path, std::string out_path,
                 std::optional<std::uint64_t> seed, std::size_t threads, std::ostream& out,
                 std::ostream& err) {
  auto cfg = SimConfig::load(config_path);
  if (seed) cfg.master_seed = *seed;
  if (out_path.empty()) out_path = cfg.output.string();
  if (out_path.empty()) throw ConfigError("simulate: no output path (--out or \"output\")");
  cfg.output = out_path;

  const Simulation sim(cfg);
  std::ofstream csv(out_path);
  if (!csv) throw RuntimeError("cannot write " + out_path);
  {
    std::ofstream meta(out_path + ".meta.json");
    if (!meta) throw RuntimeError("cannot write " + out_path + ".meta.json");
    meta << sweep_metadata(sim).dump(2) << '\n';
  }
  SweepOptions opt;
  opt.threads = threads;
  opt.csv = &csv;
  opt.progress = [&](const SimPoint& p) {
    fmt::print(err, "snr {:7.2f} dB  tbs {:5}  errors {:4}  bler {:.4g}\n", p.tx_snr_db,
               p.tb_total, p.tb_errors, p.bler());
  };
  const auto points = run_sweep(sim, opt);
  const auto crossing = snr_at_target(points);
  if (crossing.snr_db) {
    fmt::print(out, "snr at BLER 0.1: {:.3f} dB\n", *crossing.snr_db);
  } else {
    fmt::print(out, "snr at BLER 0.1: undefined ({})\n", crossing.reason);
  }
  return 0;
}

int run_sqnr(const std::string& method, int bits, std::size_t n_blocks, std::uint64_t seed,
             double power_db, double mu, double lambda, std::ostream& out) {
  auto codec = codec_from_args(method, bits, mu, lambda);
  const double power = std::pow(10.0, power_db / 10.0);
  if (codec.method == CompressionMethod::Uniform) codec.delta = optimize_delta(codec.m_bits, power);
  const auto blocks = gaussian_blocks(n_blocks, power, seed);
  const auto rec = decompress_blocks(compress_blocks(blocks, codec));
  const std::span<const ComplexSample> y(blocks.front().data(), blocks.size() * kSubcarriersPerPrb);
  const std::span<const ComplexSample> yq(rec.front().data(), rec.size() * kSubcarriersPerPrb);
  const auto b = bussgang_estimate(y, yq);
  fmt::print(out, "method {} m_bits {} blocks {} input_power_dbfs {:.2f}\n", to_string(codec.method),
             codec.m_bits, n_blocks, power_db);
  if (codec.delta) fmt::print(out, "delta {:.9g}\n", *codec.delta);
  fmt::print(out, "sqnr_db {:.4f}\n", sqnr_db(y, yq));
  fmt::print(out, "alpha {:.6f}\n", b.alpha);
  fmt::print(out, "distortion_power {:.6e}\ncross_corr {:.3e}\n", b.distortion_power, b.cross_corr);
  return 0;
}

int run_compress(const std::string& in_path, const std::string& out_path, const std::string& method,
                 int bits, std::optional<double> delta, double mu, double lambda,
                 std::ostream& out) {
  auto codec = codec_from_args(method, bits, mu, lambda);
  auto iq = read_iq(in_path);
  const std::size_t n_samples = iq.size();
  if (n_samples == 0) throw ConfigError(in_path + ": empty I/Q file");
  if (codec.method == CompressionMethod::Uniform) {
    if (delta) {
      codec.delta = *delta;
    } else {
      double p = 0.0;
      for (const auto& s : iq) p += std::norm(s);
      codec.delta = optimize_delta(codec.m_bits, std::max(p / double(n_samples), 1e-12));
    }
  }
  iq.resize((n_samples + kSubcarriersPerPrb - 1) / kSubcarriersPerPrb * kSubcarriersPerPrb);
  std::vector<PrbBlock> blocks(iq.size() / kSubcarriersPerPrb);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    std::copy_n(iq.begin() + std::ptrdiff_t(b * kSubcarriersPerPrb), kSubcarriersPerPrb,
                blocks[b].begin());
  }

  std::vector<std::uint8_t> bytes(kMagic.begin(), kMagic.end());
  bytes.push_back(method_code(codec.method));
  bytes.push_back(static_cast<std::uint8_t>(codec.m_bits));
  bytes.push_back(0);
  bytes.push_back(0);
  put(bytes, codec.delta.value_or(0.0));
  put(bytes, codec.mu);
  put(bytes, static_cast<std::uint64_t>(n_samples));
  const auto compressed = compress_blocks(blocks, codec);
  for (std::size_t b = 0; b < compressed.size(); ++b) {
    pack_into(compressed[b], static_cast<std::uint16_t>(b & 0xFFFF), bytes);
  }
  write_file(out_path, bytes);
  fmt::print(out, "{} samples, {} sections, {} bytes\n", n_samples, compressed.size(), bytes.size());
  return 0;
}

int run_decompress(const std::string& in_path, const std::string& out_path, std::ostream& out) {
  const auto bytes = read_file(in_path);
  const std::span<const std::uint8_t> all(bytes);
  if (bytes.size() < kContainerHeader || !std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw RuntimeError(in_path + ": not an fhc container");
  }
  CompressionConfig codec;
  codec.method = method_from_code(bytes[4]);
  codec.m_bits = bytes[5];
  const double delta = get<double>(all, 8);
  if (codec.method == CompressionMethod::Uniform) codec.delta = delta;
  codec.mu = get<double>(all, 16);
  const auto n_samples = get<std::uint64_t>(all, 24);
  const std::size_t stride = section_bytes(codec.m_bits);
  const std::size_t payload = bytes.size() - kContainerHeader;
  const std::size_t n_blocks = (n_samples + kSubcarriersPerPrb - 1) / kSubcarriersPerPrb;
  if (payload != n_blocks * stride) throw RuntimeError(in_path + ": truncated or padded payload");

  std::vector<CompressedBlock> cbs;
  cbs.reserve(n_blocks);
  for (std::size_t b = 0; b < n_blocks; ++b) {
    cbs.push_back(unpack(all.subspan(kContainerHeader + b * stride, stride), codec));
  }
  const auto blocks = decompress_blocks(cbs);
  std::vector<ComplexSample> iq;
  iq.reserve(n_blocks * kSubcarriersPerPrb);
  for (const auto& b : blocks) iq.insert(iq.end(), b.begin(), b.end());
  iq.resize(n_samples);
  write_iq(out_path, iq);
  fmt::print(out, "{} samples\n", n_samples);
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fronthaul IQ compression toolkit and link-level simulator", "fhc"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 0;
  auto* simulate = app.add_subcommand("simulate", "Run a BLER sweep from a JSON config");
  simulate->add_option("--config", config_path, "Simulation config (JSON)")->required();
  simulate->add_option("--out", out_path, "CSV output path");
  simulate->add_option("--seed", seed, "Override the master seed");
  simulate->add_option("--threads", threads, "Worker threads (default FHC_THREADS or all cores)");

  std::string method = "bfp";
  int bits = 9;
  std::size_t n_blocks = 10000;
  std::uint64_t sqnr_seed = 1;
  double power_db = -18.0;
  double mu = 8.0;
  double lambda = 1.0;
  auto* sqnr = app.add_subcommand("sqnr", "SQNR and Bussgang statistics on Gaussian blocks");
  sqnr->add_option("--method", method)->required();
  sqnr->add_option("--bits", bits)->required();
  sqnr->add_option("--blocks", n_blocks, "Number of PRB blocks")->capture_default_str();
  sqnr->add_option("--seed", sqnr_seed)->capture_default_str();
  sqnr->add_option("--power-db", power_db, "Input power relative to full scale")
      ->capture_default_str();
  sqnr->add_option("--mu", mu)->capture_default_str();
  sqnr->add_option("--lambda", lambda)->capture_default_str();

  std::string in_path;
  std::optional<double> delta;
  auto* compress = app.add_subcommand("compress", "Compress a float32 I/Q file");
  compress->add_option("--in", in_path)->required();
  compress->add_option("--out", out_path)->required();
  compress->add_option("--method", method)->required();
  compress->add_option("--bits", bits)->required();
  compress->add_option("--delta", delta, "Uniform step (default: optimized for the input power)");
  compress->add_option("--mu", mu)->capture_default_str();
  compress->add_option("--lambda", lambda)->capture_default_str();

  auto* decompress = app.add_subcommand("decompress", "Expand a compressed container to I/Q");
  decompress->add_option("--in", in_path)->required();
  decompress->add_option("--out", out_path)->required();

  std::uint64_t n_prb = 0, n_sym = 0, n_ant = 0;
  int load_bits = 0;
  auto* load = app.add_subcommand("load", "Fronthaul payload bits per slot");
  load->add_option("--prb", n_prb)->required();
  load->add_option("--symbols", n_sym)->required();
  load->add_option("--antennas", n_ant)->required();
  load->add_option("--bits", load_bits)->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "fhc: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*simulate) return run_simulate(config_path, out_path, seed, threads, out, err);
    if (*sqnr) return run_sqnr(method, bits, n_blocks, sqnr_seed, power_db, mu, lambda, out);
    if (*compress) return run_compress(in_path, out_path, method, bits, delta, mu, lambda, out);
    if (*decompress) return run_decompress(in_path, out_path, out);
    if (*load) {
      if (load_bits < 1 || load_bits > 16) throw ConfigError("load: --bits must be in 1..16");
      fmt::print(out, "{}\n", fronthaul_load(n_prb, n_sym, n_ant, load_bits));
      return 0;
    }
  } catch (const ConfigError& e) {
    err << "fhc: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "fhc: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

int cli_main(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace fhc
