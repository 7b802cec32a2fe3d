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

namespace fhc {

/// Binary systematic LDPC code. Columns [0, k) carry information bits and
/// the parity part of H must be lower triangular with a unit diagonal
/// (check r holds parity column k + r), which makes encoding a forward
/// substitution. The shipped quasi-cyclic codes use a dual-diagonal
/// (staircase) parity part.
class LdpcCode {
 public:
  /// `rows[r]` lists the (0-based) variable indices in check r.
  LdpcCode(std::size_t n, std::size_t k, std::vector<std::vector<std::uint32_t>> rows);

  /// Parses the MacKay alist format. H must have full rank, so k = n - m.
  static LdpcCode from_alist(std::istream& in);
  static LdpcCode load(const std::filesystem::path& path);
  void write_alist(std::ostream& out) const;

  std::size_t n() const { return n_; }
  std::size_t k() const { return k_; }
  std::size_t m() const { return n_ - k_; }
  double rate() const { return double(k_) / double(n_); }
  std::size_t n_edges() const { return edge_var_.size(); }

  /// Edges of check r are [row_start(r), row_start(r+1)).
  std::size_t row_start(std::size_t r) const { return row_ptr_[r]; }
  std::uint32_t edge_var(std::size_t e) const { return edge_var_[e]; }

  /// Systematic codeword [info | parity].
  std::vector<std::uint8_t> encode(std::span<const std::uint8_t> info) const;
  bool satisfies_parity(std::span<const std::uint8_t> codeword) const;

 private:
  std::size_t n_;
  std::size_t k_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::uint32_t> edge_var_;
};

struct LdpcDecoderConfig {
  int max_iterations = 25;
  float normalization = 0.75f;
};

struct LdpcDecodeResult {
  std::vector<std::uint8_t> bits;  ///< hard decisions, full codeword
  int iterations = 0;
  bool parity_ok = false;
};

/// Layered normalized min-sum. `llr` has one entry per code bit, positive
/// meaning bit 0 is more likely. Stops early once all checks are satisfied.
LdpcDecodeResult ldpc_decode(const LdpcCode& code, std::span<const float> llr,
                             const LdpcDecoderConfig& cfg = {});

/// Parameters of a quasi-cyclic staircase code: base matrix of
/// base_rows x (info_cols + base_rows) circulants of size lift.
struct QcCodeSpec {
  std::size_t info_cols;
  std::size_t base_rows;
  std::size_t lift;
  std::vector<std::size_t> info_degrees;  ///< one per info column
  std::uint64_t seed;
};

/// Builds a code whose base matrix has no length-4 cycles.
LdpcCode make_qc_staircase_code(const QcCodeSpec& spec);

}  // namespace fhc
