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

#include "fhc/ldpc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <string>

#include "fhc/error.hpp"

namespace fhc {

LdpcCode::LdpcCode(std::size_t n, std::size_t k, std::vector<std::vector<std::uint32_t>> rows)
    : n_(n), k_(k) {
  if (k == 0 || k >= n) throw ConfigError("ldpc: need 0 < k < n");
  if (rows.size() != n - k) throw ConfigError("ldpc: expected n - k check rows");
  row_ptr_.reserve(rows.size() + 1);
  row_ptr_.push_back(0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto& row = rows[r];
    std::sort(row.begin(), row.end());
    if (std::adjacent_find(row.begin(), row.end()) != row.end()) {
      throw ConfigError("ldpc: duplicate variable in check " + std::to_string(r));
    }
    const std::uint32_t diag = static_cast<std::uint32_t>(k + r);
    bool has_diag = false;
    for (auto v : row) {
      if (v >= n) throw ConfigError("ldpc: variable index out of range");
      if (v > diag) throw ConfigError("ldpc: parity part is not lower triangular");
      has_diag |= (v == diag);
    }
    if (!has_diag) throw ConfigError("ldpc: parity part lacks a unit diagonal");
    edge_var_.insert(edge_var_.end(), row.begin(), row.end());
    row_ptr_.push_back(edge_var_.size());
  }
}

LdpcCode LdpcCode::from_alist(std::istream& in) {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t max_col = 0;
  std::size_t max_row = 0;
  if (!(in >> n >> m >> max_col >> max_row) || n == 0 || m == 0 || m >= n) {
    throw ConfigError("alist: malformed header");
  }
  std::vector<std::size_t> col_w(n);
  std::vector<std::size_t> row_w(m);
  for (auto& w : col_w) in >> w;
  for (auto& w : row_w) in >> w;
  std::vector<std::vector<std::uint32_t>> cols(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < max_col; ++i) {
      std::size_t r = 0;
      in >> r;
      if (r != 0) cols[c].push_back(static_cast<std::uint32_t>(r - 1));
    }
  }
  std::vector<std::vector<std::uint32_t>> rows(m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t i = 0; i < max_row; ++i) {
      std::size_t c = 0;
      in >> c;
      if (c != 0) rows[r].push_back(static_cast<std::uint32_t>(c - 1));
    }
  }
  if (!in) throw ConfigError("alist: truncated file");
  std::size_t col_edges = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (cols[c].size() != col_w[c]) throw ConfigError("alist: column weight mismatch");
    col_edges += cols[c].size();
  }
  std::size_t row_edges = 0;
  for (std::size_t r = 0; r < m; ++r) {
    if (rows[r].size() != row_w[r]) throw ConfigError("alist: row weight mismatch");
    row_edges += rows[r].size();
  }
  if (col_edges != row_edges) throw ConfigError("alist: column and row lists disagree");
  return LdpcCode(n, n - m, std::move(rows));
}

LdpcCode LdpcCode::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open LDPC code file " + path.string());
  return from_alist(in);
}

void LdpcCode::write_alist(std::ostream& out) const {
  const std::size_t rows = m();
  std::vector<std::vector<std::uint32_t>> cols(n_);
  std::size_t max_row = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    max_row = std::max(max_row, row_ptr_[r + 1] - row_ptr_[r]);
    for (std::size_t e = row_ptr_[r]; e < row_ptr_[r + 1]; ++e) {
      cols[edge_var_[e]].push_back(static_cast<std::uint32_t>(r));
    }
  }
  std::size_t max_col = 0;
  for (const auto& c : cols) max_col = std::max(max_col, c.size());

  out << n_ << ' ' << rows << '\n' << max_col << ' ' << max_row << '\n';
  for (std::size_t c = 0; c < n_; ++c) out << cols[c].size() << (c + 1 < n_ ? ' ' : '\n');
  for (std::size_t r = 0; r < rows; ++r) {
    out << (row_ptr_[r + 1] - row_ptr_[r]) << (r + 1 < rows ? ' ' : '\n');
  }
  for (const auto& c : cols) {
    for (std::size_t i = 0; i < max_col; ++i) {
      out << (i < c.size() ? c[i] + 1 : 0) << (i + 1 < max_col ? ' ' : '\n');
    }
  }
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t w = row_ptr_[r + 1] - row_ptr_[r];
    for (std::size_t i = 0; i < max_row; ++i) {
      out << (i < w ? edge_var_[row_ptr_[r] + i] + 1 : 0) << (i + 1 < max_row ? ' ' : '\n');
    }
  }
}

std::vector<std::uint8_t> LdpcCode::encode(std::span<const std::uint8_t> info) const {
  if (info.size() != k_) throw ConfigError("ldpc encode: info length does not match k");
  std::vector<std::uint8_t> cw(n_, 0);
  std::copy(info.begin(), info.end(), cw.begin());
  // Row r's highest variable is its own parity bit; everything else is known.
  for (std::size_t r = 0; r < m(); ++r) {
    std::uint8_t acc = 0;
    for (std::size_t e = row_ptr_[r]; e + 1 < row_ptr_[r + 1]; ++e) acc ^= cw[edge_var_[e]];
    cw[k_ + r] = acc;
  }
  return cw;
}

bool LdpcCode::satisfies_parity(std::span<const std::uint8_t> codeword) const {
  if (codeword.size() != n_) return false;
  for (std::size_t r = 0; r < m(); ++r) {
    std::uint8_t acc = 0;
    for (std::size_t e = row_ptr_[r]; e < row_ptr_[r + 1]; ++e) acc ^= codeword[edge_var_[e]];
    if (acc != 0) return false;
  }
  return true;
}

LdpcDecodeResult ldpc_decode(const LdpcCode& code, std::span<const float> llr,
                             const LdpcDecoderConfig& cfg) {
  if (llr.size() != code.n()) throw ConfigError("ldpc decode: LLR length does not match n");
  std::vector<float> post(llr.begin(), llr.end());
  std::vector<float> check_msg(code.n_edges(), 0.0f);
  std::vector<float> q;
  LdpcDecodeResult res;
  res.bits.assign(code.n(), 0);

  auto hard_decide = [&] {
    for (std::size_t v = 0; v < code.n(); ++v) res.bits[v] = post[v] < 0.0f ? 1 : 0;
  };
  hard_decide();
  if (code.satisfies_parity(res.bits)) {
    res.parity_ok = true;
    return res;
  }

  for (int it = 1; it <= cfg.max_iterations; ++it) {
    for (std::size_t r = 0; r < code.m(); ++r) {
      const std::size_t begin = code.row_start(r);
      const std::size_t end = code.row_start(r + 1);
      q.resize(end - begin);
      float min1 = std::numeric_limits<float>::infinity();
      float min2 = min1;
      std::size_t argmin = 0;
      bool negative = false;
      for (std::size_t e = begin; e < end; ++e) {
        const float v = post[code.edge_var(e)] - check_msg[e];
        q[e - begin] = v;
        const float a = std::fabs(v);
        negative ^= (v < 0.0f);
        if (a < min1) {
          min2 = min1;
          min1 = a;
          argmin = e;
        } else if (a < min2) {
          min2 = a;
        }
      }
      for (std::size_t e = begin; e < end; ++e) {
        const float v = q[e - begin];
        float mag = cfg.normalization * (e == argmin ? min2 : min1);
        const bool neg = negative ^ (v < 0.0f);
        const float msg = neg ? -mag : mag;
        check_msg[e] = msg;
        post[code.edge_var(e)] = v + msg;
      }
    }
    res.iterations = it;
    hard_decide();
    if (code.satisfies_parity(res.bits)) {
      res.parity_ok = true;
      break;
    }
  }
  return res;
}

LdpcCode make_qc_staircase_code(const QcCodeSpec& spec) {
  const std::size_t kb = spec.info_cols;
  const std::size_t mb = spec.base_rows;
  const std::size_t z = spec.lift;
  if (kb == 0 || mb == 0 || z == 0 || spec.info_degrees.size() != kb) {
    throw ConfigError("qc code: inconsistent base matrix parameters");
  }
  constexpr int kEmpty = -1;
  // base[r][c], c < kb info blocks, c >= kb parity blocks.
  std::vector<std::vector<int>> base(mb, std::vector<int>(kb + mb, kEmpty));
  for (std::size_t r = 0; r < mb; ++r) {
    base[r][kb + r] = 0;
    if (r > 0) base[r][kb + r - 1] = 0;
  }

  std::mt19937_64 rng(spec.seed);
  std::vector<std::size_t> row_load(mb, 0);

  auto creates_4cycle = [&](std::size_t r, std::size_t c, int s) {
    for (std::size_t r2 = 0; r2 < mb; ++r2) {
      if (r2 == r || base[r2][c] == kEmpty) continue;
      for (std::size_t c2 = 0; c2 < kb + mb; ++c2) {
        if (c2 == c || base[r][c2] == kEmpty || base[r2][c2] == kEmpty) continue;
        const long d = long(s) - base[r][c2] + base[r2][c2] - base[r2][c];
        if (((d % long(z)) + long(z)) % long(z) == 0) return true;
      }
    }
    return false;
  };

  for (std::size_t c = 0; c < kb; ++c) {
    const std::size_t deg = spec.info_degrees[c];
    if (deg == 0 || deg > mb) throw ConfigError("qc code: info degree out of range");
    // Spread edges over the least loaded rows, ties broken at random.
    std::vector<std::size_t> order(mb);
    for (std::size_t r = 0; r < mb; ++r) order[r] = r;
    std::shuffle(order.begin(), order.end(), rng);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return row_load[a] < row_load[b]; });
    for (std::size_t i = 0; i < deg; ++i) {
      const std::size_t r = order[i];
      std::uniform_int_distribution<int> shift(0, static_cast<int>(z) - 1);
      int s = shift(rng);
      int tries = 0;
      while (creates_4cycle(r, c, s)) {
        if (++tries > 10'000) throw ConfigError("qc code: cannot avoid 4-cycles; raise the lift");
        s = shift(rng);
      }
      base[r][c] = s;
      ++row_load[r];
    }
  }

  const std::size_t k = kb * z;
  std::vector<std::vector<std::uint32_t>> rows(mb * z);
  for (std::size_t r = 0; r < mb; ++r) {
    for (std::size_t c = 0; c < kb + mb; ++c) {
      if (base[r][c] == kEmpty) continue;
      const std::size_t s = static_cast<std::size_t>(base[r][c]);
      const std::size_t col0 = c < kb ? c * z : k + (c - kb) * z;
      for (std::size_t t = 0; t < z; ++t) {
        rows[r * z + t].push_back(static_cast<std::uint32_t>(col0 + (t + s) % z));
      }
    }
  }
  return LdpcCode((kb + mb) * z, k, std::move(rows));
}

}  // namespace fhc
