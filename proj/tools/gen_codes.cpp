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

// Regenerates the shipped QC-LDPC mother codes under codes/.
//
//   gen_codes <output dir>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "fhc/ldpc.hpp"

namespace {

struct Entry {
  const char* file;
  fhc::QcCodeSpec spec;
};

std::vector<std::size_t> degrees(std::size_t n, std::size_t deg, std::size_t n_high = 0,
                                 std::size_t high = 0) {
  std::vector<std::size_t> d(n, deg);
  for (std::size_t i = 0; i < n_high; ++i) d[i] = high;
  return d;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <output dir>\n", argv[0]);
    return 2;
  }
  constexpr std::size_t kLift = 256;
  const std::vector<Entry> entries = {
      {"qc_r1_8.alist", {4, 28, kLift, degrees(4, 7), 0x1a8}},
      {"qc_r1_2.alist", {16, 16, kLift, degrees(16, 4), 0x1b2}},
      {"qc_r5_8.alist", {20, 12, kLift, degrees(20, 4), 0x5b8}},
      {"qc_r2_3.alist", {20, 10, kLift, degrees(20, 4), 0x2b3}},
  };
  const std::filesystem::path dir(argv[1]);
  std::filesystem::create_directories(dir);
  for (const auto& e : entries) {
    const auto code = fhc::make_qc_staircase_code(e.spec);
    std::ofstream out(dir / e.file);
    code.write_alist(out);
    if (!out) {
      std::fprintf(stderr, "cannot write %s\n", (dir / e.file).c_str());
      return 1;
    }
    std::printf("%s: n=%zu k=%zu edges=%zu\n", e.file, code.n(), code.k(), code.n_edges());
  }
  return 0;
}
