// Copyright 2026 The qcbm-molgan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmg/kernels/gemm.hpp"

#include <algorithm>
#include <cstdint>

namespace qmg::kernels {

namespace {

inline void gemm_row(const double* a_row, const double* b, double* c_row, std::size_t k, std::size_t n) {
  std::fill(c_row, c_row + n, 0.0);
  for (std::size_t p = 0; p < k; ++p) {
    const double av = a_row[p];
    const double* b_row = b + p * n;
    for (std::size_t j = 0; j < n; ++j) c_row[j] += av * b_row[j];
  }
}

// Below this many multiply-adds the fork/join overhead dominates.
constexpr std::size_t kParallelThreshold = 1u << 15;

}  // namespace

namespace serial {

void gemm(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) gemm_row(a + i * k, b, c + i * n, k, n);
}

}  // namespace serial

namespace parallel {

void gemm(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
  if (m * k * n < kParallelThreshold) {
    serial::gemm(a, b, c, m, k, n);
    return;
  }
  const auto rows = static_cast<std::int64_t>(m);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < rows; ++i) {
    const auto r = static_cast<std::size_t>(i);
    gemm_row(a + r * k, b, c + r * n, k, n);
  }
}

}  // namespace parallel

}  // namespace qmg::kernels
