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

#pragma once

#include <cstddef>

namespace qmg::kernels {

// c[m x n] = a[m x k] * b[k x n], all row-major, c overwritten.
// Both variants sum over k in the same order, so results are bit-identical.

namespace serial {
void gemm(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);
}

namespace parallel {
void gemm(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);
}

}  // namespace qmg::kernels
