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

#include <vector>

#include "qmg/tensor/tape.hpp"

namespace qmg::ad::detail {

// Input adjoints of one recorded primitive given its output adjoint.
// Entries for inputs with need[i] == false are left undefined.
std::vector<Tensor> adjoint(const OpRecord& rec, const Tensor& grad_out, const std::vector<bool>& need);

}  // namespace qmg::ad::detail
