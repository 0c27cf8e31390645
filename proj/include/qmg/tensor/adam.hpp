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

#include <cstdint>
#include <span>
#include <vector>

#include "qmg/tensor/tensor.hpp"

namespace qmg::ad {

/// Adam moments for an ordered list of parameters.
struct OptimizerState {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t step = 0;
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
};

OptimizerState make_adam(std::span<const Tensor> params, double lr);

/// One bias-corrected Adam update in place, then clears the gradients.
/// Throws InvalidArgument if a parameter has no gradient or the moment
/// arrays do not match the parameters.
void adam_step(std::span<Tensor> params, OptimizerState& state);

}  // namespace qmg::ad
