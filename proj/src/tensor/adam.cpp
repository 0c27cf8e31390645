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

#include "qmg/tensor/adam.hpp"

#include <cmath>
#include <string>

#include "qmg/common/error.hpp"

namespace qmg::ad {

OptimizerState make_adam(std::span<const Tensor> params, double lr) {
  OptimizerState state;
  state.lr = lr;
  for (const auto& p : params) {
    state.m.emplace_back(p.size(), 0.0);
    state.v.emplace_back(p.size(), 0.0);
  }
  return state;
}

void adam_step(std::span<Tensor> params, OptimizerState& state) {
  if (state.m.size() != params.size() || state.v.size() != params.size()) {
    throw InvalidArgument("adam_step: optimizer holds " + std::to_string(state.m.size()) + " moment sets for " +
                          std::to_string(params.size()) + " parameters");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i].has_grad()) throw InvalidArgument("adam_step: parameter " + std::to_string(i) + " has no gradient");
    if (state.m[i].size() != params[i].size() || state.v[i].size() != params[i].size()) {
      throw InvalidArgument("adam_step: moment shape mismatch for parameter " + std::to_string(i));
    }
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto w = params[i].mutable_data();
    const auto g = params[i].grad();
    auto& m = state.m[i];
    auto& v = state.v[i];
    for (std::size_t j = 0; j < w.size(); ++j) {
      m[j] = state.beta1 * m[j] + (1.0 - state.beta1) * g[j];
      v[j] = state.beta2 * v[j] + (1.0 - state.beta2) * g[j] * g[j];
      w[j] -= state.lr * (m[j] / c1) / (std::sqrt(v[j] / c2) + state.eps);
    }
    params[i].zero_grad();
  }
}

}  // namespace qmg::ad
