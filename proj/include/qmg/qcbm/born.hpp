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

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qmg/common/rng.hpp"
#include "qmg/qcbm/circuit.hpp"

namespace qmg::qcbm {

/// Bit i is qubit i (0 or 1).
using Bitstring = std::vector<std::uint8_t>;

std::uint64_t to_index(const Bitstring& bits);
Bitstring from_index(std::uint64_t index, std::size_t n_qubits);

/// |<z|psi>|^2 for every basis state z.
std::vector<double> born_probabilities(const StateVector& state);

/// Draws `shots` basis-state indices i.i.d. from `probabilities`.
std::vector<std::uint64_t> sample_indices(std::span<const double> probabilities, std::size_t shots, Rng& rng);

/// Draws `shots` bitstrings from the Born distribution of `params`.
std::vector<Bitstring> sample(const QcbmParameters& params, std::size_t shots, std::uint64_t seed);

/// log(1e-8)
inline const double kDefaultClipFloor = std::log(1e-8);

/// -mean over targets of max(log q(z), clip_floor), from exact probabilities.
double clipped_cross_entropy(std::span<const double> probabilities, std::span<const std::uint64_t> targets,
                             double clip_floor = kDefaultClipFloor);
double clipped_cross_entropy(const QcbmParameters& params, std::span<const Bitstring> targets,
                             double clip_floor = kDefaultClipFloor);

/// Spall gain schedule and iteration counter.
struct SpsaState {
  std::uint64_t k = 0;
  double a = 0.2;
  double c = 0.1;
  double A = 10.0;
  double alpha = 0.602;
  double gamma = 0.101;

  double a_k() const { return a / std::pow(static_cast<double>(k) + 1.0 + A, alpha); }
  double c_k() const { return c / std::pow(static_cast<double>(k) + 1.0, gamma); }
  /// Throws InvalidArgument unless a, c > 0 and A, alpha, gamma >= 0.
  void validate() const;
};

using LossFn = std::function<double(const QcbmParameters&)>;

struct SpsaStepResult {
  double loss_plus = 0.0;
  double loss_minus = 0.0;
};

/// One SPSA update of every angle with a Rademacher perturbation drawn from
/// `rng`. Throws NumericError if either loss evaluation is not finite; the
/// parameters and counter are then left untouched.
SpsaStepResult spsa_step(QcbmParameters& params, const LossFn& loss_fn, SpsaState& state, Rng& rng);

struct TrainTrace {
  QcbmParameters params;
  /// Clipped cross-entropy after each iteration.
  std::vector<double> losses;
  /// `shots` samples drawn from the trained circuit.
  std::vector<Bitstring> samples;
};

/// Runs `iterations` SPSA steps on the clipped cross-entropy to `targets`.
TrainTrace train_to_target(QcbmParameters params, std::span<const Bitstring> targets, std::size_t iterations,
                           std::size_t shots, std::uint64_t seed, SpsaState spsa = {},
                           double clip_floor = kDefaultClipFloor);

}  // namespace qmg::qcbm
