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

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qmg/common/rng.hpp"

namespace qmg::qcbm {

/// Angles of the layered ansatz. Layer l applies Rz(theta_z)·Rx(theta_x) on
/// every qubit, then Rxx(theta_xx) on every pair i<j.
///
/// Storage is layer-major: theta_x[l * n + i], theta_xx[l * P + p] where p
/// enumerates pairs (0,1), (0,2), ..., (n-2,n-1).
struct QcbmParameters {
  std::size_t n_qubits = 0;
  std::size_t n_layers = 0;
  std::vector<double> theta_x;
  std::vector<double> theta_z;
  std::vector<double> theta_xx;

  static QcbmParameters zeros(std::size_t n_qubits, std::size_t n_layers);
  /// Angles drawn uniformly from [-pi, pi).
  static QcbmParameters random(std::size_t n_qubits, std::size_t n_layers, Rng& rng);

  std::size_t n_pairs() const { return n_qubits * (n_qubits - 1) / 2; }
  std::size_t size() const { return theta_x.size() + theta_z.size() + theta_xx.size(); }

  /// Throws InvalidArgument on wrong lengths or non-finite angles.
  void validate() const;

  /// All angles as one vector: theta_x, then theta_z, then theta_xx.
  std::vector<double> flat() const;
  void set_flat(std::span<const double> values);

  std::span<const double> layer_x(std::size_t l) const;
  std::span<const double> layer_z(std::size_t l) const;
  std::span<const double> layer_xx(std::size_t l) const;

  bool operator==(const QcbmParameters&) const = default;
};

/// Index of the pair (i, j), i < j, in lexicographic order.
std::size_t pair_index(std::size_t n, std::size_t i, std::size_t j);

using Amplitude = std::complex<double>;

/// Dense state of n qubits. Qubit 0 is the most significant bit of the
/// basis-state index.
struct StateVector {
  std::size_t n_qubits = 0;
  std::vector<Amplitude> amplitudes;

  static StateVector zero_state(std::size_t n_qubits);
  double norm_squared() const;
};

// Two interchangeable kernel sets. `reference` applies one gate at a time
// (Rx, then Rz, then each Rxx in pair order). `parallel` fuses each qubit's
// rotations into one 2x2 and applies a whole entangling layer as
// H^n · diag(exp(-i/2 sum theta_ij s_i s_j)) · H^n with OpenMP loops.

namespace reference {
void apply_rotation_layer(StateVector& state, std::span<const double> theta_x, std::span<const double> theta_z);
void apply_entangling_layer(StateVector& state, std::span<const double> theta_xx);
StateVector build_state(const QcbmParameters& params);
}  // namespace reference

namespace parallel {
void apply_rotation_layer(StateVector& state, std::span<const double> theta_x, std::span<const double> theta_z);
void apply_entangling_layer(StateVector& state, std::span<const double> theta_xx);
StateVector build_state(const QcbmParameters& params);
}  // namespace parallel

/// Applies Rxx gates one pair at a time in the given order (test helper for
/// checking that same-layer gates commute).
void apply_entangling_pairs(StateVector& state, std::span<const double> theta_xx,
                            std::span<const std::size_t> pair_order);

void apply_rotation_layer(StateVector& state, std::span<const double> theta_x, std::span<const double> theta_z);
void apply_entangling_layer(StateVector& state, std::span<const double> theta_xx);
/// |psi(theta)> from |0...0>, using the parallel kernels.
StateVector build_state(const QcbmParameters& params);

}  // namespace qmg::qcbm
