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

#include "qmg/qcbm/circuit.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "qmg/common/error.hpp"

namespace qmg::qcbm {

namespace {

constexpr std::int64_t kParallelThreshold = 1 << 12;

void check_lengths(const StateVector& state, std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw InvalidArgument(std::string(what) + ": expected " + std::to_string(want) + " angles for " +
                          std::to_string(state.n_qubits) + " qubits, got " + std::to_string(got));
  }
}

std::size_t bit_of(std::size_t n, std::size_t qubit) { return std::size_t{1} << (n - 1 - qubit); }

// u * a + v * b with plain real arithmetic (std::complex multiplication
// goes through the NaN-recovering library routine).
inline Amplitude mul_add(Amplitude u, Amplitude a, Amplitude v, Amplitude b) {
  return {u.real() * a.real() - u.imag() * a.imag() + v.real() * b.real() - v.imag() * b.imag(),
          u.real() * a.imag() + u.imag() * a.real() + v.real() * b.imag() + v.imag() * b.real()};
}

// Applies a 2x2 matrix [[u00, u01], [u10, u11]] to one qubit.
void apply_single(StateVector& state, std::size_t qubit, Amplitude u00, Amplitude u01, Amplitude u10,
                  Amplitude u11) {
  const std::size_t stride = bit_of(state.n_qubits, qubit);
  const auto half = static_cast<std::int64_t>(state.amplitudes.size() / 2);
  Amplitude* amp = state.amplitudes.data();
#pragma omp parallel for schedule(static) if (half >= kParallelThreshold)
  for (std::int64_t k = 0; k < half; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    const std::size_t i0 = ((uk & ~(stride - 1)) << 1) | (uk & (stride - 1));
    const std::size_t i1 = i0 | stride;
    const Amplitude a0 = amp[i0];
    const Amplitude a1 = amp[i1];
    amp[i0] = mul_add(u00, a0, u01, a1);
    amp[i1] = mul_add(u10, a0, u11, a1);
  }
}

// Unnormalised Walsh-Hadamard transform over every qubit.
void walsh_hadamard(StateVector& state) {
  const auto half = static_cast<std::int64_t>(state.amplitudes.size() / 2);
  Amplitude* amp = state.amplitudes.data();
  for (std::size_t q = 0; q < state.n_qubits; ++q) {
    const std::size_t stride = std::size_t{1} << q;
#pragma omp parallel for schedule(static) if (half >= kParallelThreshold)
    for (std::int64_t k = 0; k < half; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      const std::size_t i0 = ((uk & ~(stride - 1)) << 1) | (uk & (stride - 1));
      const std::size_t i1 = i0 | stride;
      const Amplitude a0 = amp[i0];
      const Amplitude a1 = amp[i1];
      amp[i0] = a0 + a1;
      amp[i1] = a0 - a1;
    }
  }
}

// Spin of qubit q in basis state idx: +1 for bit 0, -1 for bit 1.
inline double spin(std::size_t n, std::size_t idx, std::size_t q) { return (idx & bit_of(n, q)) ? -1.0 : 1.0; }

}  // namespace

QcbmParameters QcbmParameters::zeros(std::size_t n_qubits, std::size_t n_layers) {
  if (n_qubits == 0 || n_layers == 0) throw InvalidArgument("QCBM needs at least one qubit and one layer");
  QcbmParameters p;
  p.n_qubits = n_qubits;
  p.n_layers = n_layers;
  p.theta_x.assign(n_layers * n_qubits, 0.0);
  p.theta_z.assign(n_layers * n_qubits, 0.0);
  p.theta_xx.assign(n_layers * p.n_pairs(), 0.0);
  return p;
}

QcbmParameters QcbmParameters::random(std::size_t n_qubits, std::size_t n_layers, Rng& rng) {
  auto p = zeros(n_qubits, n_layers);
  for (auto* v : {&p.theta_x, &p.theta_z, &p.theta_xx}) {
    for (auto& t : *v) t = rng.uniform(-std::numbers::pi, std::numbers::pi);
  }
  return p;
}

void QcbmParameters::validate() const {
  if (n_qubits == 0 || n_layers == 0) throw InvalidArgument("QCBM needs at least one qubit and one layer");
  if (n_qubits > 30) throw InvalidArgument("QCBM statevector limited to 30 qubits");
  if (theta_x.size() != n_layers * n_qubits || theta_z.size() != n_layers * n_qubits ||
      theta_xx.size() != n_layers * n_pairs()) {
    throw InvalidArgument("QCBM angle arrays do not match " + std::to_string(n_layers) + " layers of " +
                          std::to_string(n_qubits) + " qubits");
  }
  for (const auto* v : {&theta_x, &theta_z, &theta_xx}) {
    for (double t : *v) {
      if (!std::isfinite(t)) throw InvalidArgument("QCBM angle is not finite");
    }
  }
}

std::vector<double> QcbmParameters::flat() const {
  std::vector<double> out;
  out.reserve(size());
  out.insert(out.end(), theta_x.begin(), theta_x.end());
  out.insert(out.end(), theta_z.begin(), theta_z.end());
  out.insert(out.end(), theta_xx.begin(), theta_xx.end());
  return out;
}

void QcbmParameters::set_flat(std::span<const double> values) {
  if (values.size() != size()) {
    throw InvalidArgument("set_flat: expected " + std::to_string(size()) + " angles, got " +
                          std::to_string(values.size()));
  }
  auto it = values.begin();
  for (auto* v : {&theta_x, &theta_z, &theta_xx}) {
    std::copy(it, it + static_cast<std::ptrdiff_t>(v->size()), v->begin());
    it += static_cast<std::ptrdiff_t>(v->size());
  }
}

std::span<const double> QcbmParameters::layer_x(std::size_t l) const {
  return std::span<const double>(theta_x).subspan(l * n_qubits, n_qubits);
}
std::span<const double> QcbmParameters::layer_z(std::size_t l) const {
  return std::span<const double>(theta_z).subspan(l * n_qubits, n_qubits);
}
std::span<const double> QcbmParameters::layer_xx(std::size_t l) const {
  return std::span<const double>(theta_xx).subspan(l * n_pairs(), n_pairs());
}

std::size_t pair_index(std::size_t n, std::size_t i, std::size_t j) {
  if (!(i < j && j < n)) throw InvalidArgument("pair_index: need i < j < n");
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

StateVector StateVector::zero_state(std::size_t n_qubits) {
  if (n_qubits == 0 || n_qubits > 30) throw InvalidArgument("statevector needs 1..30 qubits");
  StateVector s;
  s.n_qubits = n_qubits;
  s.amplitudes.assign(std::size_t{1} << n_qubits, Amplitude{0.0, 0.0});
  s.amplitudes[0] = 1.0;
  return s;
}

double StateVector::norm_squared() const {
  double acc = 0.0;
  for (const auto& a : amplitudes) acc += std::norm(a);
  return acc;
}

void apply_entangling_pairs(StateVector& state, std::span<const double> theta_xx,
                            std::span<const std::size_t> pair_order) {
  const std::size_t n = state.n_qubits;
  check_lengths(state, theta_xx.size(), n * (n - 1) / 2, "apply_entangling_layer");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  Amplitude* amp = state.amplitudes.data();
  const std::size_t dim = state.amplitudes.size();
  for (const std::size_t p : pair_order) {
    const double theta = theta_xx[p];
    if (theta == 0.0) continue;
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    const Amplitude mis{0.0, -s};
    const std::size_t mask = bit_of(n, pairs[p].first) | bit_of(n, pairs[p].second);
    for (std::size_t idx = 0; idx < dim; ++idx) {
      const std::size_t partner = idx ^ mask;
      if (partner < idx) continue;
      const Amplitude a = amp[idx];
      const Amplitude b = amp[partner];
      amp[idx] = c * a + mis * b;
      amp[partner] = c * b + mis * a;
    }
  }
}

namespace reference {

void apply_rotation_layer(StateVector& state, std::span<const double> theta_x, std::span<const double> theta_z) {
  check_lengths(state, theta_x.size(), state.n_qubits, "apply_rotation_layer");
  check_lengths(state, theta_z.size(), state.n_qubits, "apply_rotation_layer");
  const std::size_t n = state.n_qubits;
  for (std::size_t q = 0; q < n; ++q) {
    const double c = std::cos(theta_x[q] / 2);
    const double s = std::sin(theta_x[q] / 2);
    const std::size_t stride = bit_of(n, q);
    for (std::size_t i0 = 0; i0 < state.amplitudes.size(); ++i0) {
      if (i0 & stride) continue;
      const Amplitude a0 = state.amplitudes[i0];
      const Amplitude a1 = state.amplitudes[i0 | stride];
      state.amplitudes[i0] = c * a0 + Amplitude{0.0, -s} * a1;
      state.amplitudes[i0 | stride] = Amplitude{0.0, -s} * a0 + c * a1;
    }
    const Amplitude phase0 = std::polar(1.0, -theta_z[q] / 2);
    const Amplitude phase1 = std::polar(1.0, theta_z[q] / 2);
    for (std::size_t idx = 0; idx < state.amplitudes.size(); ++idx) {
      state.amplitudes[idx] *= (idx & stride) ? phase1 : phase0;
    }
  }
}

void apply_entangling_layer(StateVector& state, std::span<const double> theta_xx) {
  const std::size_t n = state.n_qubits;
  std::vector<std::size_t> order(n * (n - 1) / 2);
  for (std::size_t p = 0; p < order.size(); ++p) order[p] = p;
  apply_entangling_pairs(state, theta_xx, order);
}

StateVector build_state(const QcbmParameters& params) {
  params.validate();
  auto state = StateVector::zero_state(params.n_qubits);
  for (std::size_t l = 0; l < params.n_layers; ++l) {
    reference::apply_rotation_layer(state, params.layer_x(l), params.layer_z(l));
    reference::apply_entangling_layer(state, params.layer_xx(l));
  }
  return state;
}

}  // namespace reference

namespace parallel {

void apply_rotation_layer(StateVector& state, std::span<const double> theta_x, std::span<const double> theta_z) {
  check_lengths(state, theta_x.size(), state.n_qubits, "apply_rotation_layer");
  check_lengths(state, theta_z.size(), state.n_qubits, "apply_rotation_layer");
  for (std::size_t q = 0; q < state.n_qubits; ++q) {
    const double c = std::cos(theta_x[q] / 2);
    const double s = std::sin(theta_x[q] / 2);
    const Amplitude p0 = std::polar(1.0, -theta_z[q] / 2);
    const Amplitude p1 = std::polar(1.0, theta_z[q] / 2);
    // Rz * Rx
    apply_single(state, q, p0 * c, p0 * Amplitude{0.0, -s}, p1 * Amplitude{0.0, -s}, p1 * c);
  }
}

namespace {

using Gate = std::array<Amplitude, 4>;

Gate matmul2(const Gate& a, const Gate& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

// Rz(theta_z) * Rx(theta_x).
Gate rotation(double theta_x, double theta_z) {
  const double c = std::cos(theta_x / 2);
  const double s = std::sin(theta_x / 2);
  const Amplitude p0 = std::polar(1.0, -theta_z / 2);
  const Amplitude p1 = std::polar(1.0, theta_z / 2);
  return {p0 * c, p0 * Amplitude{0.0, -s}, p1 * Amplitude{0.0, -s}, p1 * c};
}

const Gate kHadamard = {std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2,
                        -std::numbers::sqrt2 / 2};

// Multiplies amplitude idx by scale * exp(-i/2 sum_{i<j} theta_ij s_i s_j),
// s = +-1 from the bits of idx. In the Hadamard basis this is the Rxx layer.
void apply_zz_phases(StateVector& state, std::span<const double> theta_xx, double scale) {
  const std::size_t n = state.n_qubits;
  // Split the index into high and low qubit groups so the ZZ phase becomes
  // table lookups plus a short cross-term dot product.
  const std::size_t n_hi = n / 2;
  const std::size_t n_lo = n - n_hi;
  const std::size_t dim_hi = std::size_t{1} << n_hi;
  const std::size_t dim_lo = std::size_t{1} << n_lo;
  std::vector<double> phase_hi(dim_hi, 0.0), phase_lo(dim_lo, 0.0);
  std::vector<double> spin_hi(dim_hi * n_hi);
  std::vector<double> field_lo(dim_lo * n_hi, 0.0);
  for (std::size_t h = 0; h < dim_hi; ++h) {
    const std::size_t idx = h << n_lo;
    for (std::size_t i = 0; i < n_hi; ++i) {
      spin_hi[h * n_hi + i] = spin(n, idx, i);
      for (std::size_t j = i + 1; j < n_hi; ++j) {
        phase_hi[h] += theta_xx[pair_index(n, i, j)] * spin(n, idx, i) * spin(n, idx, j);
      }
    }
  }
  for (std::size_t lo = 0; lo < dim_lo; ++lo) {
    for (std::size_t i = n_hi; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        phase_lo[lo] += theta_xx[pair_index(n, i, j)] * spin(n, lo, i) * spin(n, lo, j);
      }
    }
    for (std::size_t i = 0; i < n_hi; ++i) {
      double f = 0.0;
      for (std::size_t j = n_hi; j < n; ++j) f += theta_xx[pair_index(n, i, j)] * spin(n, lo, j);
      field_lo[lo * n_hi + i] = f;
    }
  }
  Amplitude* amp = state.amplitudes.data();
  const auto total = static_cast<std::int64_t>(state.amplitudes.size());
#pragma omp parallel for schedule(static) if (total >= kParallelThreshold)
  for (std::int64_t k = 0; k < total; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    const std::size_t h = idx >> n_lo;
    const std::size_t lo = idx & (dim_lo - 1);
    double phi = phase_hi[h] + phase_lo[lo];
    const double* sh = spin_hi.data() + h * n_hi;
    const double* fl = field_lo.data() + lo * n_hi;
    for (std::size_t i = 0; i < n_hi; ++i) phi += sh[i] * fl[i];
    const double c = scale * std::cos(phi / 2);
    const double sn = -scale * std::sin(phi / 2);
    const Amplitude a = amp[idx];
    amp[idx] = {c * a.real() - sn * a.imag(), c * a.imag() + sn * a.real()};
  }
}

}  // namespace

void apply_entangling_layer(StateVector& state, std::span<const double> theta_xx) {
  const std::size_t n = state.n_qubits;
  check_lengths(state, theta_xx.size(), n * (n - 1) / 2, "apply_entangling_layer");
  bool all_zero = true;
  for (double t : theta_xx) all_zero = all_zero && t == 0.0;
  if (all_zero) return;
  walsh_hadamard(state);
  apply_zz_phases(state, theta_xx, 1.0 / static_cast<double>(state.amplitudes.size()));
  walsh_hadamard(state);
}

// The whole circuit is run in the Hadamard basis, where every Rxx layer is
// diagonal: the first rotation layer becomes a product state, each later
// rotation layer is conjugated by H and fused into one gate per qubit, and
// a single transform returns to the computational basis at the end.
StateVector build_state(const QcbmParameters& params) {
  params.validate();
  const std::size_t n = params.n_qubits;
  StateVector state;
  state.n_qubits = n;
  state.amplitudes.assign(std::size_t{1} << n, Amplitude{0.0, 0.0});
  Amplitude* amp = state.amplitudes.data();
  amp[0] = 1.0;
  for (std::size_t q = 0, len = 1; q < n; ++q, len *= 2) {
    const Gate g = matmul2(kHadamard, rotation(params.layer_x(0)[q], params.layer_z(0)[q]));
    for (std::size_t i = len; i-- > 0;) {
      const Amplitude a = amp[i];
      amp[2 * i] = g[0] * a;
      amp[2 * i + 1] = g[2] * a;
    }
  }
  const double final_scale = std::pow(2.0, -static_cast<double>(n) / 2);
  for (std::size_t l = 0; l < params.n_layers; ++l) {
    const bool last = l + 1 == params.n_layers;
    apply_zz_phases(state, params.layer_xx(l), last ? final_scale : 1.0);
    if (last) break;
    for (std::size_t q = 0; q < n; ++q) {
      const Gate g = matmul2(matmul2(kHadamard, rotation(params.layer_x(l + 1)[q], params.layer_z(l + 1)[q])),
                             kHadamard);
      apply_single(state, q, g[0], g[1], g[2], g[3]);
    }
  }
  walsh_hadamard(state);
  return state;
}

}  // namespace parallel

void apply_rotation_layer(StateVector& state, std::span<const double> theta_x, std::span<const double> theta_z) {
  parallel::apply_rotation_layer(state, theta_x, theta_z);
}

void apply_entangling_layer(StateVector& state, std::span<const double> theta_xx) {
  parallel::apply_entangling_layer(state, theta_xx);
}

StateVector build_state(const QcbmParameters& params) { return parallel::build_state(params); }

}  // namespace qmg::qcbm
