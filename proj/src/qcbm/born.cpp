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

#include "qmg/qcbm/born.hpp"

#include <algorithm>
#include <sstream>

#include "qmg/common/error.hpp"

namespace qmg::qcbm {

std::uint64_t to_index(const Bitstring& bits) {
  std::uint64_t idx = 0;
  for (const auto b : bits) {
    if (b > 1) throw InvalidArgument("bitstring entries must be 0 or 1");
    idx = (idx << 1) | b;
  }
  return idx;
}

Bitstring from_index(std::uint64_t index, std::size_t n_qubits) {
  Bitstring bits(n_qubits);
  for (std::size_t i = 0; i < n_qubits; ++i) bits[i] = static_cast<std::uint8_t>((index >> (n_qubits - 1 - i)) & 1u);
  return bits;
}

std::vector<double> born_probabilities(const StateVector& state) {
  std::vector<double> p(state.amplitudes.size());
  std::transform(state.amplitudes.begin(), state.amplitudes.end(), p.begin(),
                 [](const Amplitude& a) { return std::norm(a); });
  return p;
}

std::vector<std::uint64_t> sample_indices(std::span<const double> probabilities, std::size_t shots, Rng& rng) {
  if (shots == 0) throw InvalidArgument("sample: shots must be >= 1");
  if (probabilities.empty()) throw InvalidArgument("sample: empty distribution");
  std::vector<double> cdf(probabilities.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    acc += probabilities[i];
    cdf[i] = acc;
  }
  if (!(acc > 0.0)) throw NumericError("sample: distribution has no mass");
  std::vector<std::uint64_t> out(shots);
  for (auto& o : out) {
    const double u = rng.uniform() * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    o = static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
  }
  return out;
}

std::vector<Bitstring> sample(const QcbmParameters& params, std::size_t shots, std::uint64_t seed) {
  const auto probs = born_probabilities(build_state(params));
  Rng rng(seed);
  const auto idx = sample_indices(probs, shots, rng);
  std::vector<Bitstring> out;
  out.reserve(shots);
  for (const auto i : idx) out.push_back(from_index(i, params.n_qubits));
  return out;
}

double clipped_cross_entropy(std::span<const double> probabilities, std::span<const std::uint64_t> targets,
                             double clip_floor) {
  if (targets.empty()) throw InvalidArgument("clipped_cross_entropy: empty target set");
  double acc = 0.0;
  for (const auto t : targets) {
    if (t >= probabilities.size()) throw InvalidArgument("clipped_cross_entropy: target index out of range");
    const double q = probabilities[t];
    acc += q > 0.0 ? std::max(std::log(q), clip_floor) : clip_floor;
  }
  return -acc / static_cast<double>(targets.size());
}

double clipped_cross_entropy(const QcbmParameters& params, std::span<const Bitstring> targets, double clip_floor) {
  std::vector<std::uint64_t> idx;
  idx.reserve(targets.size());
  for (const auto& t : targets) {
    if (t.size() != params.n_qubits) throw InvalidArgument("clipped_cross_entropy: bitstring length mismatch");
    idx.push_back(to_index(t));
  }
  return clipped_cross_entropy(born_probabilities(build_state(params)), idx, clip_floor);
}

void SpsaState::validate() const {
  if (!(a > 0.0) || !(c > 0.0) || A < 0.0 || alpha < 0.0 || gamma < 0.0) {
    throw InvalidArgument("SPSA gains need a, c > 0 and A, alpha, gamma >= 0");
  }
}

SpsaStepResult spsa_step(QcbmParameters& params, const LossFn& loss_fn, SpsaState& state, Rng& rng) {
  state.validate();
  const auto theta = params.flat();
  const double ck = state.c_k();
  const double ak = state.a_k();
  std::vector<int> delta(theta.size());
  for (auto& d : delta) d = rng.rademacher();

  std::vector<double> shifted(theta.size());
  QcbmParameters probe = params;
  for (std::size_t i = 0; i < theta.size(); ++i) shifted[i] = theta[i] + ck * delta[i];
  probe.set_flat(shifted);
  const double plus = loss_fn(probe);
  for (std::size_t i = 0; i < theta.size(); ++i) shifted[i] = theta[i] - ck * delta[i];
  probe.set_flat(shifted);
  const double minus = loss_fn(probe);
  if (!std::isfinite(plus) || !std::isfinite(minus)) {
    std::ostringstream msg;
    msg << "spsa_step: non-finite loss at iteration " << state.k << " (L+ = " << plus << ", L- = " << minus << ")";
    throw NumericError(msg.str());
  }

  const double diff = (plus - minus) / (2.0 * ck);
  for (std::size_t i = 0; i < theta.size(); ++i) shifted[i] = theta[i] - ak * diff / delta[i];
  params.set_flat(shifted);
  ++state.k;
  return {plus, minus};
}

TrainTrace train_to_target(QcbmParameters params, std::span<const Bitstring> targets, std::size_t iterations,
                           std::size_t shots, std::uint64_t seed, SpsaState spsa, double clip_floor) {
  if (targets.empty()) throw InvalidArgument("train_to_target: empty target set");
  params.validate();
  std::vector<std::uint64_t> idx;
  idx.reserve(targets.size());
  for (const auto& t : targets) {
    if (t.size() != params.n_qubits) throw InvalidArgument("train_to_target: bitstring length mismatch");
    idx.push_back(to_index(t));
  }
  const LossFn loss = [&](const QcbmParameters& p) {
    return clipped_cross_entropy(born_probabilities(build_state(p)), idx, clip_floor);
  };
  Rng rng(seed);
  TrainTrace trace;
  trace.losses.reserve(iterations);
  for (std::size_t it = 0; it < iterations; ++it) {
    spsa_step(params, loss, spsa, rng);
    trace.losses.push_back(loss(params));
  }
  const auto probs = born_probabilities(build_state(params));
  for (const auto i : sample_indices(probs, shots, rng)) trace.samples.push_back(from_index(i, params.n_qubits));
  trace.params = std::move(params);
  return trace;
}

}  // namespace qmg::qcbm
