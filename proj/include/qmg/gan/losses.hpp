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

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "qmg/chem/rewards.hpp"
#include "qmg/common/rng.hpp"
#include "qmg/gan/networks.hpp"
#include "qmg/qcbm/born.hpp"

namespace qmg::gan {

/// Any differentiable critic: batch -> scores [B].
using ScoreFn = std::function<ad::Tensor(const GraphBatch&)>;

ScoreFn score_fn(const RelationalParams& params);

/// mean_b (||grad_xhat D(xhat_b)||_2 - 1)^2 with xhat = eps*real + (1-eps)*fake,
/// one eps ~ U(0,1) per sample. The gradient covers both x and a. The
/// result stays differentiable with respect to the critic parameters.
ad::Tensor gradient_penalty(const ScoreFn& critic, const GraphBatch& real, const GraphBatch& fake, Rng& rng);

/// mean D(fake) - mean D(real) + lambda * gradient_penalty.
ad::Tensor critic_loss(const ScoreFn& critic, const GraphBatch& real, const GraphBatch& fake, double lambda, Rng& rng);

/// -mean D(fake).
ad::Tensor generator_adversarial_loss(const ScoreFn& critic, const GraphBatch& fake);

struct WganLosses {
  ad::Tensor critic;
  ad::Tensor generator;
};

/// Both WGAN-GP losses for one batch. Fake graphs are the relaxed generator
/// output, so the generator loss reaches the generator weights.
WganLosses wgan_losses(const CriticParams& critic, const GeneratorParams& generator, const GraphBatch& real,
                       std::span<const qcbm::Bitstring> z, double lambda, Rng& rng);

/// Mean squared error between the agent output and `rewards`. Throws
/// InvalidArgument on a length mismatch.
ad::Tensor agent_loss(const RewardAgentParams& agent, const GraphBatch& batch, std::span<const double> rewards);

/// Throws InvalidArgument unless every weight is >= 0 and they sum to 1
/// within 1e-9.
void check_weights(std::span<const double> weights);

/// mean_b sum_i w_i f_i(x_b).
ad::Tensor aggregate_reward(std::span<const RewardAgentParams> agents, std::span<const double> weights,
                            const GraphBatch& batch);

/// -aggregate_reward.
ad::Tensor marl_loss(std::span<const RewardAgentParams> agents, std::span<const double> weights,
                     const GraphBatch& batch);

/// gamma * adv + (1 - gamma) * marl. Throws InvalidArgument unless
/// gamma is in [0, 1].
ad::Tensor combined_generator_loss(const ad::Tensor& adv, const ad::Tensor& marl, double gamma);
double combined_generator_loss(double adv, double marl, double gamma);

enum class BinarizeMode { stochastic, threshold };

/// Bit i of sample b: Bernoulli(act[b, i]) or act[b, i] > 0.5.
std::vector<qcbm::Bitstring> binarize(const ad::Tensor& activations, BinarizeMode mode, Rng& rng);

std::vector<qcbm::Bitstring> bottleneck_bitstrings(const CriticParams& critic, const GraphBatch& batch,
                                                   BinarizeMode mode, Rng& rng);

inline constexpr std::size_t kProperties = 3;
enum class Property { qed = 0, logp = 1, sa = 2 };

using Scorer = std::function<chem::PropertyScores(const mol::MolecularGraph&)>;

/// Normalized rewards per property (qed, logp, sa) and molecule. Molecules
/// failing valence_valid get exactly 0 and are never passed to `scorer`.
std::array<std::vector<double>, kProperties> reward_targets(std::span<const mol::MolecularGraph> graphs,
                                                            const Scorer& scorer);

}  // namespace qmg::gan
