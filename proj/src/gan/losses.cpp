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

#include "qmg/gan/losses.hpp"

#include <cmath>
#include <optional>

#include "qmg/common/error.hpp"
#include "qmg/mol/valence.hpp"
#include "qmg/tensor/ops.hpp"
#include "qmg/tensor/tape.hpp"

namespace qmg::gan {

using ad::Tensor;

namespace {

// Keeps sqrt differentiable when the critic gradient vanishes.
constexpr double kNormFloor = 1e-24;

Tensor per_sample_sq_norm(const Tensor& g) {
  const auto b = g.shape()[0];
  return ad::sum_lastdim(ad::square(ad::reshape(g, {b, g.size() / b})));
}

Tensor leaf_copy(std::vector<double> data, const ad::Shape& shape) {
  return Tensor::parameter(shape, std::move(data));
}

}  // namespace

ScoreFn score_fn(const RelationalParams& params) {
  return [params](const GraphBatch& batch) { return relational_forward(params, batch).score; };
}

Tensor gradient_penalty(const ScoreFn& critic, const GraphBatch& real, const GraphBatch& fake, Rng& rng) {
  check_batch(real);
  check_batch(fake);
  if (real.x.shape() != fake.x.shape()) throw ShapeError("gradient_penalty: real and fake batch sizes differ");
  const auto b = real.size();
  const auto mix = [&](const Tensor& r, const Tensor& f, const std::vector<double>& eps) {
    const auto per = r.size() / b;
    std::vector<double> out(r.size());
    for (std::size_t s = 0; s < b; ++s) {
      for (std::size_t j = 0; j < per; ++j) {
        const auto k = s * per + j;
        out[k] = eps[s] * r.at(k) + (1.0 - eps[s]) * f.at(k);
      }
    }
    return leaf_copy(std::move(out), r.shape());
  };
  std::vector<double> eps(b);
  for (auto& e : eps) e = rng.uniform();
  const GraphBatch hat{mix(real.x, fake.x, eps), mix(real.a, fake.a, eps)};

  std::optional<ad::Tape> local;
  std::optional<ad::TapeScope> scope;
  if (ad::Tape::current() == nullptr) {
    local.emplace();
    scope.emplace(*local);
  }
  const Tensor scores = critic(hat);
  const Tensor wrt[] = {hat.x, hat.a};
  const auto grads = ad::gradients(ad::sum(scores), wrt, /*create_graph=*/true);
  const Tensor sq = ad::add(per_sample_sq_norm(grads[0]), per_sample_sq_norm(grads[1]));
  return ad::mean(ad::square(ad::add_scalar(ad::sqrt(ad::add_scalar(sq, kNormFloor)), -1.0)));
}

Tensor critic_loss(const ScoreFn& critic, const GraphBatch& real, const GraphBatch& fake, double lambda, Rng& rng) {
  const Tensor w = ad::sub(ad::mean(critic(fake)), ad::mean(critic(real)));
  if (lambda == 0.0) return w;
  return ad::add(w, ad::scale(gradient_penalty(critic, real, fake, rng), lambda));
}

Tensor generator_adversarial_loss(const ScoreFn& critic, const GraphBatch& fake) {
  return ad::neg(ad::mean(critic(fake)));
}

WganLosses wgan_losses(const CriticParams& critic, const GeneratorParams& generator, const GraphBatch& real,
                       std::span<const qcbm::Bitstring> z, double lambda, Rng& rng) {
  const auto fake = relax_batch(generator_forward(generator, z));
  const GraphBatch detached{fake.x.detach(), fake.a.detach()};
  const auto d = score_fn(critic);
  return {critic_loss(d, real, detached, lambda, rng), generator_adversarial_loss(d, fake)};
}

Tensor agent_loss(const RewardAgentParams& agent, const GraphBatch& batch, std::span<const double> rewards) {
  check_batch(batch);
  if (rewards.size() != batch.size()) {
    throw InvalidArgument("agent_loss: " + std::to_string(rewards.size()) + " rewards for a batch of " +
                          std::to_string(batch.size()));
  }
  const Tensor target = Tensor::constant({rewards.size()}, std::vector<double>(rewards.begin(), rewards.end()));
  return ad::mean(ad::square(ad::sub(relational_forward(agent, batch).score, target)));
}

void check_weights(std::span<const double> weights) {
  if (weights.empty()) throw InvalidArgument("reward weights: empty");
  double total = 0.0;
  for (const auto w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("reward weights must be finite and nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("reward weights must sum to 1, got " + std::to_string(total));
}

Tensor aggregate_reward(std::span<const RewardAgentParams> agents, std::span<const double> weights,
                        const GraphBatch& batch) {
  check_weights(weights);
  if (agents.size() != weights.size()) throw InvalidArgument("aggregate_reward: one weight per agent required");
  Tensor total;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (weights[i] == 0.0) continue;
    const Tensor term = ad::scale(ad::mean(relational_forward(agents[i], batch).score), weights[i]);
    total = total.defined() ? ad::add(total, term) : term;
  }
  return total;
}

Tensor marl_loss(std::span<const RewardAgentParams> agents, std::span<const double> weights, const GraphBatch& batch) {
  return ad::neg(aggregate_reward(agents, weights, batch));
}

Tensor combined_generator_loss(const Tensor& adv, const Tensor& marl, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidArgument("gamma must lie in [0, 1]");
  if (gamma == 1.0) return ad::scale(adv, 1.0);
  if (gamma == 0.0) return ad::scale(marl, 1.0);
  return ad::add(ad::scale(adv, gamma), ad::scale(marl, 1.0 - gamma));
}

double combined_generator_loss(double adv, double marl, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidArgument("gamma must lie in [0, 1]");
  return gamma * adv + (1.0 - gamma) * marl;
}

std::vector<qcbm::Bitstring> binarize(const Tensor& activations, BinarizeMode mode, Rng& rng) {
  if (activations.rank() != 2) throw ShapeError("binarize: expected [B, n] activations");
  const auto b = activations.shape()[0], n = activations.shape()[1];
  std::vector<qcbm::Bitstring> out(b, qcbm::Bitstring(n));
  for (std::size_t s = 0; s < b; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = activations.at(s * n + i);
      out[s][i] = mode == BinarizeMode::threshold ? (p > 0.5 ? 1 : 0) : (rng.bernoulli(p) ? 1 : 0);
    }
  }
  return out;
}

std::vector<qcbm::Bitstring> bottleneck_bitstrings(const CriticParams& critic, const GraphBatch& batch,
                                                   BinarizeMode mode, Rng& rng) {
  ad::NoGradGuard guard;
  return binarize(relational_forward(critic, batch).bottleneck, mode, rng);
}

std::array<std::vector<double>, kProperties> reward_targets(std::span<const mol::MolecularGraph> graphs,
                                                            const Scorer& scorer) {
  std::array<std::vector<double>, kProperties> out;
  for (auto& v : out) v.assign(graphs.size(), 0.0);
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    if (!mol::valence_valid(graphs[k]).valid) continue;
    const auto s = scorer(graphs[k]);
    out[0][k] = s.qed_norm;
    out[1][k] = s.logp_norm;
    out[2][k] = s.sa_norm;
  }
  return out;
}

}  // namespace qmg::gan
