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
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qmg/gan/losses.hpp"

namespace qmg::pipeline {

enum class Objective { qed, logp, sa, marl };

/// Throws InvalidArgument for anything other than qed, logp, sa or marl.
Objective parse_objective(std::string_view name);
std::string_view objective_name(Objective o);
/// One-hot for a single property, (0.4, 0.3, 0.3) for marl.
std::array<double, gan::kProperties> objective_weights(Objective o);

/// Training hyperparameters. Text form is one `key = value` per line; see
/// configs/full.cfg for every key.
struct TrainConfig {
  std::size_t epochs = 300;
  std::size_t batch_size = 32;
  double lr = 1e-3;
  double lambda_gp = 10.0;
  std::size_t critic_steps = 5;
  /// Generator loss mix before and from rl_start_epoch.
  double gamma_gan = 1.0;
  double gamma_rl = 0.0;
  std::size_t rl_start_epoch = 150;
  std::size_t rl_pretrain_epochs = 150;
  /// Keep fitting the agents on generated batches during the RL phase.
  bool agent_online = true;

  std::size_t n_qubits = 16;
  std::size_t qcbm_layers = 2;
  std::size_t spsa_iters = 50;
  double spsa_a = 0.2;
  double spsa_c = 0.1;
  /// Bottleneck bitstrings kept per epoch as the prior's training targets.
  std::size_t qcbm_shots = 1000;
  std::size_t freeze_epoch = 225;
  gan::BinarizeMode binarize = gan::BinarizeMode::stochastic;

  std::array<double, gan::kProperties> weights = {0.4, 0.3, 0.3};

  std::vector<std::size_t> gen_hidden = {128, 256};
  std::vector<std::size_t> critic_conv = {64, 32};
  std::size_t readout = 128;

  std::size_t eval_samples = 1000;
  /// Training molecules taken from the dataset (0 = all) and the number
  /// after them held out for agent evaluation.
  std::size_t max_molecules = 0;
  std::size_t holdout = 100;
  std::size_t checkpoint_every = 10;
  std::filesystem::path dataset;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument naming the offending key.
  void validate() const;
  double gamma_at(std::size_t epoch) const { return epoch < rl_start_epoch ? gamma_gan : gamma_rl; }
  gan::GeneratorConfig generator_config() const;
  gan::RelationalConfig critic_config() const;

  /// Every key, in a fixed order, so equal configs give equal text.
  std::string to_text() const;
};

/// Parses `key = value` lines; '#' starts a comment. Keys not present keep
/// their defaults. Throws ParseError (offset = line number) for malformed
/// lines, unknown keys or bad values, and InvalidArgument if the result
/// fails validate().
TrainConfig parse_config(std::string_view text);

/// Throws IoError if unreadable. A relative `dataset` path is resolved
/// against the config file's directory.
TrainConfig load_config(const std::filesystem::path& path);

}  // namespace qmg::pipeline
