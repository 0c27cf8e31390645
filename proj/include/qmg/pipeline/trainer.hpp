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
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qmg/gan/losses.hpp"
#include "qmg/gan/networks.hpp"
#include "qmg/pipeline/checkpoint.hpp"
#include "qmg/pipeline/config.hpp"
#include "qmg/pipeline/dataset.hpp"
#include "qmg/pipeline/metrics.hpp"
#include "qmg/qcbm/born.hpp"
#include "qmg/tensor/adam.hpp"

namespace qmg::pipeline {

/// Random streams of a run. Every epoch re-derives its streams from
/// (seed, epoch, stream), so the training state at an epoch boundary is
/// fully described by the parameters, optimizer moments and epoch counter.
enum class Stream : std::uint64_t { init = 1, shuffle, latent, critic, bottleneck, spsa, eval, pretrain, sample };

Rng stream_rng(std::uint64_t seed, std::uint64_t epoch, Stream s);

/// Everything that persists between epochs.
struct TrainState {
  TrainConfig config;
  gan::GeneratorParams generator;
  gan::CriticParams critic;
  std::vector<gan::RewardAgentParams> agents;  // qed, logp, sa
  ad::OptimizerState generator_opt;
  ad::OptimizerState critic_opt;
  std::vector<ad::OptimizerState> agent_opts;
  qcbm::QcbmParameters qcbm;
  qcbm::SpsaState spsa;
  std::size_t epoch = 0;  // completed epochs
  bool agents_pretrained = false;

  /// Fresh networks and prior drawn from the config seed.
  static TrainState init(const TrainConfig& config);

  Checkpoint to_checkpoint() const;
  /// Throws IoError if an entry is missing or has the wrong size.
  static TrainState from_checkpoint(const Checkpoint& c);
};

/// Indices of agents with nonzero weight.
std::vector<std::size_t> active_agents(const TrainConfig& config);

struct PretrainReport {
  std::vector<std::size_t> agents;
  /// Mean training loss per epoch, one curve per trained agent.
  std::vector<std::vector<double>> losses;
  /// Held-out MSE and Spearman correlation per trained agent (empty
  /// without a holdout set).
  std::vector<double> holdout_mse;
  std::vector<double> holdout_spearman;
};

/// Decodes `n` molecules from fresh prior samples of `state`.
std::vector<mol::MolecularGraph> sample_graphs(const TrainState& state, std::size_t n, Rng& rng);

/// Molecules split into the training set and an optional holdout.
struct DataSplit {
  Dataset train;
  Dataset holdout;
};

/// First max_molecules molecules for training (all when 0), the next
/// `holdout` for evaluation of the reward agents.
DataSplit split_dataset(const Dataset& all, const TrainConfig& config);

/// Runs epochs on a TrainState. The dataset must outlive the trainer.
class Trainer {
 public:
  Trainer(TrainState state, const Dataset& train);

  const TrainState& state() const { return state_; }
  TrainState& state() { return state_; }

  /// Trains the listed agents on normalized properties of the training
  /// molecules for rl_pretrain_epochs epochs and marks them pretrained.
  PretrainReport pretrain_agents(std::span<const std::size_t> agents, const Dataset* holdout = nullptr);

  /// One full epoch: adversarial and reward updates per batch, the prior
  /// update from bottleneck targets, then evaluation. Pretrains the active
  /// agents first when the epoch uses rewards and they are not pretrained.
  /// Throws NumericError on a non-finite loss; the state is then partially
  /// updated and should be discarded.
  MetricsReport run_epoch();

  /// Metrics of `n` fresh samples with the current parameters.
  MetricsReport evaluate(std::size_t n, Rng& rng);

  std::vector<mol::MolecularGraph> sample(std::size_t n, Rng& rng) const { return sample_graphs(state_, n, rng); }

  /// Times the reward-network loss was built during generator updates.
  std::size_t marl_evaluations() const { return marl_evaluations_; }
  MoleculeCache& cache() { return cache_; }

 private:
  gan::Scorer scorer();

  TrainState state_;
  const Dataset& train_;
  std::set<std::string> train_keys_;
  MoleculeCache cache_;
  std::size_t marl_evaluations_ = 0;
};

struct RunOptions {
  std::filesystem::path out_dir;
  /// Resume from this checkpoint instead of starting fresh.
  std::optional<std::filesystem::path> resume;
  /// Stop after this many completed epochs (defaults to config.epochs).
  std::optional<std::size_t> stop_after;
  std::function<void(const MetricsReport&)> on_epoch;
};

/// Trains with metrics appended to out_dir/metrics.csv, periodic
/// checkpoint_NNNN.ckpt files and a final checkpoint_last.ckpt. On a
/// non-finite loss the state from the start of the failing epoch is saved
/// as checkpoint_abort.ckpt before NumericError propagates.
TrainState run_training(const TrainConfig& config, const Dataset& all, const RunOptions& options);

}  // namespace qmg::pipeline
