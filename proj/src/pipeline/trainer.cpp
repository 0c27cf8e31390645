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

#include "qmg/pipeline/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "qmg/common/error.hpp"
#include "qmg/common/stats.hpp"
#include "qmg/mol/valence.hpp"
#include "qmg/qcbm/circuit.hpp"
#include "qmg/tensor/tape.hpp"

namespace qmg::pipeline {

using ad::Tensor;

namespace {

constexpr std::size_t kEvalChunk = 256;
constexpr const char* kAgentNames[gan::kProperties] = {"agent_qed", "agent_logp", "agent_sa"};

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<Tensor> tensors(const gan::ParameterList& list) { return gan::tensors_of(list); }

void clear_grads(const gan::ParameterList& list) {
  for (auto p : tensors(list)) p.zero_grad();
}

void require_finite(double value, const std::string& what, std::size_t epoch, std::size_t batch) {
  if (!std::isfinite(value)) {
    throw NumericError("non-finite " + what + " loss (" + std::to_string(value) + ") at epoch " +
                       std::to_string(epoch) + ", batch " + std::to_string(batch));
  }
}

std::vector<qcbm::Bitstring> draw_latent(std::span<const double> probs, std::size_t n_qubits, std::size_t n, Rng& rng) {
  std::vector<qcbm::Bitstring> z;
  z.reserve(n);
  for (const auto i : qcbm::sample_indices(probs, n, rng)) z.push_back(qcbm::from_index(i, n_qubits));
  return z;
}

gan::GraphBatch detached(const gan::GraphBatch& b) { return {b.x.detach(), b.a.detach()}; }

void put_params(Checkpoint& c, const std::string& prefix, const gan::ParameterList& list) {
  for (const auto& p : list) c.set_array(prefix + "." + p.name, p.value.data());
}

void get_params(const Checkpoint& c, const std::string& prefix, const gan::ParameterList& list) {
  for (const auto& p : list) {
    Tensor t = p.value;
    c.read_into(prefix + "." + p.name, t.mutable_data());
  }
}

void put_adam(Checkpoint& c, const std::string& prefix, const ad::OptimizerState& s) {
  const double meta[] = {s.lr, s.beta1, s.beta2, s.eps, static_cast<double>(s.step)};
  c.set_array(prefix + ".meta", meta);
  for (std::size_t i = 0; i < s.m.size(); ++i) {
    c.set_array(prefix + ".m" + std::to_string(i), s.m[i]);
    c.set_array(prefix + ".v" + std::to_string(i), s.v[i]);
  }
}

void get_adam(const Checkpoint& c, const std::string& prefix, ad::OptimizerState& s) {
  std::array<double, 5> meta{};
  c.read_into(prefix + ".meta", meta);
  s.lr = meta[0];
  s.beta1 = meta[1];
  s.beta2 = meta[2];
  s.eps = meta[3];
  s.step = static_cast<std::uint64_t>(meta[4]);
  for (std::size_t i = 0; i < s.m.size(); ++i) {
    c.read_into(prefix + ".m" + std::to_string(i), s.m[i]);
    c.read_into(prefix + ".v" + std::to_string(i), s.v[i]);
  }
}

std::vector<std::size_t> shuffled(std::size_t n, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);
  return idx;
}

// Contiguous batches of the permutation; a trailing partial batch is dropped
// unless it is the only one.
std::vector<std::vector<std::size_t>> make_batches(const std::vector<std::size_t>& order, std::size_t batch_size) {
  std::vector<std::vector<std::size_t>> out;
  const std::size_t n_batches = std::max<std::size_t>(1, order.size() / batch_size);
  for (std::size_t b = 0; b < n_batches; ++b) {
    const auto begin = order.begin() + static_cast<std::ptrdiff_t>(b * batch_size);
    const auto end = order.begin() + static_cast<std::ptrdiff_t>(std::min(order.size(), (b + 1) * batch_size));
    out.emplace_back(begin, end);
  }
  return out;
}

std::vector<mol::MolecularGraph> pick(const Dataset& d, std::span<const std::size_t> idx) {
  std::vector<mol::MolecularGraph> out;
  out.reserve(idx.size());
  for (const auto i : idx) out.push_back(d.graphs[i]);
  return out;
}

double property_of(const chem::PropertyScores& s, std::size_t p) {
  switch (static_cast<gan::Property>(p)) {
    case gan::Property::qed: return s.qed_norm;
    case gan::Property::logp: return s.logp_norm;
    case gan::Property::sa: return s.sa_norm;
  }
  return 0.0;
}

}  // namespace

Rng stream_rng(std::uint64_t seed, std::uint64_t epoch, Stream s) {
  return Rng(splitmix(splitmix(splitmix(seed) ^ epoch) ^ static_cast<std::uint64_t>(s)));
}

TrainState TrainState::init(const TrainConfig& config) {
  config.validate();
  Rng rng = stream_rng(config.seed, 0, Stream::init);
  TrainState s;
  s.config = config;
  s.generator = gan::GeneratorParams::init(config.generator_config(), rng);
  s.critic = gan::CriticParams::init(config.critic_config(), gan::Head::linear, rng);
  for (std::size_t p = 0; p < gan::kProperties; ++p) {
    s.agents.push_back(gan::RewardAgentParams::init(config.critic_config(), gan::Head::sigmoid, rng));
  }
  s.generator_opt = ad::make_adam(tensors(s.generator.parameters()), config.lr);
  s.critic_opt = ad::make_adam(tensors(s.critic.parameters()), config.lr);
  for (const auto& a : s.agents) s.agent_opts.push_back(ad::make_adam(tensors(a.parameters()), config.lr));
  s.qcbm = qcbm::QcbmParameters::random(config.n_qubits, config.qcbm_layers, rng);
  s.spsa.a = config.spsa_a;
  s.spsa.c = config.spsa_c;
  return s;
}

Checkpoint TrainState::to_checkpoint() const {
  Checkpoint c;
  c.set_text("config", config.to_text());
  const double counters[] = {static_cast<double>(epoch), agents_pretrained ? 1.0 : 0.0};
  c.set_array("counters", counters);
  put_params(c, "generator", generator.parameters());
  put_params(c, "critic", critic.parameters());
  for (std::size_t p = 0; p < agents.size(); ++p) put_params(c, kAgentNames[p], agents[p].parameters());
  put_adam(c, "adam.generator", generator_opt);
  put_adam(c, "adam.critic", critic_opt);
  for (std::size_t p = 0; p < agent_opts.size(); ++p) put_adam(c, std::string("adam.") + kAgentNames[p], agent_opts[p]);
  c.set_array("qcbm.theta_x", qcbm.theta_x);
  c.set_array("qcbm.theta_z", qcbm.theta_z);
  c.set_array("qcbm.theta_xx", qcbm.theta_xx);
  const double spsa_values[] = {static_cast<double>(spsa.k), spsa.a, spsa.c, spsa.A, spsa.alpha, spsa.gamma};
  c.set_array("spsa", spsa_values);
  return c;
}

TrainState TrainState::from_checkpoint(const Checkpoint& c) {
  TrainConfig config;
  try {
    config = parse_config(c.text("config"));
  } catch (const ParseError& e) {
    throw IoError(std::string("checkpoint config: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw IoError(std::string("checkpoint config: ") + e.what());
  }
  TrainState s;
  s.config = config;
  s.generator = gan::GeneratorParams::zeros(config.generator_config());
  s.critic = gan::CriticParams::zeros(config.critic_config(), gan::Head::linear);
  for (std::size_t p = 0; p < gan::kProperties; ++p) {
    s.agents.push_back(gan::RewardAgentParams::zeros(config.critic_config(), gan::Head::sigmoid));
  }
  s.generator_opt = ad::make_adam(tensors(s.generator.parameters()), config.lr);
  s.critic_opt = ad::make_adam(tensors(s.critic.parameters()), config.lr);
  for (const auto& a : s.agents) s.agent_opts.push_back(ad::make_adam(tensors(a.parameters()), config.lr));

  std::array<double, 2> counters{};
  c.read_into("counters", counters);
  s.epoch = static_cast<std::size_t>(counters[0]);
  s.agents_pretrained = counters[1] != 0.0;
  get_params(c, "generator", s.generator.parameters());
  get_params(c, "critic", s.critic.parameters());
  for (std::size_t p = 0; p < s.agents.size(); ++p) get_params(c, kAgentNames[p], s.agents[p].parameters());
  get_adam(c, "adam.generator", s.generator_opt);
  get_adam(c, "adam.critic", s.critic_opt);
  for (std::size_t p = 0; p < s.agent_opts.size(); ++p) get_adam(c, std::string("adam.") + kAgentNames[p], s.agent_opts[p]);
  s.qcbm = qcbm::QcbmParameters::zeros(config.n_qubits, config.qcbm_layers);
  c.read_into("qcbm.theta_x", s.qcbm.theta_x);
  c.read_into("qcbm.theta_z", s.qcbm.theta_z);
  c.read_into("qcbm.theta_xx", s.qcbm.theta_xx);
  std::array<double, 6> spsa{};
  c.read_into("spsa", spsa);
  s.spsa.k = static_cast<std::uint64_t>(spsa[0]);
  s.spsa.a = spsa[1];
  s.spsa.c = spsa[2];
  s.spsa.A = spsa[3];
  s.spsa.alpha = spsa[4];
  s.spsa.gamma = spsa[5];
  return s;
}

std::vector<std::size_t> active_agents(const TrainConfig& config) {
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < gan::kProperties; ++p) {
    if (config.weights[p] > 0.0) out.push_back(p);
  }
  return out;
}

DataSplit split_dataset(const Dataset& all, const TrainConfig& config) {
  const std::size_t n_train = config.max_molecules == 0 ? all.size() : std::min(config.max_molecules, all.size());
  DataSplit s;
  s.train = all.slice(0, n_train);
  s.holdout = all.slice(n_train, std::min(config.holdout, all.size() - n_train));
  return s;
}

Trainer::Trainer(TrainState state, const Dataset& train)
    : state_(std::move(state)), train_(train), train_keys_(train.key_set()) {
  if (train_.size() == 0) throw InvalidArgument("trainer: empty training set");
}

gan::Scorer Trainer::scorer() {
  return [this](const mol::MolecularGraph& g) { return cache_.scores(g); };
}

PretrainReport Trainer::pretrain_agents(std::span<const std::size_t> agents, const Dataset* holdout) {
  PretrainReport report;
  report.agents.assign(agents.begin(), agents.end());
  report.losses.resize(agents.size());
  std::array<std::vector<double>, gan::kProperties> targets;
  for (const auto& g : train_.graphs) {
    const auto s = cache_.scores(g);
    for (std::size_t p = 0; p < gan::kProperties; ++p) targets[p].push_back(property_of(s, p));
  }
  Rng rng = stream_rng(state_.config.seed, state_.epoch, Stream::pretrain);
  for (std::size_t e = 0; e < state_.config.rl_pretrain_epochs; ++e) {
    const auto batches = make_batches(shuffled(train_.size(), rng), state_.config.batch_size);
    std::vector<double> totals(agents.size(), 0.0);
    for (const auto& idx : batches) {
      const auto batch = gan::one_hot_batch(pick(train_, idx));
      for (std::size_t k = 0; k < agents.size(); ++k) {
        const auto p = agents[k];
        std::vector<double> y;
        for (const auto i : idx) y.push_back(targets[p][i]);
        ad::Tape tape;
        ad::TapeScope scope(tape);
        const Tensor loss = gan::agent_loss(state_.agents[p], batch, y);
        require_finite(loss.item(), std::string(kAgentNames[p]) + " pretraining", state_.epoch, e);
        totals[k] += loss.item();
        ad::backward(loss);
        auto params = tensors(state_.agents[p].parameters());
        ad::adam_step(params, state_.agent_opts[p]);
      }
    }
    for (std::size_t k = 0; k < agents.size(); ++k) report.losses[k].push_back(totals[k] / batches.size());
  }
  if (holdout != nullptr && holdout->size() > 0) {
    ad::NoGradGuard no_grad;
    const auto batch = gan::one_hot_batch(holdout->graphs);
    for (const auto p : agents) {
      const Tensor score = gan::relational_forward(state_.agents[p], batch).score;
      const auto pred = score.data();
      std::vector<double> truth;
      for (const auto& g : holdout->graphs) truth.push_back(property_of(cache_.scores(g), p));
      double mse = 0.0;
      for (std::size_t i = 0; i < truth.size(); ++i) mse += (pred[i] - truth[i]) * (pred[i] - truth[i]);
      report.holdout_mse.push_back(mse / truth.size());
      report.holdout_spearman.push_back(spearman(std::vector<double>(pred.begin(), pred.end()), truth));
    }
  }
  state_.agents_pretrained = true;
  return report;
}

MetricsReport Trainer::run_epoch() {
  auto& s = state_;
  const auto& cfg = s.config;
  const std::size_t epoch = s.epoch;
  const double gamma = cfg.gamma_at(epoch);
  const auto active = active_agents(cfg);
  if (gamma < 1.0 && !s.agents_pretrained) pretrain_agents(active);

  Rng shuffle_rng = stream_rng(cfg.seed, epoch, Stream::shuffle);
  Rng latent_rng = stream_rng(cfg.seed, epoch, Stream::latent);
  Rng critic_rng = stream_rng(cfg.seed, epoch, Stream::critic);

  const auto probs = qcbm::born_probabilities(qcbm::build_state(s.qcbm));
  const auto batches = make_batches(shuffled(train_.size(), shuffle_rng), cfg.batch_size);
  auto gen_params = tensors(s.generator.parameters());
  auto critic_params = tensors(s.critic.parameters());
  std::vector<gan::GraphBatch> seen;

  for (std::size_t b = 0; b < batches.size(); ++b) {
    const auto real = gan::one_hot_batch(pick(train_, batches[b]));
    const std::size_t n = batches[b].size();
    const auto critic = gan::score_fn(s.critic);

    for (std::size_t k = 0; k < cfg.critic_steps; ++k) {
      const auto z = draw_latent(probs, cfg.n_qubits, n, latent_rng);
      gan::GraphBatch fake;
      {
        ad::NoGradGuard no_grad;
        fake = gan::relax_batch(gan::generator_forward(s.generator, z));
      }
      ad::Tape tape;
      ad::TapeScope scope(tape);
      const Tensor loss = gan::critic_loss(critic, real, fake, cfg.lambda_gp, critic_rng);
      require_finite(loss.item(), "critic", epoch, b);
      ad::backward(loss);
      ad::adam_step(critic_params, s.critic_opt);
    }

    const auto z = draw_latent(probs, cfg.n_qubits, n, latent_rng);
    gan::GeneratorOutput out;
    gan::GraphBatch fake;
    {
      ad::Tape tape;
      ad::TapeScope scope(tape);
      out = gan::generator_forward(s.generator, z);
      fake = gan::relax_batch(out);
      Tensor adv, marl;
      if (gamma > 0.0) adv = gan::generator_adversarial_loss(critic, fake);
      if (gamma < 1.0) {
        marl = gan::marl_loss(s.agents, cfg.weights, fake);
        ++marl_evaluations_;
      }
      const Tensor loss = gan::combined_generator_loss(adv, marl, gamma);
      require_finite(loss.item(), "generator", epoch, b);
      ad::backward(loss);
      clear_grads(s.critic.parameters());
      for (const auto& a : s.agents) clear_grads(a.parameters());
      ad::adam_step(gen_params, s.generator_opt);
    }
    const auto fake_const = detached(fake);

    if (gamma < 1.0 && cfg.agent_online) {
      const auto graphs = gan::decode_batch(out);
      const auto targets = gan::reward_targets(graphs, scorer());
      for (const auto p : active) {
        ad::Tape tape;
        ad::TapeScope scope(tape);
        const Tensor loss = gan::agent_loss(s.agents[p], fake_const, targets[p]);
        require_finite(loss.item(), kAgentNames[p], epoch, b);
        ad::backward(loss);
        auto params = tensors(s.agents[p].parameters());
        ad::adam_step(params, s.agent_opts[p]);
      }
    }
    seen.push_back(real);
    seen.push_back(fake_const);
  }

  if (epoch < cfg.freeze_epoch) {
    Rng bits_rng = stream_rng(cfg.seed, epoch, Stream::bottleneck);
    std::vector<qcbm::Bitstring> targets;
    for (const auto& batch : seen) {
      if (targets.size() >= cfg.qcbm_shots) break;
      for (auto& bits : gan::bottleneck_bitstrings(s.critic, batch, cfg.binarize, bits_rng)) {
        if (targets.size() >= cfg.qcbm_shots) break;
        targets.push_back(std::move(bits));
      }
    }
    Rng spsa_rng = stream_rng(cfg.seed, epoch, Stream::spsa);
    const qcbm::LossFn loss = [&](const qcbm::QcbmParameters& p) { return qcbm::clipped_cross_entropy(p, targets); };
    for (std::size_t it = 0; it < cfg.spsa_iters; ++it) qcbm::spsa_step(s.qcbm, loss, s.spsa, spsa_rng);
  }

  ++s.epoch;
  Rng eval_rng = stream_rng(cfg.seed, epoch, Stream::eval);
  auto report = evaluate(cfg.eval_samples, eval_rng);
  report.epoch = epoch;
  return report;
}

std::vector<mol::MolecularGraph> sample_graphs(const TrainState& s, std::size_t n, Rng& rng) {
  const auto probs = qcbm::born_probabilities(qcbm::build_state(s.qcbm));
  const auto z = draw_latent(probs, s.config.n_qubits, n, rng);
  std::vector<mol::MolecularGraph> graphs;
  graphs.reserve(n);
  ad::NoGradGuard no_grad;
  for (std::size_t begin = 0; begin < n; begin += kEvalChunk) {
    const std::size_t count = std::min(kEvalChunk, n - begin);
    const auto out = gan::generator_forward(s.generator, std::span(z).subspan(begin, count));
    for (auto& g : gan::decode_batch(out)) graphs.push_back(std::move(g));
  }
  return graphs;
}

MetricsReport Trainer::evaluate(std::size_t n, Rng& rng) {
  const auto graphs = sample(n, rng);
  auto report = evaluate_graphs(graphs, train_keys_, cache_, rng);
  report.epoch = state_.epoch == 0 ? 0 : state_.epoch - 1;
  return report;
}

TrainState run_training(const TrainConfig& config, const Dataset& all, const RunOptions& options) {
  TrainState state = options.resume ? TrainState::from_checkpoint(Checkpoint::load(*options.resume))
                                    : TrainState::init(config);
  const auto split = split_dataset(all, state.config);
  const std::size_t stop = std::min(options.stop_after.value_or(state.config.epochs), state.config.epochs);
  std::filesystem::create_directories(options.out_dir);
  MetricsLog log(options.out_dir / "metrics.csv", state.epoch);
  Trainer trainer(std::move(state), split.train);
  const auto checkpoint_path = [&](const std::string& tag) { return options.out_dir / ("checkpoint_" + tag + ".ckpt"); };

  while (trainer.state().epoch < stop) {
    const Checkpoint before = trainer.state().to_checkpoint();
    MetricsReport report;
    try {
      report = trainer.run_epoch();
    } catch (const NumericError&) {
      before.save(checkpoint_path("abort"));
      throw;
    }
    log.append(report);
    if (options.on_epoch) options.on_epoch(report);
    const auto& cfg = trainer.state().config;
    if (cfg.checkpoint_every > 0 && trainer.state().epoch % cfg.checkpoint_every == 0) {
      char tag[16];
      std::snprintf(tag, sizeof tag, "%04zu", trainer.state().epoch);
      trainer.state().to_checkpoint().save(checkpoint_path(tag));
    }
  }
  trainer.state().to_checkpoint().save(checkpoint_path("last"));
  return trainer.state();
}

}  // namespace qmg::pipeline
