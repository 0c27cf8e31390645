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

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "qmg/chem/rewards.hpp"
#include "qmg/common/error.hpp"
#include "qmg/common/text.hpp"
#include "qmg/mol/valence.hpp"
#include "qmg/pipeline/checkpoint.hpp"
#include "qmg/pipeline/config.hpp"
#include "qmg/pipeline/dataset.hpp"
#include "qmg/pipeline/metrics.hpp"
#include "qmg/pipeline/trainer.hpp"
#include "qmg/smiles/smiles.hpp"

namespace fs = std::filesystem;
using namespace qmg;
using namespace qmg::pipeline;

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::string objective;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "Training config file (key = value lines)");
  cmd->add_option("--seed", f.seed, "Random seed (overrides the config)");
  cmd->add_option("--out-dir", f.out_dir, "Directory for outputs");
  cmd->add_option("--objective", f.objective, "Reward weights: qed, logp, sa or marl")
      ->check(CLI::IsMember({"qed", "logp", "sa", "marl"}));
}

TrainConfig resolve_config(const CommonFlags& f) {
  TrainConfig c;
  if (!f.config.empty()) {
    if (!fs::exists(f.config)) throw IoError("config file not found: " + f.config);
    c = load_config(f.config);
  }
  if (c.dataset.empty()) c.dataset = default_dataset_path();
  if (f.seed) c.seed = *f.seed;
  if (!f.objective.empty()) c.weights = objective_weights(parse_objective(f.objective));
  c.validate();
  return c;
}

void print_stats(const Dataset& d) {
  const auto& s = d.stats;
  std::printf("%s: %zu lines, %zu kept, dropped %zu size, %zu element, %zu malformed, %zu valence, %zu duplicate\n",
              d.source.string().c_str(), s.lines, s.kept, s.size, s.element, s.malformed, s.valence, s.duplicate);
}

TrainState load_state(const std::string& path) { return TrainState::from_checkpoint(Checkpoint::load(path)); }

// Adopts pretrained agents and their optimizer moments from another run.
void adopt_agents(TrainState& s, const TrainState& from) {
  if (from.config.critic_config().conv != s.config.critic_config().conv ||
      from.config.readout != s.config.readout || from.config.n_qubits != s.config.n_qubits) {
    throw InvalidArgument("agent checkpoint has different network widths");
  }
  s.agents = from.agents;
  s.agent_opts = from.agent_opts;
  s.agents_pretrained = from.agents_pretrained;
}

int cmd_ingest(const std::string& in, const std::string& out, bool verbose) {
  const auto d = ingest(in.empty() ? default_dataset_path() : fs::path(in));
  print_stats(d);
  if (verbose) {
    for (const auto& line : d.log) std::fprintf(stderr, "%s\n", line.c_str());
  }
  if (!out.empty()) {
    std::string text;
    for (const auto& k : d.keys) text += k + "\n";
    write_file_atomic(out, text);
  }
  return 0;
}

int cmd_pretrain(const CommonFlags& f) {
  const auto config = resolve_config(f);
  const auto all = ingest(config.dataset);
  const auto split = split_dataset(all, config);
  Trainer trainer(TrainState::init(config), split.train);
  const std::vector<std::size_t> agents = {0, 1, 2};
  const auto report = trainer.pretrain_agents(agents, &split.holdout);
  const char* names[] = {"qed", "logp", "sa"};
  std::printf("agent,final_loss,holdout_mse,holdout_spearman\n");
  for (std::size_t k = 0; k < agents.size(); ++k) {
    const double mse = report.holdout_mse.empty() ? 0.0 : report.holdout_mse[k];
    const double rho = report.holdout_spearman.empty() ? 0.0 : report.holdout_spearman[k];
    std::printf("%s,%.6f,%.6f,%.4f\n", names[agents[k]], report.losses[k].back(), mse, rho);
  }
  fs::create_directories(f.out_dir);
  const auto path = fs::path(f.out_dir) / "agents.ckpt";
  trainer.state().to_checkpoint().save(path);
  std::printf("saved %s\n", path.string().c_str());
  return 0;
}

int cmd_train(const CommonFlags& f, const std::string& resume, const std::string& agents,
              std::optional<std::size_t> stop_after, bool quiet) {
  RunOptions options;
  options.out_dir = f.out_dir;
  options.stop_after = stop_after;
  if (!quiet) {
    options.on_epoch = [](const MetricsReport& r) { std::printf("%s\n", metrics_row(r).c_str()); std::fflush(stdout); };
  }
  TrainConfig config;
  if (!resume.empty()) {
    options.resume = resume;
    config = load_state(resume).config;
  } else {
    config = resolve_config(f);
  }
  const auto all = ingest(config.dataset);
  if (!agents.empty()) {
    if (!resume.empty()) throw InvalidArgument("--agents cannot be combined with --resume");
    auto state = TrainState::init(config);
    adopt_agents(state, load_state(agents));
    fs::create_directories(f.out_dir);
    const auto start = fs::path(f.out_dir) / "checkpoint_start.ckpt";
    state.to_checkpoint().save(start);
    options.resume = start;
  }
  if (!quiet) std::printf("%s\n", kMetricsHeader);
  const auto state = run_training(config, all, options);
  std::printf("completed %zu epochs; metrics in %s\n", state.epoch, (fs::path(f.out_dir) / "metrics.csv").string().c_str());
  return 0;
}

int cmd_sample(const CommonFlags& f, const std::string& checkpoint, std::size_t n) {
  const TrainState state = checkpoint.empty() ? TrainState::init(resolve_config(f)) : load_state(checkpoint);
  Rng rng = stream_rng(f.seed.value_or(state.config.seed), state.epoch, Stream::sample);
  for (const auto& g : sample_graphs(state, n, rng)) {
    std::printf("%s\n", mol::valence_valid(g).valid ? smiles::write(g).c_str() : "INVALID");
  }
  return 0;
}

int cmd_eval(const CommonFlags& f, const std::string& checkpoint, std::optional<std::size_t> n) {
  auto state = load_state(checkpoint);
  const auto all = ingest(state.config.dataset);
  const auto split = split_dataset(all, state.config);
  const std::size_t samples = n.value_or(state.config.eval_samples);
  Trainer trainer(std::move(state), split.train);
  Rng rng = stream_rng(f.seed.value_or(trainer.state().config.seed), trainer.state().epoch, Stream::eval);
  const auto r = trainer.evaluate(samples, rng);
  std::printf("%s\n%s\n", kMetricsHeader, metrics_row(r).c_str());
  if (r.empty_valid_set) std::fprintf(stderr, "warning: no valid molecules among %zu samples\n", r.samples);
  return 0;
}

int cmd_props() {
  std::printf("smiles,qed,logp,sa,qed_norm,logp_norm,sa_norm\n");
  int failures = 0;
  std::string line;
  while (std::getline(std::cin, line)) {
    const auto text = std::string(trim(line));
    if (text.empty() || text[0] == '#') continue;
    const auto smiles_text = text.substr(0, text.find_first_of(" \t"));
    try {
      const auto g = smiles::parse(smiles_text);
      if (!mol::valence_valid(g).valid) throw InvalidArgument("not a single valid molecule");
      const auto s = chem::score_molecule(g);
      std::printf("%s,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", smiles_text.c_str(), s.qed_raw, s.logp_raw, s.sa_raw, s.qed_norm,
                  s.logp_norm, s.sa_norm);
    } catch (const Error& e) {
      std::fprintf(stderr, "%s: %s\n", smiles_text.c_str(), e.what());
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QCBM-prior molecular GAN with reward agents"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  std::string ingest_in, ingest_out;
  bool ingest_verbose = false;
  auto* ingest_cmd = app.add_subcommand("ingest", "Filter and deduplicate a SMILES file");
  ingest_cmd->add_option("--in", ingest_in, "SMILES file (defaults to the bundled subset)");
  ingest_cmd->add_option("--out", ingest_out, "Write canonical SMILES of kept molecules here");
  ingest_cmd->add_flag("-v,--verbose", ingest_verbose, "Print every rejected line");

  CommonFlags pretrain_flags;
  auto* pretrain_cmd = app.add_subcommand("pretrain-rl", "Pretrain the three reward agents on the dataset");
  add_common(pretrain_cmd, pretrain_flags);

  CommonFlags train_flags;
  std::string resume, agents;
  std::optional<std::size_t> stop_after;
  bool quiet = false;
  auto* train_cmd = app.add_subcommand("train", "Train the generator, critic, agents and prior");
  add_common(train_cmd, train_flags);
  train_cmd->add_option("--resume", resume, "Continue from a checkpoint");
  train_cmd->add_option("--agents", agents, "Start from agents saved by pretrain-rl");
  train_cmd->add_option("--stop-after", stop_after, "Stop once this many epochs are complete");
  train_cmd->add_flag("-q,--quiet", quiet, "Do not echo metrics rows");

  CommonFlags sample_flags;
  std::string sample_ckpt;
  std::size_t sample_n = 10;
  auto* sample_cmd = app.add_subcommand("sample", "Print generated molecules as SMILES (INVALID for failed decodes)");
  add_common(sample_cmd, sample_flags);
  sample_cmd->add_option("--checkpoint", sample_ckpt, "Checkpoint to sample from (fresh weights if omitted)");
  sample_cmd->add_option("-n,--n", sample_n, "Number of molecules")->check(CLI::PositiveNumber);

  CommonFlags eval_flags;
  std::string eval_ckpt;
  std::optional<std::size_t> eval_n;
  auto* eval_cmd = app.add_subcommand("eval", "Metrics of a checkpoint");
  add_common(eval_cmd, eval_flags);
  eval_cmd->add_option("--checkpoint", eval_ckpt, "Checkpoint to evaluate")->required();
  eval_cmd->add_option("-n,--n", eval_n, "Number of samples (defaults to eval_samples)");

  app.add_subcommand("props", "Read SMILES from stdin and write property CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*ingest_cmd) return cmd_ingest(ingest_in, ingest_out, ingest_verbose);
    if (*pretrain_cmd) return cmd_pretrain(pretrain_flags);
    if (*train_cmd) return cmd_train(train_flags, resume, agents, stop_after, quiet);
    if (*sample_cmd) return cmd_sample(sample_flags, sample_ckpt, sample_n);
    if (*eval_cmd) return cmd_eval(eval_flags, eval_ckpt, eval_n);
    return cmd_props();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
