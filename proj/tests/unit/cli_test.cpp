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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "qmg/common/text.hpp"
#include "qmg/pipeline/checkpoint.hpp"
#include "qmg/pipeline/config.hpp"
#include "qmg/pipeline/dataset.hpp"
#include "qmg/pipeline/metrics.hpp"
#include "qmg/pipeline/trainer.hpp"

namespace qmg::pipeline {
namespace {

namespace fs = std::filesystem;

struct Result {
  int status = -1;
  std::string out;
};

Result run(const std::string& args, const std::string& stdin_file = "") {
  std::string cmd = std::string("\"") + QMG_CLI_PATH + "\" " + args;
  if (!stdin_file.empty()) cmd += " < \"" + stdin_file + "\"";
  cmd += " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& l : split(text, '\n'))
    if (!l.empty()) out.emplace_back(l);
  return out;
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("qmg_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path tiny_config_file(const fs::path& dir) {
  TrainConfig c;
  c.epochs = 2;
  c.batch_size = 8;
  c.critic_steps = 1;
  c.rl_start_epoch = 1;
  c.rl_pretrain_epochs = 1;
  c.n_qubits = 4;
  c.spsa_iters = 2;
  c.qcbm_shots = 32;
  c.freeze_epoch = 2;
  c.gen_hidden = {8};
  c.critic_conv = {8};
  c.readout = 8;
  c.eval_samples = 20;
  c.max_molecules = 16;
  c.holdout = 8;
  c.checkpoint_every = 1;
  c.seed = 3;
  c.dataset = default_dataset_path();
  const auto path = dir / "tiny.cfg";
  std::ofstream(path) << c.to_text();
  return path;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path configs_dir() { return fs::path(QMG_FIXTURE_DIR).parent_path().parent_path() / "configs"; }

TEST(Cli, SamplePrintsRequestedCount) {
  const auto r = run("sample --n 10");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(lines_of(r.out).size(), 10u);
}

TEST(Cli, SampleIsSeeded) {
  EXPECT_EQ(run("sample --n 5 --seed 4").out, run("sample --n 5 --seed 4").out);
}

TEST(Cli, MissingConfigFails) {
  const auto r = run("train --config /nonexistent/qmg.cfg");
  EXPECT_NE(r.status, 0);
}

TEST(Cli, UnknownSubcommandFails) {
  EXPECT_NE(run("frobnicate").status, 0);
  EXPECT_NE(run("").status, 0);
}

TEST(Cli, BadObjectiveRejected) { EXPECT_NE(run("sample --objective potency").status, 0); }

TEST(Cli, PropsWritesCsv) {
  const auto dir = scratch_dir("props");
  const auto in = dir / "in.smi";
  std::ofstream(in) << "CCO\nc1ccccc1\n";
  const auto r = run("props", in.string());
  EXPECT_EQ(r.status, 0);
  const auto rows = lines_of(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], "smiles,qed,logp,sa,qed_norm,logp_norm,sa_norm");
  EXPECT_EQ(rows[1].rfind("CCO,", 0), 0u);
  EXPECT_EQ(split(rows[1], ',').size(), 7u);
}

TEST(Cli, PropsReportsBadInput) {
  const auto dir = scratch_dir("props_bad");
  const auto in = dir / "in.smi";
  std::ofstream(in) << "CCO\nC(C\n";
  const auto r = run("props", in.string());
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(lines_of(r.out).size(), 2u);
}

TEST(Cli, IngestReportsCounts) {
  const auto r = run("ingest");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("982 kept"), std::string::npos);
}

TEST(Cli, TrainObjectiveSetsWeightsAndEvalReadsCheckpoint) {
  const auto dir = scratch_dir("train");
  const auto cfg = tiny_config_file(dir);
  const auto r = run("train -q --config " + cfg.string() + " --objective qed --out-dir " + dir.string());
  ASSERT_EQ(r.status, 0);
  const auto state = TrainState::from_checkpoint(Checkpoint::load(dir / "checkpoint_last.ckpt"));
  EXPECT_EQ(state.epoch, 2u);
  EXPECT_EQ(state.config.weights[0], 1.0);
  EXPECT_EQ(state.config.weights[1], 0.0);
  EXPECT_EQ(state.config.weights[2], 0.0);
  EXPECT_EQ(lines_of(read_file(dir / "metrics.csv")).size(), 3u);

  const auto e = run("eval --checkpoint " + (dir / "checkpoint_last.ckpt").string() + " -n 20");
  ASSERT_EQ(e.status, 0);
  const auto rows = lines_of(e.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], kMetricsHeader);
}

TEST(Cli, ResumeMatchesUninterrupted) {
  const auto a = scratch_dir("resume_a");
  const auto b = scratch_dir("resume_b");
  const auto cfg = tiny_config_file(a);
  ASSERT_EQ(run("train -q --config " + cfg.string() + " --out-dir " + a.string()).status, 0);
  ASSERT_EQ(run("train -q --config " + cfg.string() + " --stop-after 1 --out-dir " + b.string()).status, 0);
  ASSERT_EQ(run("train -q --resume " + (b / "checkpoint_0001.ckpt").string() + " --out-dir " + b.string()).status, 0);
  EXPECT_EQ(read_file(a / "metrics.csv"), read_file(b / "metrics.csv"));
  EXPECT_EQ(read_file(a / "checkpoint_last.ckpt"), read_file(b / "checkpoint_last.ckpt"));
}

TEST(Cli, ResumeFromMissingCheckpointFails) {
  EXPECT_NE(run("train --resume /nonexistent/x.ckpt").status, 0);
}

TEST(Configs, BundledFilesParse) {
  const auto full = load_config(configs_dir() / "full.cfg");
  TrainConfig defaults;
  defaults.dataset = full.dataset;
  EXPECT_EQ(full.to_text(), defaults.to_text());
  EXPECT_TRUE(fs::exists(full.dataset));

  const auto desk = load_config(configs_dir() / "desk.cfg");
  EXPECT_EQ(desk.epochs, 50u);
  EXPECT_EQ(desk.rl_start_epoch, 25u);
  EXPECT_EQ(desk.max_molecules, 500u);
  EXPECT_TRUE(fs::exists(desk.dataset));
}

}  // namespace
}  // namespace qmg::pipeline
