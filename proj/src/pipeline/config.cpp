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

#include "qmg/pipeline/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "qmg/common/error.hpp"
#include "qmg/common/text.hpp"

namespace qmg::pipeline {

namespace {

std::size_t to_size(std::string_view v) {
  std::size_t out = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw InvalidArgument("expected a nonnegative integer");
  return out;
}

std::uint64_t to_u64(std::string_view v) {
  std::uint64_t out = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw InvalidArgument("expected a nonnegative integer");
  return out;
}

double to_double(std::string_view v) {
  const std::string s(v);
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("expected a number");
  }
  if (used != s.size() || !std::isfinite(out)) throw InvalidArgument("expected a finite number");
  return out;
}

bool to_bool(std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw InvalidArgument("expected true or false");
}

std::vector<std::size_t> to_sizes(std::string_view v) {
  std::vector<std::size_t> out;
  for (const auto& part : split(v, ',')) out.push_back(to_size(trim(part)));
  return out;
}

std::string join(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

using Setter = std::function<void(TrainConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"epochs", [](TrainConfig& c, std::string_view v) { c.epochs = to_size(v); }},
      {"batch_size", [](TrainConfig& c, std::string_view v) { c.batch_size = to_size(v); }},
      {"lr", [](TrainConfig& c, std::string_view v) { c.lr = to_double(v); }},
      {"lambda_gp", [](TrainConfig& c, std::string_view v) { c.lambda_gp = to_double(v); }},
      {"critic_steps", [](TrainConfig& c, std::string_view v) { c.critic_steps = to_size(v); }},
      {"gamma_gan", [](TrainConfig& c, std::string_view v) { c.gamma_gan = to_double(v); }},
      {"gamma_rl", [](TrainConfig& c, std::string_view v) { c.gamma_rl = to_double(v); }},
      {"rl_start_epoch", [](TrainConfig& c, std::string_view v) { c.rl_start_epoch = to_size(v); }},
      {"rl_pretrain_epochs", [](TrainConfig& c, std::string_view v) { c.rl_pretrain_epochs = to_size(v); }},
      {"agent_online", [](TrainConfig& c, std::string_view v) { c.agent_online = to_bool(v); }},
      {"n_qubits", [](TrainConfig& c, std::string_view v) { c.n_qubits = to_size(v); }},
      {"qcbm_layers", [](TrainConfig& c, std::string_view v) { c.qcbm_layers = to_size(v); }},
      {"spsa_iters", [](TrainConfig& c, std::string_view v) { c.spsa_iters = to_size(v); }},
      {"spsa_a", [](TrainConfig& c, std::string_view v) { c.spsa_a = to_double(v); }},
      {"spsa_c", [](TrainConfig& c, std::string_view v) { c.spsa_c = to_double(v); }},
      {"qcbm_shots", [](TrainConfig& c, std::string_view v) { c.qcbm_shots = to_size(v); }},
      {"freeze_epoch", [](TrainConfig& c, std::string_view v) { c.freeze_epoch = to_size(v); }},
      {"binarize",
       [](TrainConfig& c, std::string_view v) {
         if (v == "stochastic") {
           c.binarize = gan::BinarizeMode::stochastic;
         } else if (v == "threshold") {
           c.binarize = gan::BinarizeMode::threshold;
         } else {
           throw InvalidArgument("expected stochastic or threshold");
         }
       }},
      {"objective",
       [](TrainConfig& c, std::string_view v) {
         const auto w = objective_weights(parse_objective(v));
         c.weights = w;
       }},
      {"w_qed", [](TrainConfig& c, std::string_view v) { c.weights[0] = to_double(v); }},
      {"w_logp", [](TrainConfig& c, std::string_view v) { c.weights[1] = to_double(v); }},
      {"w_sa", [](TrainConfig& c, std::string_view v) { c.weights[2] = to_double(v); }},
      {"gen_hidden", [](TrainConfig& c, std::string_view v) { c.gen_hidden = to_sizes(v); }},
      {"critic_conv", [](TrainConfig& c, std::string_view v) { c.critic_conv = to_sizes(v); }},
      {"readout", [](TrainConfig& c, std::string_view v) { c.readout = to_size(v); }},
      {"eval_samples", [](TrainConfig& c, std::string_view v) { c.eval_samples = to_size(v); }},
      {"max_molecules", [](TrainConfig& c, std::string_view v) { c.max_molecules = to_size(v); }},
      {"holdout", [](TrainConfig& c, std::string_view v) { c.holdout = to_size(v); }},
      {"checkpoint_every", [](TrainConfig& c, std::string_view v) { c.checkpoint_every = to_size(v); }},
      {"dataset", [](TrainConfig& c, std::string_view v) { c.dataset = std::string(v); }},
      {"seed", [](TrainConfig& c, std::string_view v) { c.seed = to_u64(v); }},
  };
  return table;
}

void require(bool ok, const char* key, const char* what) {
  if (!ok) throw InvalidArgument(std::string("config ") + key + ": " + what);
}

}  // namespace

Objective parse_objective(std::string_view name) {
  if (name == "qed") return Objective::qed;
  if (name == "logp") return Objective::logp;
  if (name == "sa") return Objective::sa;
  if (name == "marl") return Objective::marl;
  throw InvalidArgument("unknown objective '" + std::string(name) + "' (expected qed, logp, sa or marl)");
}

std::string_view objective_name(Objective o) {
  switch (o) {
    case Objective::qed: return "qed";
    case Objective::logp: return "logp";
    case Objective::sa: return "sa";
    case Objective::marl: return "marl";
  }
  return "marl";
}

std::array<double, gan::kProperties> objective_weights(Objective o) {
  switch (o) {
    case Objective::qed: return {1.0, 0.0, 0.0};
    case Objective::logp: return {0.0, 1.0, 0.0};
    case Objective::sa: return {0.0, 0.0, 1.0};
    case Objective::marl: return {0.4, 0.3, 0.3};
  }
  return {0.4, 0.3, 0.3};
}

void TrainConfig::validate() const {
  require(epochs > 0, "epochs", "must be positive");
  require(batch_size > 0, "batch_size", "must be positive");
  require(lr > 0, "lr", "must be positive");
  require(lambda_gp >= 0, "lambda_gp", "must be nonnegative");
  require(critic_steps > 0, "critic_steps", "must be positive");
  require(gamma_gan >= 0 && gamma_gan <= 1, "gamma_gan", "must lie in [0, 1]");
  require(gamma_rl >= 0 && gamma_rl <= 1, "gamma_rl", "must lie in [0, 1]");
  require(n_qubits > 0 && n_qubits <= 24, "n_qubits", "must lie in 1..24");
  require(qcbm_layers > 0, "qcbm_layers", "must be positive");
  require(spsa_a > 0 && spsa_c > 0, "spsa_a/spsa_c", "must be positive");
  require(qcbm_shots > 0, "qcbm_shots", "must be positive");
  require(freeze_epoch <= epochs, "freeze_epoch", "must not exceed epochs");
  require(eval_samples > 0, "eval_samples", "must be positive");
  require(!gen_hidden.empty() && !critic_conv.empty() && readout > 0, "widths", "layers must be nonempty");
  for (const auto w : gen_hidden) require(w > 0, "gen_hidden", "widths must be positive");
  for (const auto w : critic_conv) require(w > 0, "critic_conv", "widths must be positive");
  try {
    gan::check_weights(weights);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(std::string("config weights: ") + e.what());
  }
}

gan::GeneratorConfig TrainConfig::generator_config() const { return {n_qubits, gen_hidden}; }

gan::RelationalConfig TrainConfig::critic_config() const { return {critic_conv, readout, n_qubits}; }

std::string TrainConfig::to_text() const {
  std::ostringstream os;
  os << "epochs = " << epochs << "\n"
     << "batch_size = " << batch_size << "\n"
     << "lr = " << fmt(lr) << "\n"
     << "lambda_gp = " << fmt(lambda_gp) << "\n"
     << "critic_steps = " << critic_steps << "\n"
     << "gamma_gan = " << fmt(gamma_gan) << "\n"
     << "gamma_rl = " << fmt(gamma_rl) << "\n"
     << "rl_start_epoch = " << rl_start_epoch << "\n"
     << "rl_pretrain_epochs = " << rl_pretrain_epochs << "\n"
     << "agent_online = " << (agent_online ? "true" : "false") << "\n"
     << "n_qubits = " << n_qubits << "\n"
     << "qcbm_layers = " << qcbm_layers << "\n"
     << "spsa_iters = " << spsa_iters << "\n"
     << "spsa_a = " << fmt(spsa_a) << "\n"
     << "spsa_c = " << fmt(spsa_c) << "\n"
     << "qcbm_shots = " << qcbm_shots << "\n"
     << "freeze_epoch = " << freeze_epoch << "\n"
     << "binarize = " << (binarize == gan::BinarizeMode::stochastic ? "stochastic" : "threshold") << "\n"
     << "w_qed = " << fmt(weights[0]) << "\n"
     << "w_logp = " << fmt(weights[1]) << "\n"
     << "w_sa = " << fmt(weights[2]) << "\n"
     << "gen_hidden = " << join(gen_hidden) << "\n"
     << "critic_conv = " << join(critic_conv) << "\n"
     << "readout = " << readout << "\n"
     << "eval_samples = " << eval_samples << "\n"
     << "max_molecules = " << max_molecules << "\n"
     << "holdout = " << holdout << "\n"
     << "checkpoint_every = " << checkpoint_every << "\n"
     << "dataset = " << dataset.string() << "\n"
     << "seed = " << seed << "\n";
  return os.str();
}

TrainConfig parse_config(std::string_view text) {
  TrainConfig c;
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("config line " + std::to_string(line_no) + ": expected key = value", line_no);
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ParseError("config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'", line_no);
    }
    try {
      it->second(c, value);
    } catch (const InvalidArgument& e) {
      throw ParseError("config line " + std::to_string(line_no) + ": " + std::string(key) + ": " + e.what(), line_no);
    }
  }
  c.validate();
  return c;
}

TrainConfig load_config(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  std::string text;
  for (const auto& l : lines) text += l + "\n";
  auto c = parse_config(text);
  if (!c.dataset.empty() && c.dataset.is_relative()) c.dataset = path.parent_path() / c.dataset;
  return c;
}

}  // namespace qmg::pipeline
