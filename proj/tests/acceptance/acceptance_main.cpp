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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. An optional argument restricts the run to criteria
// whose name contains it.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "qmg/chem/properties.hpp"
#include "qmg/chem/sa.hpp"
#include "qmg/common/error.hpp"
#include "qmg/common/rng.hpp"
#include "qmg/common/text.hpp"
#include "qmg/gan/losses.hpp"
#include "qmg/gan/networks.hpp"
#include "qmg/mol/graph.hpp"
#include "qmg/mol/valence.hpp"
#include "qmg/pipeline/metrics.hpp"
#include "qmg/pipeline/trainer.hpp"
#include "qmg/qcbm/born.hpp"
#include "qmg/qcbm/circuit.hpp"
#include "qmg/smiles/smiles.hpp"
#include "qmg/tensor/ops.hpp"
#include "qmg/tensor/tape.hpp"

namespace {

using namespace qmg;
namespace fs = std::filesystem;
using ad::Tensor;
using mol::MolecularGraph;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------- oracles

using Amplitude = std::complex<double>;
using Matrix = std::vector<std::vector<Amplitude>>;
const Amplitude kI{0.0, 1.0};

Matrix identity(std::size_t d) {
  Matrix m(d, std::vector<Amplitude>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) m[i][i] = 1.0;
  return m;
}

Matrix mul(const Matrix& a, const Matrix& b) {
  const std::size_t d = a.size();
  Matrix c(d, std::vector<Amplitude>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t j = 0; j < d; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  const std::size_t da = a.size(), db = b.size();
  Matrix c(da * db, std::vector<Amplitude>(da * db, 0.0));
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j)
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l) c[i * db + k][j * db + l] = a[i][j] * b[k][l];
  return c;
}

Matrix on_qubits(const std::vector<Matrix>& gates) {
  Matrix m = gates[0];
  for (std::size_t q = 1; q < gates.size(); ++q) m = kron(m, gates[q]);
  return m;
}

Matrix rx(double t) { return {{std::cos(t / 2), -kI * std::sin(t / 2)}, {-kI * std::sin(t / 2), std::cos(t / 2)}}; }
Matrix rz(double t) { return {{std::exp(-kI * (t / 2)), 0.0}, {0.0, std::exp(kI * (t / 2))}}; }

Matrix rxx(std::size_t n, std::size_t i, std::size_t j, double t) {
  std::vector<Matrix> gates(n, identity(2));
  gates[i] = gates[j] = Matrix{{0.0, 1.0}, {1.0, 0.0}};
  const Matrix xx = on_qubits(gates);
  Matrix m = identity(std::size_t{1} << n);
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < m.size(); ++c) m[r][c] = std::cos(t / 2) * m[r][c] - kI * std::sin(t / 2) * xx[r][c];
  return m;
}

// Full circuit unitary applied to |0...0>, qubit 0 most significant.
std::vector<Amplitude> unitary_oracle(const qcbm::QcbmParameters& p) {
  const std::size_t n = p.n_qubits;
  Matrix u = identity(std::size_t{1} << n);
  for (std::size_t l = 0; l < p.n_layers; ++l) {
    std::vector<Matrix> rot(n);
    for (std::size_t q = 0; q < n; ++q) rot[q] = mul(rz(p.theta_z[l * n + q]), rx(p.theta_x[l * n + q]));
    u = mul(on_qubits(rot), u);
    std::size_t pair = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j, ++pair) u = mul(rxx(n, i, j, p.theta_xx[l * p.n_pairs() + pair]), u);
  }
  std::vector<Amplitude> out(u.size());
  for (std::size_t r = 0; r < u.size(); ++r) out[r] = u[r][0];
  return out;
}

std::vector<double> ranks(const std::vector<double>& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j);
    i = j + 1;
  }
  return r;
}

double spearman_rho(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = ranks(a), rb = ranks(b);
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / ra.size();
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / rb.size();
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

// Backtracking graph isomorphism on (element, bond type).
bool isomorphic(const MolecularGraph& g, const MolecularGraph& h) {
  const auto ga = g.atom_indices(), ha = h.atom_indices();
  if (ga.size() != ha.size()) return false;
  std::vector<int> map(ga.size(), -1);
  std::vector<bool> used(ha.size(), false);
  std::function<bool(std::size_t)> extend = [&](std::size_t k) {
    if (k == ga.size()) return true;
    for (std::size_t c = 0; c < ha.size(); ++c) {
      if (used[c] || g.atom(ga[k]) != h.atom(ha[c]) || g.degree(ga[k]) != h.degree(ha[c])) continue;
      bool ok = true;
      for (std::size_t j = 0; j < k && ok; ++j) ok = g.bond(ga[k], ga[j]) == h.bond(ha[c], ha[static_cast<std::size_t>(map[j])]);
      if (!ok) continue;
      used[c] = true;
      map[k] = static_cast<int>(c);
      if (extend(k + 1)) return true;
      used[c] = false;
    }
    return false;
  };
  return extend(0);
}

struct OracleRow {
  std::string smiles;
  double qed = 0, logp = 0, sa = 0;
};

std::vector<OracleRow> load_fixture() {
  const auto lines = read_lines(fs::path(QMG_FIXTURE_DIR) / "qm9_oracle.csv");
  std::vector<OracleRow> rows;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    if (trim(lines[k]).empty()) continue;
    const auto f = split(trim(lines[k]), ',');
    rows.push_back({f.at(0), std::stod(f.at(2)), std::stod(f.at(3)), std::stod(f.at(4))});
  }
  return rows;
}

// ---------------------------------------------------------------- QCBM

Outcome qcbm_correctness() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_amp = 0.0, worst_norm = 0.0;
  std::size_t cases = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    for (std::uint64_t trial = 0; trial < 50; ++trial, ++cases) {
      Rng rng(1000 * n + trial);
      const auto p = qcbm::QcbmParameters::random(n, 1 + trial % 3, rng);
      const auto oracle = unitary_oracle(p);
      for (const auto& state : {qcbm::build_state(p), qcbm::reference::build_state(p)}) {
        for (std::size_t i = 0; i < oracle.size(); ++i) worst_amp = std::max(worst_amp, std::abs(oracle[i] - state.amplitudes[i]));
        const auto probs = qcbm::born_probabilities(state);
        worst_norm = std::max(worst_norm, std::abs(std::accumulate(probs.begin(), probs.end(), 0.0) - 1.0));
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst_amp < 1e-10 && worst_norm < 1e-9 && secs < 10.0,
          std::to_string(cases) + " parameter sets, max |amp diff| " + fmt("%.2e", worst_amp) + ", max |sum p - 1| " +
              fmt("%.2e", worst_norm) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome qcbm_learning() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<qcbm::Bitstring> targets;
  for (int i = 0; i < 1000; ++i) targets.push_back(i % 2 ? qcbm::Bitstring{1, 1} : qcbm::Bitstring{0, 0});
  Rng init(16);
  const auto trace = qcbm::train_to_target(qcbm::QcbmParameters::random(2, 2, init), targets, 500, 1000, 17);
  std::array<double, 4> freq{};
  for (const auto& s : trace.samples) freq[qcbm::to_index(s)] += 1.0 / static_cast<double>(trace.samples.size());
  const double tv = 0.5 * (std::abs(freq[0] - 0.5) + freq[1] + freq[2] + std::abs(freq[3] - 0.5));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {tv < 0.05 && secs < 60.0, "TV distance " + fmt("%.4f", tv) + " after 500 SPSA iterations (" +
                                        std::to_string(trace.samples.size()) + " shots), " + fmt("%.2f", secs) + " s"};
}

// ---------------------------------------------------------------- autodiff

using LossFn = std::function<Tensor()>;

// Largest relative error between backward() and central differences over
// every entry of `wrt` (or `per_tensor` random entries for large tensors).
double fd_error(const LossFn& loss, const std::vector<Tensor>& wrt, std::size_t per_tensor = 0) {
  for (auto t : wrt) t.zero_grad();
  {
    ad::Tape tape;
    ad::TapeScope scope(tape);
    ad::backward(loss());
  }
  const auto eval = [&] {
    ad::Tape tape;
    ad::TapeScope scope(tape);
    return loss().item();
  };
  Rng rng(99);
  double worst = 0.0;
  const double h = 1e-5;
  for (auto t : wrt) {
    const std::vector<double> analytic(t.grad().begin(), t.grad().end());
    const std::size_t count = per_tensor == 0 ? t.size() : std::min(per_tensor, t.size());
    for (std::size_t c = 0; c < count; ++c) {
      const auto i = count == t.size() ? c : static_cast<std::size_t>(rng.below(t.size()));
      const double orig = t.data()[i];
      t.mutable_data()[i] = orig + h;
      const double up = eval();
      t.mutable_data()[i] = orig - h;
      const double down = eval();
      t.mutable_data()[i] = orig;
      const double numeric = (up - down) / (2 * h);
      worst = std::max(worst, std::abs(numeric - analytic[i]) / std::max({std::abs(numeric), std::abs(analytic[i]), 1e-6}));
    }
  }
  return worst;
}

Tensor random_leaf(Rng& rng, ad::Shape shape, double lo = -2.0, double hi = 2.0) {
  std::vector<double> v(ad::numel(shape));
  for (auto& x : v) x = rng.uniform(lo, hi);
  return Tensor::parameter(std::move(shape), std::move(v));
}

void jitter(const gan::ParameterList& params, Rng& rng) {
  for (const auto& p : params) {
    auto t = p.value;
    for (auto& v : t.mutable_data()) v += rng.uniform(-0.1, 0.1);
  }
}

std::vector<qcbm::Bitstring> random_bits(Rng& rng, std::size_t count, std::size_t n = 16) {
  std::vector<qcbm::Bitstring> z(count, qcbm::Bitstring(n));
  for (auto& b : z)
    for (auto& v : b) v = rng.bernoulli(0.5) ? 1 : 0;
  return z;
}

gan::GraphBatch toy_batch() {
  const std::vector<MolecularGraph> g = {smiles::parse("CCO"), smiles::parse("CC=O"), smiles::parse("C1CC1")};
  return gan::one_hot_batch(g);
}

Outcome autodiff() {
  struct Case {
    const char* name;
    std::vector<ad::Shape> shapes;
    std::function<Tensor(const std::vector<Tensor>&)> op;
    double lo = -2.0, hi = 2.0;
  };
  const std::vector<Case> primitives = {
      {"matmul", {{4, 3}, {3, 2}}, [](const auto& v) { return ad::matmul(v[0], v[1]); }},
      {"matmul_rank3", {{2, 4, 3}, {3, 2}}, [](const auto& v) { return ad::matmul(v[0], v[1]); }},
      {"matmul_batched", {{2, 3, 4}, {2, 4, 2}}, [](const auto& v) { return ad::matmul(v[0], v[1]); }},
      {"add", {{2, 3, 4}, {4}}, [](const auto& v) { return ad::add(v[0], v[1]); }},
      {"sub", {{3, 4}, {3, 4}}, [](const auto& v) { return ad::sub(v[0], v[1]); }},
      {"multiply", {{5, 3}, {3}}, [](const auto& v) { return ad::multiply(v[0], v[1]); }},
      {"scale", {{6}}, [](const auto& v) { return ad::scale(v[0], -1.7); }},
      {"add_scalar", {{6}}, [](const auto& v) { return ad::add_scalar(v[0], 0.3); }},
      {"neg", {{6}}, [](const auto& v) { return ad::neg(v[0]); }},
      {"tanh", {{3, 3}}, [](const auto& v) { return ad::tanh(v[0]); }},
      {"sigmoid", {{3, 3}}, [](const auto& v) { return ad::sigmoid(v[0]); }},
      {"relu", {{3, 3}}, [](const auto& v) { return ad::relu(v[0]); }},
      {"square", {{7}}, [](const auto& v) { return ad::square(v[0]); }},
      {"sqrt", {{7}}, [](const auto& v) { return ad::sqrt(v[0]); }, 0.5, 2.0},
      {"reciprocal", {{7}}, [](const auto& v) { return ad::reciprocal(v[0]); }, 0.5, 2.0},
      {"softmax", {{3, 5}}, [](const auto& v) { return ad::softmax_lastdim(v[0]); }},
      {"sum", {{3, 5}}, [](const auto& v) { return ad::scale(ad::sum(v[0]), 1.0); }},
      {"mean", {{3, 5}}, [](const auto& v) { return ad::mean(v[0]); }},
      {"concat", {{2, 3}, {2, 2}}, [](const auto& v) { return ad::concat(v, 1); }},
      {"slice", {{4, 5}}, [](const auto& v) { return ad::slice(v[0], 1, 1, 3); }},
      {"reshape", {{4, 3}}, [](const auto& v) { return ad::reshape(v[0], {2, 6}); }},
      {"swap_axes", {{2, 3, 4}}, [](const auto& v) { return ad::swap_axes(v[0], 0, 2); }},
      {"transpose", {{3, 4}}, [](const auto& v) { return ad::transpose(v[0]); }},
      {"sum_lastdim", {{3, 4}}, [](const auto& v) { return ad::sum_lastdim(v[0]); }},
      {"expand_lastdim", {{3}}, [](const auto& v) { return ad::expand_lastdim(v[0], 4); }},
      {"broadcast_to", {{3}}, [](const auto& v) { return ad::broadcast_to(v[0], {2, 3}); }},
      {"sum_to", {{2, 3}}, [](const auto& v) { return ad::sum_to(v[0], {3}); }},
  };
  double worst = 0.0;
  std::string worst_name;
  const auto note = [&](const std::string& name, double e) {
    if (e > worst || worst_name.empty()) {
      worst = std::max(worst, e);
      worst_name = name;
    }
  };
  for (const auto& c : primitives) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      Rng rng(seed * 977);
      std::vector<Tensor> in;
      for (const auto& s : c.shapes) in.push_back(random_leaf(rng, s, c.lo, c.hi));
      const Tensor probe = c.op(in);
      std::vector<double> w(probe.size());
      for (auto& x : w) x = rng.uniform(-1.0, 1.0);
      const Tensor weights = Tensor::constant(probe.shape(), w);
      note(c.name, fd_error([&] { return ad::sum(ad::multiply(c.op(in), weights)); }, in));
    }
  }

  Rng rng(20);
  const auto real = toy_batch();
  const auto gen = gan::GeneratorParams::init({}, rng);
  jitter(gen.parameters(), rng);
  const auto z = random_bits(rng, 3);
  gan::GraphBatch fake;
  {
    ad::NoGradGuard guard;
    const auto f = gan::relax_batch(gan::generator_forward(gen, random_bits(rng, 3)));
    fake = {f.x.detach(), f.a.detach()};
  }
  const auto critic = gan::CriticParams::init({}, gan::Head::linear, rng);
  jitter(critic.parameters(), rng);
  std::vector<gan::RewardAgentParams> agents;
  for (int i = 0; i < 3; ++i) {
    agents.push_back(gan::RewardAgentParams::init({}, gan::Head::sigmoid, rng));
    jitter(agents.back().parameters(), rng);
  }
  const std::vector<double> w = {0.4, 0.3, 0.3};
  auto agent_params = gan::tensors_of(agents[0].parameters());
  for (std::size_t i = 1; i < agents.size(); ++i) {
    const auto t = gan::tensors_of(agents[i].parameters());
    agent_params.insert(agent_params.end(), t.begin(), t.end());
  }
  const auto gen_params = gan::tensors_of(gen.parameters());

  note("critic loss + GP", fd_error(
                               [&] {
                                 Rng eps(5);
                                 return gan::critic_loss(gan::score_fn(critic), real, fake, 10.0, eps);
                               },
                               gan::tensors_of(critic.parameters()), 4));
  const std::vector<double> rewards = {0.2, 0.9, 0.0};
  note("agent MSE", fd_error([&] { return gan::agent_loss(agents[0], real, rewards); },
                             gan::tensors_of(agents[0].parameters()), 6));
  note("aggregate reward", fd_error(
                               [&] { return gan::aggregate_reward(agents, w, gan::relax_batch(gan::generator_forward(gen, z))); },
                               agent_params, 3));
  note("aggregate reward (generator)",
       fd_error([&] { return gan::aggregate_reward(agents, w, gan::relax_batch(gan::generator_forward(gen, z))); },
                gen_params, 8));
  for (const double gamma : {0.0, 0.3, 1.0}) {
    note("combined loss", fd_error(
                              [&] {
                                const auto f = gan::relax_batch(gan::generator_forward(gen, z));
                                return gan::combined_generator_loss(gan::generator_adversarial_loss(gan::score_fn(critic), f),
                                                                    gan::marl_loss(agents, w, f), gamma);
                              },
                              gen_params, 8));
  }
  return {worst < 1e-4, std::to_string(primitives.size()) + " primitives and 5 losses, worst relative error " +
                            fmt("%.2e", worst) + " (" + worst_name + ")"};
}

Outcome gradient_penalty_analytic() {
  const auto linear = [](double norm) {
    std::vector<double> w(450, 0.0);
    w[7] = norm * 0.6;
    w[300] = norm * 0.8;
    const auto wx = Tensor::constant({45, 1}, std::vector<double>(w.begin(), w.begin() + 45));
    const auto wa = Tensor::constant({405, 1}, std::vector<double>(w.begin() + 45, w.end()));
    return gan::ScoreFn([wx, wa](const gan::GraphBatch& b) {
      const auto n = b.size();
      return ad::reshape(ad::add(ad::matmul(ad::reshape(b.x, {n, 45}), wx), ad::matmul(ad::reshape(b.a, {n, 405}), wa)),
                         {n});
    });
  };
  const auto real = toy_batch();
  const std::vector<MolecularGraph> other = {smiles::parse("C#N"), smiles::parse("OCO"), smiles::parse("CNC")};
  const auto fake = gan::one_hot_batch(other);
  Rng rng(3);
  const double p1 = gan::gradient_penalty(linear(1.0), real, fake, rng).item();
  const double p3 = gan::gradient_penalty(linear(3.0), real, fake, rng).item();
  return {p1 < 1e-12 && std::abs(p3 - 4.0) <= 1e-9,
          "||w||=1 -> " + fmt("%.3e", p1) + ", ||w||=3 -> " + fmt("%.12f", p3)};
}

// ---------------------------------------------------------------- SMILES

Outcome smiles_checks() {
  const auto rows = load_fixture();
  std::size_t round_trips = 0, invariant = 0;
  for (const auto& r : rows) {
    const auto g = smiles::parse(r.smiles);
    round_trips += isomorphic(g, smiles::parse(smiles::write(g)));
    const auto key = smiles::canonical_smiles(g);
    bool same = true;
    for (std::uint64_t seed = 0; seed < 100 && same; ++seed) same = smiles::canonical_smiles(mol::random_permute(g, seed)) == key;
    invariant += same;
  }
  Rng rng(2024);
  const std::string alphabet = "CNOFcno()=#-:.123456789[]%ClSBr@/\\ +H0";
  std::size_t crashes = 0, parsed = 0;
  for (int k = 0; k < 100000; ++k) {
    std::string s(static_cast<std::size_t>(rng.below(65)), ' ');
    for (auto& ch : s) ch = rng.bernoulli(0.9) ? alphabet[rng.below(alphabet.size())] : static_cast<char>(rng.below(256));
    try {
      const auto g = smiles::parse(s);
      ++parsed;
      if (!isomorphic(g, smiles::parse(smiles::write(g)))) ++crashes;
    } catch (const ParseError&) {
    } catch (...) {
      ++crashes;
    }
  }
  const bool pass = rows.size() >= 200 && round_trips == rows.size() && invariant == rows.size() && crashes == 0;
  return {pass, std::to_string(round_trips) + "/" + std::to_string(rows.size()) + " round trips, " +
                    std::to_string(invariant) + "/" + std::to_string(rows.size()) +
                    " invariant under 100 permutations, 100000 fuzz strings (" + std::to_string(parsed) +
                    " parsed), " + std::to_string(crashes) + " failures"};
}

// ---------------------------------------------------------------- chemistry

Outcome chemistry() {
  const auto rows = load_fixture();
  double mae = 0.0, worst = 0.0;
  std::vector<double> qed, qed_ref, sa, sa_ref;
  for (const auto& r : rows) {
    const auto g = smiles::parse(r.smiles);
    const double lp = chem::crippen_logp(g);
    mae += std::abs(lp - r.logp);
    worst = std::max(worst, std::abs(lp - r.logp));
    qed.push_back(chem::qed_score(chem::compute_descriptors(g)));
    qed_ref.push_back(r.qed);
    sa.push_back(chem::sa_score(g));
    sa_ref.push_back(r.sa);
  }
  mae /= static_cast<double>(rows.size());
  const double rq = spearman_rho(qed, qed_ref), rs = spearman_rho(sa, sa_ref);
  return {rows.size() >= 200 && mae <= 0.05 && worst <= 1e-3 && rq >= 0.90 && rs >= 0.80,
          std::to_string(rows.size()) + " molecules: LogP MAE " + fmt("%.2e", mae) + " (max " + fmt("%.2e", worst) +
              "), QED Spearman " + fmt("%.4f", rq) + ", SA Spearman " + fmt("%.4f", rs)};
}

// ---------------------------------------------------------------- metrics

std::vector<MolecularGraph> graphs_of(std::initializer_list<const char*> list) {
  std::vector<MolecularGraph> out;
  for (const auto* s : list) out.push_back(smiles::parse(s));
  return out;
}

Outcome metric_identities() {
  pipeline::MoleculeCache cache;
  Rng rng(1);
  // A carbon with five neighbours, built directly.
  MolecularGraph over;
  for (std::size_t i = 0; i < 6; ++i) over.set_atom(i, mol::Element::C);
  for (std::size_t i = 1; i < 6; ++i) over.set_bond(0, i, mol::BondType::SINGLE);
  auto four = graphs_of({"CCO", "CC=O", "c1ccccc1"});
  four.insert(four.begin() + 1, over);
  const auto a = pipeline::evaluate_graphs(four, {}, cache, rng);
  const auto b = pipeline::evaluate_graphs(graphs_of({"CCO", "OCC", "C", "C.C"}),
                                           {smiles::canonical_smiles(smiles::parse("C"))}, cache, rng);
  const auto c = pipeline::evaluate_graphs(graphs_of({"CC(=O)N", "NC(C)=O"}), {}, cache, rng);
  const bool pass = a.validity == 75.0 && b.validity == 75.0 && std::abs(b.uniqueness - 200.0 / 3.0) < 1e-12 &&
                    b.novelty == 50.0 && c.diversity == 0.0 && c.uniqueness == 50.0;
  return {pass, "validity " + fmt("%.1f", a.validity) + ", {CCO,OCC,C} uniqueness " + fmt("%.1f", b.uniqueness) +
                    " novelty " + fmt("%.1f", b.novelty) + ", duplicate-pair diversity " + fmt("%.1f", c.diversity)};
}

// ---------------------------------------------------------------- zero reward

Outcome zero_reward() {
  std::vector<MolecularGraph> batch = graphs_of({"CCO", "C.C", "c1ccccc1", "CC(=O)N"});
  MolecularGraph over;
  for (std::size_t i = 0; i < 5; ++i) over.set_atom(i, mol::Element::N);
  for (std::size_t i = 1; i < 5; ++i) over.set_bond(0, i, mol::BondType::SINGLE);
  batch.push_back(over);
  MolecularGraph open_aromatic;
  open_aromatic.set_atom(0, mol::Element::C);
  open_aromatic.set_atom(1, mol::Element::C);
  open_aromatic.set_bond(0, 1, mol::BondType::AROMATIC);
  batch.push_back(open_aromatic);
  // Decodes of an untrained generator: mostly invalid graphs.
  Rng rng(77);
  const auto gen = gan::GeneratorParams::init({}, rng);
  {
    ad::NoGradGuard guard;
    for (auto& g : gan::decode_batch(gan::generator_forward(gen, random_bits(rng, 26)))) batch.push_back(g);
  }
  const std::vector<bool> expect_zero = [&] {
    std::vector<bool> v;
    for (const auto& g : batch) {
      v.push_back(!mol::valence_valid(g).valid);
    }
    return v;
  }();
  std::vector<std::string> scored;
  const gan::Scorer scorer = [&](const MolecularGraph& g) {
    scored.push_back(mol::describe(g));
    chem::PropertyScores s;
    s.qed_norm = 0.25;
    s.logp_norm = 0.5;
    s.sa_norm = 0.75;
    return s;
  };
  const auto targets = gan::reward_targets(batch, scorer);
  std::size_t invalid = 0, violations = 0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (expect_zero[i]) {
      ++invalid;
      for (std::size_t p = 0; p < 3; ++p) violations += targets[p][i] != 0.0;
    } else {
      violations += targets[0][i] != 0.25 || targets[1][i] != 0.5 || targets[2][i] != 0.75;
    }
  }
  const bool hand_built = expect_zero[1] && expect_zero[4] && expect_zero[5] && !expect_zero[0];
  const bool scorer_skipped_invalid = scored.size() == batch.size() - invalid;
  return {hand_built && invalid > 3 && violations == 0 && scorer_skipped_invalid,
          std::to_string(invalid) + " invalid of " + std::to_string(batch.size()) + " molecules, " +
              std::to_string(violations) + " nonzero rewards for invalid or wrong rewards for valid, scorer called " +
              std::to_string(scored.size()) + " times"};
}

// ---------------------------------------------------------------- training runs

const pipeline::Dataset& dataset() {
  static const pipeline::Dataset d = pipeline::ingest(pipeline::default_dataset_path());
  return d;
}

pipeline::TrainConfig desk_config(std::uint64_t seed) {
  pipeline::TrainConfig c;
  c.epochs = 50;
  c.max_molecules = 500;
  c.rl_start_epoch = 25;
  c.rl_pretrain_epochs = 30;
  c.freeze_epoch = 38;
  c.checkpoint_every = 10;
  c.seed = seed;
  c.dataset = pipeline::default_dataset_path();
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  const auto t0 = std::chrono::steady_clock::now();
  auto cfg = desk_config(11);
  cfg.epochs = 20;
  cfg.rl_start_epoch = 10;
  cfg.freeze_epoch = 15;
  const auto root = fs::temp_directory_path() / "qmg_acceptance_determinism";
  fs::remove_all(root);
  pipeline::run_training(cfg, dataset(), {root / "a", {}, {}, {}});
  pipeline::run_training(cfg, dataset(), {root / "b", {}, {}, {}});
  pipeline::run_training(cfg, dataset(), {root / "c", {}, 10, {}});
  pipeline::run_training(cfg, dataset(), {root / "c", root / "c" / "checkpoint_0010.ckpt", {}, {}});
  const auto a = slurp(root / "a" / "metrics.csv");
  const bool same_runs = a == slurp(root / "b" / "metrics.csv");
  const bool resumed = a == slurp(root / "c" / "metrics.csv") &&
                       slurp(root / "a" / "checkpoint_last.ckpt") == slurp(root / "c" / "checkpoint_last.ckpt");
  const auto rows = read_lines(root / "a" / "metrics.csv");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {same_runs && resumed && rows.size() == 21,
          std::string("two 20-epoch runs ") + (same_runs ? "identical" : "DIFFER") + ", resume at epoch 10 " +
              (resumed ? "identical" : "DIFFERS") + " (" + std::to_string(rows.size() - 1) + " metric rows, " +
              fmt("%.0f", secs) + " s)"};
}

Outcome desk_trend() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto split = pipeline::split_dataset(dataset(), desk_config(0));
  int qed_wins = 0, sa_wins = 0, both = 0;
  double min_validity = 100.0, slowest_run = 0.0;
  std::string per_seed;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    // Both objectives continue from one shared adversarial phase.
    const auto ts = std::chrono::steady_clock::now();
    pipeline::Trainer shared(pipeline::TrainState::init(desk_config(seed)), split.train);
    while (shared.state().epoch < shared.state().config.rl_start_epoch) shared.run_epoch();
    const auto gan_phase = shared.state().to_checkpoint().serialize();
    const double shared_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - ts).count();
    std::map<pipeline::Objective, pipeline::MetricsReport> final;
    for (const auto objective : {pipeline::Objective::qed, pipeline::Objective::sa}) {
      const auto to = std::chrono::steady_clock::now();
      auto state = pipeline::TrainState::from_checkpoint(pipeline::Checkpoint::deserialize(gan_phase));
      state.config.weights = pipeline::objective_weights(objective);
      pipeline::Trainer t(std::move(state), split.train);
      pipeline::MetricsReport r;
      while (t.state().epoch < t.state().config.epochs) r = t.run_epoch();
      final[objective] = r;
      min_validity = std::min(min_validity, r.validity);
      slowest_run = std::max(slowest_run, shared_secs + std::chrono::duration<double>(std::chrono::steady_clock::now() - to).count());
    }
    const auto& q = final[pipeline::Objective::qed];
    const auto& s = final[pipeline::Objective::sa];
    const bool qw = q.qed > s.qed, sw = s.sa > q.sa;
    qed_wins += qw;
    sa_wins += sw;
    both += qw && sw;
    per_seed += " seed " + std::to_string(seed) + ": QED " + fmt("%.3f", q.qed) + "/" + fmt("%.3f", s.qed) + " SA " +
                fmt("%.3f", q.sa) + "/" + fmt("%.3f", s.sa) + " validity " + fmt("%.1f", q.validity) + "/" +
                fmt("%.1f", s.validity) + ";";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {both >= 4 && min_validity >= 50.0 && slowest_run < 1800.0,
          "both orderings hold in " + std::to_string(both) + "/5 seeds (QED " + std::to_string(qed_wins) + "/5, SA " +
              std::to_string(sa_wins) + "/5), min validity " + fmt("%.1f", min_validity) + "%, slowest run " +
              fmt("%.0f", slowest_run) + " s, total " + fmt("%.0f", secs) + " s; (qed-run/sa-run)" + per_seed};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string filter = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"qcbm-correctness", qcbm_correctness},
      {"qcbm-learning", qcbm_learning},
      {"autodiff-finite-differences", autodiff},
      {"gradient-penalty-analytic", gradient_penalty_analytic},
      {"smiles-round-trip-canonical-fuzz", smiles_checks},
      {"chemistry-vs-fixtures", chemistry},
      {"metric-identities", metric_identities},
      {"zero-reward-invalid", zero_reward},
      {"determinism-and-resume", determinism},
      {"desk-scale-objective-trend", desk_trend},
  };
  int failures = 0, run = 0;
  for (const auto& [name, check] : criteria) {
    if (!filter.empty() && std::string(name).find(filter) == std::string::npos) continue;
    ++run;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", run - failures, run);
  return failures == 0 ? 0 : 1;
}
