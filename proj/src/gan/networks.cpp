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

#include "qmg/gan/networks.hpp"

#include <cmath>

#include "qmg/common/error.hpp"
#include "qmg/tensor/ops.hpp"

namespace qmg::gan {

using ad::Tensor;
using mol::kBondTypes;
using mol::kMaxAtoms;
using mol::kNodeTypes;

namespace {

constexpr std::size_t kXSize = kMaxAtoms * kNodeTypes;
constexpr std::size_t kASize = kMaxAtoms * kMaxAtoms * kBondTypes;

Tensor glorot(std::size_t in, std::size_t out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
  std::vector<double> w(in * out);
  for (auto& v : w) v = rng.uniform(-limit, limit);
  return Tensor::parameter({in, out}, std::move(w));
}

Tensor zero_param(ad::Shape shape) { return Tensor::parameter(shape, std::vector<double>(ad::numel(shape), 0.0)); }

Dense dense_init(std::size_t in, std::size_t out, Rng* rng) {
  return {rng != nullptr ? glorot(in, out, *rng) : zero_param({in, out}), zero_param({out})};
}

Tensor copy_param(const Tensor& t) {
  return Tensor::parameter(t.shape(), std::vector<double>(t.data().begin(), t.data().end()));
}

Dense copy_dense(const Dense& d) { return {copy_param(d.w), copy_param(d.b)}; }

Tensor apply(const Dense& d, const Tensor& h) { return ad::add(ad::matmul(h, d.w), d.b); }

void add_dense(ParameterList& out, const std::string& name, const Dense& d) {
  out.push_back({name + ".w", d.w});
  out.push_back({name + ".b", d.b});
}

const char* const kBondNames[] = {"single", "double", "triple", "aromatic"};

RelationalParams make_relational(const RelationalConfig& config, Head head, Rng* rng) {
  if (config.conv.empty() || config.readout == 0 || config.bottleneck == 0) {
    throw InvalidArgument("relational network needs at least one convolution and nonzero widths");
  }
  RelationalParams p;
  p.config = config;
  p.head = head;
  std::size_t in = kNodeTypes;
  for (const auto width : config.conv) {
    if (width == 0) throw InvalidArgument("convolution width must be positive");
    RelationalParams::Conv c;
    for (auto& w : c.w_bond) w = rng != nullptr ? glorot(in, width, *rng) : zero_param({in, width});
    c.w_self = rng != nullptr ? glorot(in, width, *rng) : zero_param({in, width});
    c.b = zero_param({width});
    p.convs.push_back(std::move(c));
    in = width;
  }
  p.gate = dense_init(in + kNodeTypes, config.readout, rng);
  p.value = dense_init(in + kNodeTypes, config.readout, rng);
  p.bottleneck = dense_init(config.readout, config.bottleneck, rng);
  p.out = dense_init(config.bottleneck, 1, rng);
  return p;
}

GeneratorParams make_generator(const GeneratorConfig& config, Rng* rng) {
  if (config.latent == 0) throw InvalidArgument("generator latent size must be positive");
  GeneratorParams p;
  p.config = config;
  std::size_t in = config.latent;
  for (const auto width : config.hidden) {
    if (width == 0) throw InvalidArgument("generator hidden width must be positive");
    p.layers.push_back(dense_init(in, width, rng));
    in = width;
  }
  p.layers.push_back(dense_init(in, kGeneratorOutputs, rng));
  return p;
}

}  // namespace

std::size_t GraphBatch::size() const { return x.defined() && x.rank() > 0 ? x.shape()[0] : 0; }

void check_batch(const GraphBatch& batch) {
  if (!batch.x.defined() || !batch.a.defined()) throw ShapeError("graph batch: undefined tensor");
  const auto& xs = batch.x.shape();
  const auto& as = batch.a.shape();
  const bool ok = xs.size() == 3 && as.size() == 4 && xs[0] >= 1 && as[0] == xs[0] && xs[1] == kMaxAtoms &&
                  xs[2] == kNodeTypes && as[1] == kMaxAtoms && as[2] == kMaxAtoms && as[3] == kBondTypes;
  if (!ok) {
    throw ShapeError("graph batch: expected x [B,9,5] and a [B,9,9,5], got " + ad::to_string(xs) + " and " +
                     ad::to_string(as));
  }
}

GraphBatch one_hot_batch(std::span<const mol::MolecularGraph> graphs) {
  if (graphs.empty()) throw InvalidArgument("one_hot_batch: empty batch");
  std::vector<double> x, a;
  x.reserve(graphs.size() * kXSize);
  a.reserve(graphs.size() * kASize);
  for (const auto& g : graphs) {
    const auto gx = g.node_one_hot();
    const auto ga = g.adjacency_one_hot();
    x.insert(x.end(), gx.begin(), gx.end());
    a.insert(a.end(), ga.begin(), ga.end());
  }
  const auto b = graphs.size();
  return {Tensor::constant({b, kMaxAtoms, kNodeTypes}, std::move(x)),
          Tensor::constant({b, kMaxAtoms, kMaxAtoms, kBondTypes}, std::move(a))};
}

std::vector<Tensor> tensors_of(const ParameterList& params) {
  std::vector<Tensor> out;
  out.reserve(params.size());
  for (const auto& p : params) out.push_back(p.value);
  return out;
}

GeneratorParams GeneratorParams::init(const GeneratorConfig& config, Rng& rng) { return make_generator(config, &rng); }

GeneratorParams GeneratorParams::zeros(const GeneratorConfig& config) { return make_generator(config, nullptr); }

ParameterList GeneratorParams::parameters() const {
  ParameterList out;
  for (std::size_t l = 0; l < layers.size(); ++l) add_dense(out, "layer" + std::to_string(l), layers[l]);
  return out;
}

GeneratorParams GeneratorParams::clone() const {
  GeneratorParams p;
  p.config = config;
  for (const auto& d : layers) p.layers.push_back(copy_dense(d));
  return p;
}

mol::DenseGraphLogits GeneratorOutput::logits(std::size_t k) const {
  mol::DenseGraphLogits l;
  const auto xd = x_logits.data().subspan(k * kXSize, kXSize);
  const auto ad_ = a_logits.data().subspan(k * kASize, kASize);
  l.x.assign(xd.begin(), xd.end());
  l.a.assign(ad_.begin(), ad_.end());
  return l;
}

GeneratorOutput generator_forward(const GeneratorParams& params, std::span<const qcbm::Bitstring> z) {
  const std::size_t n = params.config.latent;
  if (z.empty()) throw InvalidArgument("generator_forward: empty latent batch");
  std::vector<double> input;
  input.reserve(z.size() * n);
  for (const auto& bits : z) {
    if (bits.size() != n) {
      throw InvalidArgument("generator_forward: latent has " + std::to_string(bits.size()) + " bits, expected " +
                            std::to_string(n));
    }
    for (const auto b : bits) input.push_back(b != 0 ? 1.0 : -1.0);
  }
  const auto batch = z.size();
  Tensor h = Tensor::constant({batch, n}, std::move(input));
  for (std::size_t l = 0; l + 1 < params.layers.size(); ++l) h = ad::tanh(apply(params.layers[l], h));
  const Tensor out = apply(params.layers.back(), h);
  GeneratorOutput g;
  g.x_logits = ad::reshape(ad::slice(out, 1, 0, kXSize), {batch, kMaxAtoms, kNodeTypes});
  const Tensor a = ad::reshape(ad::slice(out, 1, kXSize, kASize), {batch, kMaxAtoms, kMaxAtoms, kBondTypes});
  g.a_logits = ad::scale(ad::add(a, ad::swap_axes(a, 1, 2)), 0.5);
  return g;
}

GraphBatch relax_batch(const GeneratorOutput& out) {
  static const auto masks = [] {
    std::vector<double> keep(kASize, 1.0), diag(kASize, 0.0);
    for (std::size_t i = 0; i < kMaxAtoms; ++i) {
      const auto base = (i * kMaxAtoms + i) * kBondTypes;
      for (std::size_t t = 0; t < kBondTypes; ++t) keep[base + t] = 0.0;
      diag[base] = 1.0;
    }
    return std::pair{Tensor::constant({kMaxAtoms, kMaxAtoms, kBondTypes}, std::move(keep)),
                     Tensor::constant({kMaxAtoms, kMaxAtoms, kBondTypes}, std::move(diag))};
  }();
  GraphBatch b;
  b.x = ad::softmax_lastdim(out.x_logits);
  b.a = ad::add(ad::multiply(ad::softmax_lastdim(out.a_logits), masks.first), masks.second);
  return b;
}

std::vector<mol::MolecularGraph> decode_batch(const GeneratorOutput& out) {
  std::vector<mol::MolecularGraph> graphs;
  graphs.reserve(out.size());
  for (std::size_t k = 0; k < out.size(); ++k) graphs.push_back(mol::decode_logits(out.logits(k)));
  return graphs;
}

RelationalParams RelationalParams::init(const RelationalConfig& config, Head head, Rng& rng) {
  return make_relational(config, head, &rng);
}

RelationalParams RelationalParams::zeros(const RelationalConfig& config, Head head) {
  return make_relational(config, head, nullptr);
}

ParameterList RelationalParams::parameters() const {
  ParameterList list;
  for (std::size_t l = 0; l < convs.size(); ++l) {
    const auto prefix = "conv" + std::to_string(l);
    for (std::size_t k = 0; k < convs[l].w_bond.size(); ++k) {
      list.push_back({prefix + ".w_" + kBondNames[k], convs[l].w_bond[k]});
    }
    list.push_back({prefix + ".w_self", convs[l].w_self});
    list.push_back({prefix + ".b", convs[l].b});
  }
  add_dense(list, "gate", gate);
  add_dense(list, "value", value);
  add_dense(list, "bottleneck", bottleneck);
  add_dense(list, "out", out);
  return list;
}

RelationalParams RelationalParams::clone() const {
  RelationalParams p;
  p.config = config;
  p.head = head;
  for (const auto& c : convs) {
    Conv cc;
    for (std::size_t k = 0; k < c.w_bond.size(); ++k) cc.w_bond[k] = copy_param(c.w_bond[k]);
    cc.w_self = copy_param(c.w_self);
    cc.b = copy_param(c.b);
    p.convs.push_back(std::move(cc));
  }
  p.gate = copy_dense(gate);
  p.value = copy_dense(value);
  p.bottleneck = copy_dense(bottleneck);
  p.out = copy_dense(out);
  return p;
}

RelationalOutput relational_forward(const RelationalParams& params, const GraphBatch& batch) {
  check_batch(batch);
  const auto b = batch.size();
  std::array<Tensor, kBondTypes - 1> adj;
  for (std::size_t k = 1; k < kBondTypes; ++k) {
    adj[k - 1] = ad::reshape(ad::slice(batch.a, 3, k, 1), {b, kMaxAtoms, kMaxAtoms});
  }
  Tensor h = batch.x;
  for (const auto& c : params.convs) {
    Tensor acc = ad::add(ad::matmul(h, c.w_self), c.b);
    for (std::size_t k = 0; k < adj.size(); ++k) acc = ad::add(acc, ad::matmul(adj[k], ad::matmul(h, c.w_bond[k])));
    h = ad::tanh(acc);
  }
  const Tensor hx[] = {h, batch.x};
  const Tensor annotated = ad::concat(hx, 2);
  const Tensor gated = ad::multiply(ad::sigmoid(apply(params.gate, annotated)), ad::tanh(apply(params.value, annotated)));
  const Tensor pooled = ad::tanh(ad::sum_lastdim(ad::swap_axes(gated, 1, 2)));
  RelationalOutput out;
  out.bottleneck = ad::sigmoid(apply(params.bottleneck, pooled));
  Tensor score = ad::reshape(apply(params.out, out.bottleneck), {b});
  out.score = params.head == Head::sigmoid ? ad::sigmoid(score) : score;
  return out;
}

}  // namespace qmg::gan
