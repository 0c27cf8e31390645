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
#include <span>
#include <string>
#include <vector>

#include "qmg/common/rng.hpp"
#include "qmg/mol/graph.hpp"
#include "qmg/qcbm/born.hpp"
#include "qmg/tensor/tensor.hpp"

namespace qmg::gan {

/// Dense graphs: x [B, 9, 5] and a [B, 9, 9, 5]. Rows and fibers are
/// probability vectors, either relaxed (softmax) or one-hot.
struct GraphBatch {
  ad::Tensor x;
  ad::Tensor a;

  std::size_t size() const;
};

/// Throws ShapeError unless x and a have the shapes above with equal B >= 1.
void check_batch(const GraphBatch& batch);

GraphBatch one_hot_batch(std::span<const mol::MolecularGraph> graphs);

struct NamedTensor {
  std::string name;
  ad::Tensor value;
};
using ParameterList = std::vector<NamedTensor>;

/// Values of every tensor in `params`, in order.
std::vector<ad::Tensor> tensors_of(const ParameterList& params);

struct Dense {
  ad::Tensor w;  // [in, out]
  ad::Tensor b;  // [out]
};

struct GeneratorConfig {
  std::size_t latent = 16;
  std::vector<std::size_t> hidden = {128, 256};
};

inline constexpr std::size_t kGeneratorOutputs =
    mol::kMaxAtoms * mol::kNodeTypes + mol::kMaxAtoms * mol::kMaxAtoms * mol::kBondTypes;

/// MLP latent -> hidden... -> 450 with tanh hidden activations.
struct GeneratorParams {
  GeneratorConfig config;
  std::vector<Dense> layers;

  /// Glorot-uniform weights, zero biases.
  static GeneratorParams init(const GeneratorConfig& config, Rng& rng);
  static GeneratorParams zeros(const GeneratorConfig& config);

  ParameterList parameters() const;
  /// Deep copy with fresh storage.
  GeneratorParams clone() const;
};

struct GeneratorOutput {
  ad::Tensor x_logits;  // [B, 9, 5]
  ad::Tensor a_logits;  // [B, 9, 9, 5], symmetric in the two atom axes

  std::size_t size() const { return x_logits.shape()[0]; }
  mol::DenseGraphLogits logits(std::size_t k) const;
};

/// Maps bits to +-1, runs the MLP and reshapes the output. Throws
/// InvalidArgument if a bitstring length differs from the latent size or the
/// batch is empty.
GeneratorOutput generator_forward(const GeneratorParams& params, std::span<const qcbm::Bitstring> z);

/// Differentiable softmax relaxation. Agrees with mol::relax on every sample:
/// diagonal fibers are exactly NONE.
GraphBatch relax_batch(const GeneratorOutput& out);

/// Argmax decode of every sample.
std::vector<mol::MolecularGraph> decode_batch(const GeneratorOutput& out);

struct RelationalConfig {
  std::vector<std::size_t> conv = {64, 32};
  std::size_t readout = 128;
  std::size_t bottleneck = 16;
};

enum class Head { linear, sigmoid };

/// Relational graph convolutions, gated-sum readout, sigmoid bottleneck and
/// a scalar head. The critic uses a linear head, reward agents a sigmoid one.
struct RelationalParams {
  struct Conv {
    std::array<ad::Tensor, mol::kBondTypes - 1> w_bond;  // SINGLE..AROMATIC
    ad::Tensor w_self;
    ad::Tensor b;
  };

  RelationalConfig config;
  Head head = Head::linear;
  std::vector<Conv> convs;
  Dense gate;   // [last conv + node types] -> readout
  Dense value;  // same shape as gate
  Dense bottleneck;
  Dense out;

  static RelationalParams init(const RelationalConfig& config, Head head, Rng& rng);
  static RelationalParams zeros(const RelationalConfig& config, Head head);

  ParameterList parameters() const;
  RelationalParams clone() const;
};

using CriticParams = RelationalParams;
using RewardAgentParams = RelationalParams;

struct RelationalOutput {
  ad::Tensor score;       // [B]
  ad::Tensor bottleneck;  // [B, bottleneck]
};

/// h' = tanh(sum_k A_k h W_k + h W_self + b) over the four bond channels,
/// then readout tanh(sum_nodes sigmoid([h, x] Wg) * tanh([h, x] Wv)),
/// bottleneck sigmoid(. Wb), and the head. Throws ShapeError on bad input.
RelationalOutput relational_forward(const RelationalParams& params, const GraphBatch& batch);

}  // namespace qmg::gan
