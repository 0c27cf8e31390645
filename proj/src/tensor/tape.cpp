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

#include "qmg/tensor/tape.hpp"

#include <atomic>
#include <unordered_map>

#include "adjoint.hpp"
#include "qmg/common/error.hpp"
#include "qmg/tensor/ops.hpp"

namespace qmg::ad {

namespace {

thread_local Tape* g_current_tape = nullptr;
thread_local bool g_grad_enabled = true;
std::atomic<std::uint64_t> g_next_tape_id{1};

struct Adjoint {
  Tensor target;
  Tensor value;
};

using AdjointMap = std::unordered_map<const TensorImpl*, Adjoint>;

void accumulate(AdjointMap& adj, const Tensor& target, const Tensor& g) {
  auto it = adj.find(target.id());
  if (it == adj.end()) {
    adj.emplace(target.id(), Adjoint{target, g});
  } else {
    it->second.value = add(it->second.value, g);
  }
}

// Replays adjoints from `output` back to the start of the tape, visiting each
// record at most once in reverse recording order.
AdjointMap replay(const Tape& tape, const Tensor& output) {
  AdjointMap adj;
  accumulate(adj, output, Tensor::full(output.shape(), 1.0));
  for (std::size_t i = output.impl().record + 1; i-- > 0;) {
    const OpRecord rec = tape.records()[i];
    const auto it = adj.find(rec.output.id());
    if (it == adj.end()) continue;
    const Tensor g = it->second.value;
    std::vector<bool> need(rec.inputs.size());
    bool any = false;
    for (std::size_t j = 0; j < rec.inputs.size(); ++j) {
      need[j] = rec.inputs[j].requires_grad();
      any = any || need[j];
    }
    if (!any) continue;
    const auto grads = detail::adjoint(rec, g, need);
    for (std::size_t j = 0; j < rec.inputs.size(); ++j) {
      if (need[j] && grads[j].defined()) accumulate(adj, rec.inputs[j], grads[j]);
    }
  }
  return adj;
}

const Tape& tape_of(const Tensor& output) {
  const Tape* tape = Tape::current();
  if (tape == nullptr) throw InvalidArgument("backward: no active tape");
  if (output.impl().tape_id != tape->id()) {
    throw InvalidArgument("backward: tensor is not connected to the active tape");
  }
  return *tape;
}

}  // namespace

std::string_view op_name(OpKind kind) {
  switch (kind) {
    case OpKind::matmul: return "matmul";
    case OpKind::add: return "add";
    case OpKind::sub: return "sub";
    case OpKind::multiply: return "multiply";
    case OpKind::scale: return "scale";
    case OpKind::add_scalar: return "add_scalar";
    case OpKind::tanh: return "tanh";
    case OpKind::sigmoid: return "sigmoid";
    case OpKind::relu: return "relu";
    case OpKind::softmax_lastdim: return "softmax_lastdim";
    case OpKind::sum: return "sum";
    case OpKind::mean: return "mean";
    case OpKind::square: return "square";
    case OpKind::sqrt: return "sqrt";
    case OpKind::reciprocal: return "reciprocal";
    case OpKind::concat: return "concat";
    case OpKind::slice: return "slice";
    case OpKind::reshape: return "reshape";
    case OpKind::swap_axes: return "swap_axes";
    case OpKind::sum_lastdim: return "sum_lastdim";
    case OpKind::expand_lastdim: return "expand_lastdim";
    case OpKind::broadcast_to: return "broadcast_to";
    case OpKind::sum_to: return "sum_to";
  }
  return "unknown";
}

Tape::Tape() : id_(g_next_tape_id.fetch_add(1)) {}

Tape* Tape::current() { return g_current_tape; }

void Tape::record(OpRecord rec) {
  auto& out = rec.output.impl();
  out.tape_id = id_;
  out.record = records_.size();
  records_.push_back(std::move(rec));
}

TapeScope::TapeScope(Tape& tape) : previous_(g_current_tape) { g_current_tape = &tape; }
TapeScope::~TapeScope() { g_current_tape = previous_; }

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

bool recording_enabled() { return g_grad_enabled && g_current_tape != nullptr; }

void backward(const Tensor& loss) {
  if (!loss.shape().empty()) {
    throw ShapeError("backward: loss must be a scalar, got shape " + to_string(loss.shape()));
  }
  const Tape& tape = tape_of(loss);
  AdjointMap adj;
  {
    NoGradGuard no_grad;
    adj = replay(tape, loss);
  }
  for (auto& [key, entry] : adj) {
    if (entry.target.is_leaf() && entry.target.requires_grad()) entry.target.accumulate_grad(entry.value.data());
  }
}

std::vector<Tensor> gradients(const Tensor& output, std::span<const Tensor> wrt, bool create_graph) {
  if (!output.shape().empty()) {
    throw ShapeError("gradients: output must be a scalar, got shape " + to_string(output.shape()));
  }
  const Tape& tape = tape_of(output);
  AdjointMap adj;
  if (create_graph) {
    adj = replay(tape, output);
  } else {
    NoGradGuard no_grad;
    adj = replay(tape, output);
  }
  std::vector<Tensor> out;
  out.reserve(wrt.size());
  for (const auto& x : wrt) {
    const auto it = adj.find(x.id());
    out.push_back(it == adj.end() ? Tensor::zeros(x.shape()) : it->second.value);
  }
  return out;
}

}  // namespace qmg::ad
