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

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "qmg/tensor/tensor.hpp"

namespace qmg::ad {

enum class OpKind {
  matmul,
  add,
  sub,
  multiply,
  scale,
  add_scalar,
  tanh,
  sigmoid,
  relu,
  softmax_lastdim,
  sum,
  mean,
  square,
  sqrt,
  reciprocal,
  concat,
  slice,
  reshape,
  swap_axes,
  sum_lastdim,
  expand_lastdim,
  broadcast_to,
  sum_to,
};

std::string_view op_name(OpKind kind);

/// Non-tensor arguments of a primitive.
struct OpAttrs {
  double scalar = 0.0;
  std::size_t axis = 0;
  std::size_t start = 0;
  std::size_t length = 0;
  std::size_t axis2 = 0;
  Shape shape;
};

struct OpRecord {
  OpKind kind;
  std::vector<Tensor> inputs;
  Tensor output;
  OpAttrs attrs;
};

/// Ordered record of primitives, replayed in reverse by `backward`.
///
/// Primitives record onto the innermost tape activated with TapeScope.
/// Adjoints are themselves built from primitives, so a gradient taken with
/// `create_graph` can be differentiated again.
class Tape {
 public:
  Tape();
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  std::size_t size() const { return records_.size(); }
  const std::vector<OpRecord>& records() const { return records_; }
  std::uint64_t id() const { return id_; }
  void clear() { records_.clear(); }

  static Tape* current();
  void record(OpRecord rec);

 private:
  std::uint64_t id_;
  std::vector<OpRecord> records_;
};

/// Activates a tape for the current thread for the lifetime of the scope.
class TapeScope {
 public:
  explicit TapeScope(Tape& tape);
  ~TapeScope();
  TapeScope(const TapeScope&) = delete;
  TapeScope& operator=(const TapeScope&) = delete;

 private:
  Tape* previous_;
};

/// Suspends recording for the lifetime of the guard.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

bool recording_enabled();

/// Accumulates d(loss)/d(leaf) into every leaf that requires gradients.
/// `loss` must be a scalar recorded on the active tape.
void backward(const Tensor& loss);

/// Returns d(output)/d(x) for each x in `wrt` (zeros when unconnected).
/// With `create_graph` the returned tensors are themselves recorded.
std::vector<Tensor> gradients(const Tensor& output, std::span<const Tensor> wrt, bool create_graph);

}  // namespace qmg::ad
