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

#include <span>
#include <vector>

#include "qmg/tensor/tape.hpp"
#include "qmg/tensor/tensor.hpp"

namespace qmg::ad {

/// Generic entry point: evaluates one primitive and records it when needed.
/// Throws ShapeError naming the primitive and the offending shapes.
Tensor primitive_forward(OpKind kind, std::span<const Tensor> inputs, const OpAttrs& attrs = {});

// a: [..., m, k] with b: [k, n], or batched a: [B, m, k] with b: [B, k, n].
Tensor matmul(const Tensor& a, const Tensor& b);

// Elementwise. `b` may have the shape of a trailing suffix of `a` and is
// then repeated over the leading dimensions.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor multiply(const Tensor& a, const Tensor& b);

Tensor scale(const Tensor& a, double c);
Tensor add_scalar(const Tensor& a, double c);
Tensor neg(const Tensor& a);

Tensor tanh(const Tensor& a);
Tensor sigmoid(const Tensor& a);
Tensor relu(const Tensor& a);
Tensor square(const Tensor& a);
Tensor sqrt(const Tensor& a);
Tensor reciprocal(const Tensor& a);
Tensor softmax_lastdim(const Tensor& a);

/// Sum / mean of every element, shape [].
Tensor sum(const Tensor& a);
Tensor mean(const Tensor& a);

Tensor concat(std::span<const Tensor> parts, std::size_t axis);
Tensor slice(const Tensor& a, std::size_t axis, std::size_t start, std::size_t length);
Tensor reshape(const Tensor& a, Shape shape);
Tensor swap_axes(const Tensor& a, std::size_t i, std::size_t j);
/// Swaps the last two axes.
Tensor transpose(const Tensor& a);

/// [..., n] -> [...]
Tensor sum_lastdim(const Tensor& a);
/// [...] -> [..., n], repeating each element n times.
Tensor expand_lastdim(const Tensor& a, std::size_t n);
/// Repeats `a` over leading dimensions; a.shape must be a suffix of `shape`.
Tensor broadcast_to(const Tensor& a, Shape shape);
/// Sums leading dimensions away; `shape` must be a suffix of a.shape.
Tensor sum_to(const Tensor& a, Shape shape);

}  // namespace qmg::ad
