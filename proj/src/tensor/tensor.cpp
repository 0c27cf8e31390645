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

#include "qmg/tensor/tensor.hpp"

#include <algorithm>
#include <sstream>

#include "qmg/common/error.hpp"

namespace qmg::ad {

std::size_t numel(const Shape& shape) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

std::string to_string(const Shape& shape) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) out << (i ? "," : "") << shape[i];
  out << ']';
  return out.str();
}

Tensor make_tensor(Shape shape, std::vector<double> data, bool requires_grad) {
  if (numel(shape) != data.size()) {
    throw ShapeError("tensor shape " + to_string(shape) + " does not match " + std::to_string(data.size()) +
                     " values");
  }
  auto impl = std::make_shared<TensorImpl>();
  impl->shape = std::move(shape);
  impl->data = std::move(data);
  impl->requires_grad = requires_grad;
  return Tensor(std::move(impl));
}

Tensor Tensor::constant(Shape shape, std::vector<double> data) {
  return make_tensor(std::move(shape), std::move(data), false);
}

Tensor Tensor::zeros(Shape shape) { return full(std::move(shape), 0.0); }

Tensor Tensor::full(Shape shape, double value) {
  const auto n = numel(shape);
  return make_tensor(std::move(shape), std::vector<double>(n, value), false);
}

Tensor Tensor::scalar(double value) { return make_tensor({}, {value}, false); }

Tensor Tensor::parameter(Shape shape, std::vector<double> data) {
  return make_tensor(std::move(shape), std::move(data), true);
}

TensorImpl& Tensor::impl() const {
  if (!impl_) throw InvalidArgument("use of an undefined tensor");
  return *impl_;
}

const Shape& Tensor::shape() const { return impl().shape; }
std::size_t Tensor::size() const { return impl().data.size(); }
std::span<const double> Tensor::data() const { return impl().data; }
std::span<double> Tensor::mutable_data() { return impl().data; }

double Tensor::item() const {
  if (size() != 1) throw ShapeError("item() on tensor of shape " + to_string(shape()));
  return impl().data[0];
}

bool Tensor::requires_grad() const { return impl().requires_grad; }
bool Tensor::is_leaf() const { return impl().tape_id == 0; }
bool Tensor::has_grad() const { return impl().grad.has_value(); }

std::span<const double> Tensor::grad() const {
  if (!impl().grad) throw InvalidArgument("tensor has no gradient");
  return *impl().grad;
}

void Tensor::zero_grad() { impl().grad.reset(); }

void Tensor::accumulate_grad(std::span<const double> g) {
  auto& self = impl();
  if (g.size() != self.data.size()) throw ShapeError("gradient size mismatch");
  if (!self.grad) {
    self.grad.emplace(g.begin(), g.end());
    return;
  }
  std::transform(self.grad->begin(), self.grad->end(), g.begin(), self.grad->begin(), std::plus<>());
}

Tensor Tensor::detach() const { return make_tensor(shape(), impl().data, false); }

}  // namespace qmg::ad
