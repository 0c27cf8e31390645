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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qmg::ad {

using Shape = std::vector<std::size_t>;

std::size_t numel(const Shape& shape);
std::string to_string(const Shape& shape);

struct TensorImpl {
  Shape shape;
  std::vector<double> data;
  std::optional<std::vector<double>> grad;
  bool requires_grad = false;
  // Set when the tensor is the output of a recorded primitive.
  std::uint64_t tape_id = 0;
  std::size_t record = 0;
};

/// Shaped row-major array of doubles with an optional gradient.
///
/// Tensor is a handle: copies share storage. Leaves created with
/// `parameter` require gradients; outputs of primitives require gradients
/// when any input does and a tape is recording.
class Tensor {
 public:
  Tensor() = default;

  static Tensor constant(Shape shape, std::vector<double> data);
  static Tensor zeros(Shape shape);
  static Tensor full(Shape shape, double value);
  static Tensor scalar(double value);
  static Tensor parameter(Shape shape, std::vector<double> data);

  bool defined() const noexcept { return impl_ != nullptr; }
  const Shape& shape() const;
  std::size_t rank() const { return shape().size(); }
  std::size_t size() const;
  std::span<const double> data() const;
  /// Direct write access, for initialising and updating leaves.
  std::span<double> mutable_data();
  double item() const;
  double at(std::size_t flat_index) const { return data()[flat_index]; }

  bool requires_grad() const;
  bool is_leaf() const;
  bool has_grad() const;
  std::span<const double> grad() const;
  void zero_grad();
  void accumulate_grad(std::span<const double> g);

  /// Value copy with no gradient history.
  Tensor detach() const;

  const TensorImpl* id() const noexcept { return impl_.get(); }
  TensorImpl& impl() const;

 private:
  explicit Tensor(std::shared_ptr<TensorImpl> impl) : impl_(std::move(impl)) {}
  friend Tensor make_tensor(Shape shape, std::vector<double> data, bool requires_grad);

  std::shared_ptr<TensorImpl> impl_;
};

Tensor make_tensor(Shape shape, std::vector<double> data, bool requires_grad);

}  // namespace qmg::ad
