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

#include "qmg/tensor/ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adjoint.hpp"
#include "qmg/common/error.hpp"
#include "qmg/kernels/gemm.hpp"

namespace qmg::ad {

namespace {

[[noreturn]] void shape_fail(OpKind kind, const std::string& detail) {
  throw ShapeError(std::string(op_name(kind)) + ": " + detail);
}

bool is_suffix(const Shape& small, const Shape& big) {
  if (small.size() > big.size()) return false;
  return std::equal(small.begin(), small.end(), big.end() - static_cast<std::ptrdiff_t>(small.size()));
}

void expect_arity(OpKind kind, std::span<const Tensor> in, std::size_t n) {
  if (in.size() != n) shape_fail(kind, "expected " + std::to_string(n) + " inputs, got " + std::to_string(in.size()));
  for (const auto& t : in) {
    if (!t.defined()) shape_fail(kind, "undefined input");
  }
}

template <class F>
std::vector<double> map_unary(const Tensor& a, F f) {
  const auto src = a.data();
  std::vector<double> out(src.size());
  std::transform(src.begin(), src.end(), out.begin(), f);
  return out;
}

template <class F>
Tensor binary_forward(OpKind kind, const Tensor& a, const Tensor& b, F f, Shape& out_shape) {
  if (!is_suffix(b.shape(), a.shape())) {
    shape_fail(kind, "shape " + to_string(b.shape()) + " does not broadcast onto " + to_string(a.shape()));
  }
  const auto x = a.data();
  const auto y = b.data();
  std::vector<double> out(x.size());
  const std::size_t nb = y.size();
  if (nb == x.size()) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = f(x[i], y[i]);
  } else if (nb > 0) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = f(x[i], y[i % nb]);
  }
  out_shape = a.shape();
  return Tensor::constant(out_shape, std::move(out));
}

Tensor matmul_forward(const Tensor& a, const Tensor& b) {
  const Shape& as = a.shape();
  const Shape& bs = b.shape();
  if (bs.size() == 2) {
    if (as.size() < 2 || as.back() != bs[0]) {
      shape_fail(OpKind::matmul, "cannot multiply " + to_string(as) + " by " + to_string(bs));
    }
    const std::size_t k = bs[0], n = bs[1];
    const std::size_t m = k == 0 ? numel(Shape(as.begin(), as.end() - 1)) : a.size() / k;
    Shape os = as;
    os.back() = n;
    std::vector<double> out(m * n);
    kernels::parallel::gemm(a.data().data(), b.data().data(), out.data(), m, k, n);
    return Tensor::constant(std::move(os), std::move(out));
  }
  if (bs.size() == 3) {
    if (as.size() != 3 || as[0] != bs[0] || as[2] != bs[1]) {
      shape_fail(OpKind::matmul, "cannot batch-multiply " + to_string(as) + " by " + to_string(bs));
    }
    const std::size_t batch = as[0], m = as[1], k = as[2], n = bs[2];
    std::vector<double> out(batch * m * n);
    for (std::size_t i = 0; i < batch; ++i) {
      kernels::parallel::gemm(a.data().data() + i * m * k, b.data().data() + i * k * n, out.data() + i * m * n, m, k,
                              n);
    }
    return Tensor::constant({batch, m, n}, std::move(out));
  }
  shape_fail(OpKind::matmul, "right operand must be rank 2 or 3, got " + to_string(bs));
}

Tensor softmax_forward(const Tensor& a) {
  if (a.rank() == 0) shape_fail(OpKind::softmax_lastdim, "needs rank >= 1");
  const std::size_t n = a.shape().back();
  if (n == 0) shape_fail(OpKind::softmax_lastdim, "empty last dimension");
  const auto x = a.data();
  std::vector<double> out(x.size());
  for (std::size_t r = 0; r < x.size() / n; ++r) {
    const double* row = x.data() + r * n;
    double* dst = out.data() + r * n;
    const double mx = *std::max_element(row, row + n);
    double z = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      dst[j] = std::exp(row[j] - mx);
      z += dst[j];
    }
    for (std::size_t j = 0; j < n; ++j) dst[j] /= z;
  }
  return Tensor::constant(a.shape(), std::move(out));
}

Tensor concat_forward(std::span<const Tensor> parts, std::size_t axis) {
  if (parts.empty()) shape_fail(OpKind::concat, "no inputs");
  const Shape& first = parts[0].shape();
  if (axis >= first.size()) shape_fail(OpKind::concat, "axis out of range for " + to_string(first));
  Shape os = first;
  os[axis] = 0;
  for (const auto& p : parts) {
    const Shape& s = p.shape();
    bool ok = s.size() == first.size();
    for (std::size_t d = 0; ok && d < s.size(); ++d) ok = d == axis || s[d] == first[d];
    if (!ok) shape_fail(OpKind::concat, "incompatible shapes " + to_string(first) + " and " + to_string(s));
    os[axis] += s[axis];
  }
  const std::size_t outer = numel(Shape(first.begin(), first.begin() + static_cast<std::ptrdiff_t>(axis)));
  const std::size_t inner = numel(Shape(first.begin() + static_cast<std::ptrdiff_t>(axis) + 1, first.end()));
  std::vector<double> out(numel(os));
  const std::size_t out_row = os[axis] * inner;
  std::size_t offset = 0;
  for (const auto& p : parts) {
    const std::size_t block = p.shape()[axis] * inner;
    const auto src = p.data();
    for (std::size_t o = 0; o < outer; ++o) {
      std::copy_n(src.data() + o * block, block, out.data() + o * out_row + offset);
    }
    offset += block;
  }
  return Tensor::constant(std::move(os), std::move(out));
}

Tensor slice_forward(const Tensor& a, std::size_t axis, std::size_t start, std::size_t length) {
  const Shape& s = a.shape();
  if (axis >= s.size() || start + length > s[axis]) {
    shape_fail(OpKind::slice, "range [" + std::to_string(start) + ", " + std::to_string(start + length) +
                                  ") on axis " + std::to_string(axis) + " of " + to_string(s));
  }
  const std::size_t outer = numel(Shape(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(axis)));
  const std::size_t inner = numel(Shape(s.begin() + static_cast<std::ptrdiff_t>(axis) + 1, s.end()));
  Shape os = s;
  os[axis] = length;
  std::vector<double> out(numel(os));
  const auto src = a.data();
  for (std::size_t o = 0; o < outer; ++o) {
    std::copy_n(src.data() + (o * s[axis] + start) * inner, length * inner, out.data() + o * length * inner);
  }
  return Tensor::constant(std::move(os), std::move(out));
}

Tensor swap_axes_forward(const Tensor& a, std::size_t i, std::size_t j) {
  const Shape& s = a.shape();
  if (i >= s.size() || j >= s.size()) shape_fail(OpKind::swap_axes, "axes out of range for " + to_string(s));
  const std::size_t r = s.size();
  Shape os = s;
  std::swap(os[i], os[j]);
  std::vector<std::size_t> in_stride(r, 1);
  for (std::size_t d = r; d-- > 1;) in_stride[d - 1] = in_stride[d] * s[d];
  // Stride in the input for each output axis.
  std::vector<std::size_t> stride = in_stride;
  std::swap(stride[i], stride[j]);
  std::vector<double> out(a.size());
  const auto src = a.data();
  std::vector<std::size_t> idx(r, 0);
  std::size_t offset = 0;
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    out[flat] = src[offset];
    for (std::size_t d = r; d-- > 0;) {
      ++idx[d];
      offset += stride[d];
      if (idx[d] < os[d]) break;
      offset -= idx[d] * stride[d];
      idx[d] = 0;
    }
  }
  return Tensor::constant(std::move(os), std::move(out));
}

Tensor forward_values(OpKind kind, std::span<const Tensor> in, const OpAttrs& at) {
  switch (kind) {
    case OpKind::matmul:
      expect_arity(kind, in, 2);
      return matmul_forward(in[0], in[1]);
    case OpKind::add:
    case OpKind::sub:
    case OpKind::multiply: {
      expect_arity(kind, in, 2);
      Shape os;
      if (kind == OpKind::add) return binary_forward(kind, in[0], in[1], std::plus<>(), os);
      if (kind == OpKind::sub) return binary_forward(kind, in[0], in[1], std::minus<>(), os);
      return binary_forward(kind, in[0], in[1], std::multiplies<>(), os);
    }
    case OpKind::scale:
      expect_arity(kind, in, 1);
      return Tensor::constant(in[0].shape(), map_unary(in[0], [c = at.scalar](double v) { return c * v; }));
    case OpKind::add_scalar:
      expect_arity(kind, in, 1);
      return Tensor::constant(in[0].shape(), map_unary(in[0], [c = at.scalar](double v) { return v + c; }));
    case OpKind::tanh:
      expect_arity(kind, in, 1);
      return Tensor::constant(in[0].shape(), map_unary(in[0], [](double v) { return std::tanh(v); }));
    case OpKind::sigmoid:
      expect_arity(kind, in, 1);
      return Tensor::constant(in[0].shape(), map_unary(in[0], [](double v) {
                                return v >= 0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
                              }));
    case OpKind::relu:
      expect_arity(kind, in, 1);
      return Tensor::constant(in[0].shape(), map_unary(in[0], [](double v) { return v > 0 ? v : 0.0; }));
    case OpKind::square:
      expect_arity(kind, in, 1);
      return Tensor::constant(in[0].shape(), map_unary(in[0], [](double v) { return v * v; }));
    case OpKind::sqrt:
      expect_arity(kind, in, 1);
      return Tensor::constant(in[0].shape(), map_unary(in[0], [](double v) { return std::sqrt(v); }));
    case OpKind::reciprocal:
      expect_arity(kind, in, 1);
      return Tensor::constant(in[0].shape(), map_unary(in[0], [](double v) { return 1.0 / v; }));
    case OpKind::softmax_lastdim:
      expect_arity(kind, in, 1);
      return softmax_forward(in[0]);
    case OpKind::sum:
    case OpKind::mean: {
      expect_arity(kind, in, 1);
      const auto x = in[0].data();
      if (kind == OpKind::mean && x.empty()) shape_fail(kind, "mean of an empty tensor");
      double acc = 0.0;
      for (double v : x) acc += v;
      return Tensor::scalar(kind == OpKind::mean ? acc / static_cast<double>(x.size()) : acc);
    }
    case OpKind::concat:
      return concat_forward(in, at.axis);
    case OpKind::slice:
      expect_arity(kind, in, 1);
      return slice_forward(in[0], at.axis, at.start, at.length);
    case OpKind::reshape:
      expect_arity(kind, in, 1);
      if (numel(at.shape) != in[0].size()) {
        shape_fail(kind, "cannot reshape " + to_string(in[0].shape()) + " to " + to_string(at.shape));
      }
      return Tensor::constant(at.shape, std::vector<double>(in[0].data().begin(), in[0].data().end()));
    case OpKind::swap_axes:
      expect_arity(kind, in, 1);
      return swap_axes_forward(in[0], at.axis, at.axis2);
    case OpKind::sum_lastdim: {
      expect_arity(kind, in, 1);
      const Shape& s = in[0].shape();
      if (s.empty()) shape_fail(kind, "needs rank >= 1");
      const std::size_t n = s.back();
      Shape os(s.begin(), s.end() - 1);
      std::vector<double> out(numel(os), 0.0);
      const auto x = in[0].data();
      for (std::size_t r = 0; r < out.size(); ++r) {
        for (std::size_t j = 0; j < n; ++j) out[r] += x[r * n + j];
      }
      return Tensor::constant(std::move(os), std::move(out));
    }
    case OpKind::expand_lastdim: {
      expect_arity(kind, in, 1);
      const std::size_t n = at.length;
      Shape os = in[0].shape();
      os.push_back(n);
      std::vector<double> out(numel(os));
      const auto x = in[0].data();
      for (std::size_t r = 0; r < x.size(); ++r) std::fill_n(out.data() + r * n, n, x[r]);
      return Tensor::constant(std::move(os), std::move(out));
    }
    case OpKind::broadcast_to: {
      expect_arity(kind, in, 1);
      if (!is_suffix(in[0].shape(), at.shape)) {
        shape_fail(kind, "cannot broadcast " + to_string(in[0].shape()) + " to " + to_string(at.shape));
      }
      const auto x = in[0].data();
      std::vector<double> out(numel(at.shape));
      if (!x.empty()) {
        for (std::size_t i = 0; i < out.size(); i += x.size()) std::copy(x.begin(), x.end(), out.begin() + i);
      }
      return Tensor::constant(at.shape, std::move(out));
    }
    case OpKind::sum_to: {
      expect_arity(kind, in, 1);
      if (!is_suffix(at.shape, in[0].shape())) {
        shape_fail(kind, "cannot reduce " + to_string(in[0].shape()) + " to " + to_string(at.shape));
      }
      const auto x = in[0].data();
      std::vector<double> out(numel(at.shape), 0.0);
      if (!out.empty()) {
        for (std::size_t i = 0; i < x.size(); ++i) out[i % out.size()] += x[i];
      }
      return Tensor::constant(at.shape, std::move(out));
    }
  }
  shape_fail(kind, "unknown primitive");
}

}  // namespace

Tensor primitive_forward(OpKind kind, std::span<const Tensor> inputs, const OpAttrs& attrs) {
  Tensor out = forward_values(kind, inputs, attrs);
  if (!recording_enabled()) return out;
  const bool any = std::any_of(inputs.begin(), inputs.end(), [](const Tensor& t) { return t.requires_grad(); });
  if (!any) return out;
  out.impl().requires_grad = true;
  Tape::current()->record(OpRecord{kind, std::vector<Tensor>(inputs.begin(), inputs.end()), out, attrs});
  return out;
}

namespace {

Tensor unary(OpKind kind, const Tensor& a, OpAttrs attrs = {}) {
  const Tensor in[] = {a};
  return primitive_forward(kind, in, attrs);
}

Tensor binary(OpKind kind, const Tensor& a, const Tensor& b) {
  const Tensor in[] = {a, b};
  return primitive_forward(kind, in);
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) { return binary(OpKind::matmul, a, b); }
Tensor add(const Tensor& a, const Tensor& b) { return binary(OpKind::add, a, b); }
Tensor sub(const Tensor& a, const Tensor& b) { return binary(OpKind::sub, a, b); }
Tensor multiply(const Tensor& a, const Tensor& b) { return binary(OpKind::multiply, a, b); }

Tensor scale(const Tensor& a, double c) { return unary(OpKind::scale, a, OpAttrs{.scalar = c}); }
Tensor add_scalar(const Tensor& a, double c) { return unary(OpKind::add_scalar, a, OpAttrs{.scalar = c}); }
Tensor neg(const Tensor& a) { return scale(a, -1.0); }

Tensor tanh(const Tensor& a) { return unary(OpKind::tanh, a); }
Tensor sigmoid(const Tensor& a) { return unary(OpKind::sigmoid, a); }
Tensor relu(const Tensor& a) { return unary(OpKind::relu, a); }
Tensor square(const Tensor& a) { return unary(OpKind::square, a); }
Tensor sqrt(const Tensor& a) { return unary(OpKind::sqrt, a); }
Tensor reciprocal(const Tensor& a) { return unary(OpKind::reciprocal, a); }
Tensor softmax_lastdim(const Tensor& a) { return unary(OpKind::softmax_lastdim, a); }

Tensor sum(const Tensor& a) { return unary(OpKind::sum, a); }
Tensor mean(const Tensor& a) { return unary(OpKind::mean, a); }

Tensor concat(std::span<const Tensor> parts, std::size_t axis) {
  return primitive_forward(OpKind::concat, parts, OpAttrs{.axis = axis});
}

Tensor slice(const Tensor& a, std::size_t axis, std::size_t start, std::size_t length) {
  return unary(OpKind::slice, a, OpAttrs{.axis = axis, .start = start, .length = length});
}

Tensor reshape(const Tensor& a, Shape shape) { return unary(OpKind::reshape, a, OpAttrs{.shape = std::move(shape)}); }

Tensor swap_axes(const Tensor& a, std::size_t i, std::size_t j) {
  return unary(OpKind::swap_axes, a, OpAttrs{.axis = i, .axis2 = j});
}

Tensor transpose(const Tensor& a) {
  if (a.rank() < 2) throw ShapeError("transpose: needs rank >= 2, got " + to_string(a.shape()));
  return swap_axes(a, a.rank() - 2, a.rank() - 1);
}

Tensor sum_lastdim(const Tensor& a) { return unary(OpKind::sum_lastdim, a); }
Tensor expand_lastdim(const Tensor& a, std::size_t n) { return unary(OpKind::expand_lastdim, a, OpAttrs{.length = n}); }
Tensor broadcast_to(const Tensor& a, Shape shape) {
  return unary(OpKind::broadcast_to, a, OpAttrs{.shape = std::move(shape)});
}
Tensor sum_to(const Tensor& a, Shape shape) { return unary(OpKind::sum_to, a, OpAttrs{.shape = std::move(shape)}); }

namespace detail {

namespace {

Tensor reduce_like(const Tensor& g, const Tensor& target) {
  return g.shape() == target.shape() ? g : sum_to(g, target.shape());
}

}  // namespace

std::vector<Tensor> adjoint(const OpRecord& rec, const Tensor& g, const std::vector<bool>& need) {
  const auto& in = rec.inputs;
  const Tensor& y = rec.output;
  std::vector<Tensor> out(in.size());
  switch (rec.kind) {
    case OpKind::matmul: {
      const Tensor& a = in[0];
      const Tensor& b = in[1];
      if (b.rank() == 3) {
        if (need[0]) out[0] = matmul(g, transpose(b));
        if (need[1]) out[1] = matmul(transpose(a), g);
      } else {
        const std::size_t k = b.shape()[0], n = b.shape()[1];
        const std::size_t m = a.size() / std::max<std::size_t>(k, 1);
        if (need[0]) out[0] = matmul(g, transpose(b));
        if (need[1]) out[1] = matmul(transpose(reshape(a, {m, k})), reshape(g, {m, n}));
      }
      break;
    }
    case OpKind::add:
      if (need[0]) out[0] = g;
      if (need[1]) out[1] = reduce_like(g, in[1]);
      break;
    case OpKind::sub:
      if (need[0]) out[0] = g;
      if (need[1]) out[1] = neg(reduce_like(g, in[1]));
      break;
    case OpKind::multiply:
      if (need[0]) out[0] = multiply(g, in[1]);
      if (need[1]) out[1] = reduce_like(multiply(g, in[0]), in[1]);
      break;
    case OpKind::scale:
      out[0] = scale(g, rec.attrs.scalar);
      break;
    case OpKind::add_scalar:
      out[0] = g;
      break;
    case OpKind::tanh:
      out[0] = multiply(g, add_scalar(neg(square(y)), 1.0));
      break;
    case OpKind::sigmoid:
      out[0] = multiply(g, multiply(y, add_scalar(neg(y), 1.0)));
      break;
    case OpKind::relu: {
      std::vector<double> mask(in[0].size());
      const auto x = in[0].data();
      for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = x[i] > 0 ? 1.0 : 0.0;
      out[0] = multiply(g, Tensor::constant(in[0].shape(), std::move(mask)));
      break;
    }
    case OpKind::softmax_lastdim: {
      const std::size_t n = y.shape().back();
      out[0] = multiply(y, sub(g, expand_lastdim(sum_lastdim(multiply(g, y)), n)));
      break;
    }
    case OpKind::sum:
      out[0] = broadcast_to(g, in[0].shape());
      break;
    case OpKind::mean:
      out[0] = broadcast_to(scale(g, 1.0 / static_cast<double>(in[0].size())), in[0].shape());
      break;
    case OpKind::square:
      out[0] = multiply(g, scale(in[0], 2.0));
      break;
    case OpKind::sqrt:
      out[0] = multiply(g, scale(reciprocal(y), 0.5));
      break;
    case OpKind::reciprocal:
      out[0] = multiply(g, neg(square(y)));
      break;
    case OpKind::concat: {
      std::size_t offset = 0;
      for (std::size_t j = 0; j < in.size(); ++j) {
        const std::size_t len = in[j].shape()[rec.attrs.axis];
        if (need[j]) out[j] = slice(g, rec.attrs.axis, offset, len);
        offset += len;
      }
      break;
    }
    case OpKind::slice: {
      const Shape& s = in[0].shape();
      const std::size_t axis = rec.attrs.axis;
      const std::size_t before = rec.attrs.start;
      const std::size_t after = s[axis] - rec.attrs.start - rec.attrs.length;
      std::vector<Tensor> parts;
      if (before > 0) {
        Shape zs = s;
        zs[axis] = before;
        parts.push_back(Tensor::zeros(std::move(zs)));
      }
      parts.push_back(g);
      if (after > 0) {
        Shape zs = s;
        zs[axis] = after;
        parts.push_back(Tensor::zeros(std::move(zs)));
      }
      out[0] = parts.size() == 1 ? g : concat(parts, axis);
      break;
    }
    case OpKind::reshape:
      out[0] = reshape(g, in[0].shape());
      break;
    case OpKind::swap_axes:
      out[0] = swap_axes(g, rec.attrs.axis, rec.attrs.axis2);
      break;
    case OpKind::sum_lastdim:
      out[0] = expand_lastdim(g, in[0].shape().back());
      break;
    case OpKind::expand_lastdim:
      out[0] = sum_lastdim(g);
      break;
    case OpKind::broadcast_to:
      out[0] = sum_to(g, in[0].shape());
      break;
    case OpKind::sum_to:
      out[0] = broadcast_to(g, in[0].shape());
      break;
  }
  return out;
}

}  // namespace detail

}  // namespace qmg::ad
