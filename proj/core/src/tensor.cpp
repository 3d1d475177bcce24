// Copyright 2026 The hsiduo Authors
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

#include "hsiduo/tensor.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "hsiduo/error.hpp"

namespace hsiduo {

std::size_t shape_size(const Shape& shape) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

std::string shape_to_string(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ',';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

Shape strides_of(const Shape& shape) {
  Shape strides(shape.size(), 1);
  for (std::size_t a = shape.size(); a-- > 1;) strides[a - 1] = strides[a] * shape[a];
  return strides;
}

Tensor::Tensor(Shape shape) : shape_(std::move(shape)), data_(shape_size(shape_), 0.0) {}

Tensor Tensor::zeros(Shape shape) { return Tensor(std::move(shape)); }

Tensor Tensor::from_flat(Shape shape, std::vector<double> data) {
  if (shape_size(shape) != data.size()) {
    throw DimensionError("from_flat: shape " + shape_to_string(shape) + " needs " +
                         std::to_string(shape_size(shape)) + " values, got " +
                         std::to_string(data.size()));
  }
  Tensor t;
  t.shape_ = std::move(shape);
  t.data_ = std::move(data);
  return t;
}

std::size_t Tensor::offset(std::initializer_list<std::size_t> index) const {
  if (index.size() != shape_.size()) {
    throw DimensionError("index rank " + std::to_string(index.size()) + " != tensor rank " +
                         std::to_string(shape_.size()));
  }
  std::size_t off = 0;
  std::size_t axis = 0;
  for (auto i : index) {
    if (i >= shape_[axis]) {
      throw DimensionError("index " + std::to_string(i) + " out of range on axis " +
                           std::to_string(axis) + " of " + shape_to_string(shape_));
    }
    off = off * shape_[axis] + i;
    ++axis;
  }
  return off;
}

Tensor Tensor::reshaped(Shape shape) const& {
  Tensor copy = *this;
  return std::move(copy).reshaped(std::move(shape));
}

Tensor Tensor::reshaped(Shape shape) && {
  if (shape_size(shape) != data_.size()) {
    throw DimensionError("reshape " + shape_to_string(shape_) + " -> " + shape_to_string(shape));
  }
  shape_ = std::move(shape);
  return std::move(*this);
}

ComplexTensor::ComplexTensor(Shape shape)
    : shape_(std::move(shape)), re_(shape_size(shape_), 0.0), im_(re_.size(), 0.0) {}

ComplexTensor::ComplexTensor(const Tensor& real)
    : shape_(real.shape()), re_(real.values()), im_(real.size(), 0.0) {}

ComplexTensor::ComplexTensor(Tensor re, Tensor im) : shape_(re.shape()) {
  if (re.shape() != im.shape()) {
    throw DimensionError("complex parts differ in shape: " + shape_to_string(re.shape()) + " vs " +
                         shape_to_string(im.shape()));
  }
  re_ = re.values();
  im_ = im.values();
}

ComplexTensor ComplexTensor::reshaped(Shape shape) const {
  if (shape_size(shape) != re_.size()) {
    throw DimensionError("reshape " + shape_to_string(shape_) + " -> " + shape_to_string(shape));
  }
  ComplexTensor out = *this;
  out.shape_ = std::move(shape);
  return out;
}

Tensor elementwise(const Tensor& x, const std::function<double(double)>& f) {
  Tensor out(x.shape());
  auto src = x.data();
  auto dst = out.data();
  std::transform(src.begin(), src.end(), dst.begin(), f);
  return out;
}

namespace {

void require_hwc(const Shape& s, const char* what) {
  if (s.size() != 3) {
    throw DimensionError(std::string(what) + ": expected [H,W,C], got " + shape_to_string(s));
  }
}

}  // namespace

Tensor concat_channels(const Tensor& a, const Tensor& b) {
  require_hwc(a.shape(), "concat_channels");
  require_hwc(b.shape(), "concat_channels");
  if (a.dim(0) != b.dim(0) || a.dim(1) != b.dim(1)) {
    throw DimensionError("concat_channels: spatial mismatch " + shape_to_string(a.shape()) +
                         " vs " + shape_to_string(b.shape()));
  }
  const std::size_t pixels = a.dim(0) * a.dim(1);
  const std::size_t ca = a.dim(2), cb = b.dim(2);
  Tensor out({a.dim(0), a.dim(1), ca + cb});
  auto dst = out.data();
  auto sa = a.data();
  auto sb = b.data();
  for (std::size_t p = 0; p < pixels; ++p) {
    std::copy_n(sa.begin() + p * ca, ca, dst.begin() + p * (ca + cb));
    std::copy_n(sb.begin() + p * cb, cb, dst.begin() + p * (ca + cb) + ca);
  }
  return out;
}

Tensor slice_channels(const Tensor& x, std::size_t begin, std::size_t end) {
  require_hwc(x.shape(), "slice_channels");
  if (begin > end || end > x.dim(2)) {
    throw DimensionError("slice_channels: range [" + std::to_string(begin) + "," +
                         std::to_string(end) + ") outside " + shape_to_string(x.shape()));
  }
  const std::size_t pixels = x.dim(0) * x.dim(1);
  const std::size_t c = x.dim(2), n = end - begin;
  Tensor out({x.dim(0), x.dim(1), n});
  auto src = x.data();
  auto dst = out.data();
  for (std::size_t p = 0; p < pixels; ++p) {
    std::copy_n(src.begin() + p * c + begin, n, dst.begin() + p * n);
  }
  return out;
}

Tensor complex_to_real_channels(const ComplexTensor& x) {
  require_hwc(x.shape(), "complex_to_real_channels");
  const std::size_t pixels = x.dim(0) * x.dim(1);
  const std::size_t c = x.dim(2);
  Tensor out({x.dim(0), x.dim(1), 2 * c});
  auto dst = out.data();
  for (std::size_t p = 0; p < pixels; ++p) {
    std::copy_n(x.re().begin() + p * c, c, dst.begin() + p * 2 * c);
    std::copy_n(x.im().begin() + p * c, c, dst.begin() + p * 2 * c + c);
  }
  return out;
}

}  // namespace hsiduo
