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

#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace hsiduo {

using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& shape);
std::string shape_to_string(const Shape& shape);
/// Row-major strides for `shape`.
Shape strides_of(const Shape& shape);

/// Dense row-major array of doubles.
class Tensor {
 public:
  Tensor() = default;
  /// Zero-filled tensor of the given shape.
  explicit Tensor(Shape shape);

  static Tensor zeros(Shape shape);
  /// Throws DimensionError unless product(shape) == data.size().
  static Tensor from_flat(Shape shape, std::vector<double> data);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }
  const std::vector<double>& values() const { return data_; }

  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }

  /// Flat offset of a multi-index; bounds-checked.
  std::size_t offset(std::initializer_list<std::size_t> index) const;
  double at(std::initializer_list<std::size_t> index) const { return data_[offset(index)]; }
  double& at(std::initializer_list<std::size_t> index) { return data_[offset(index)]; }

  /// Same data, new shape. Throws DimensionError if the sizes differ.
  Tensor reshaped(Shape shape) const&;
  Tensor reshaped(Shape shape) &&;

  bool operator==(const Tensor&) const = default;

 private:
  Shape shape_;
  std::vector<double> data_;
};

/// Complex tensor with split real/imaginary storage.
class ComplexTensor {
 public:
  ComplexTensor() = default;
  explicit ComplexTensor(Shape shape);
  /// Imaginary part zero.
  explicit ComplexTensor(const Tensor& real);
  ComplexTensor(Tensor re, Tensor im);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const { return re_.size(); }

  std::span<const double> re() const { return re_; }
  std::span<double> re() { return re_; }
  std::span<const double> im() const { return im_; }
  std::span<double> im() { return im_; }

  Tensor real_part() const { return Tensor::from_flat(shape_, re_); }
  Tensor imag_part() const { return Tensor::from_flat(shape_, im_); }

  ComplexTensor reshaped(Shape shape) const;

  bool operator==(const ComplexTensor&) const = default;

 private:
  Shape shape_;
  std::vector<double> re_;
  std::vector<double> im_;
};

Tensor elementwise(const Tensor& x, const std::function<double(double)>& f);

/// Concatenate two [H,W,C] tensors along the channel axis.
Tensor concat_channels(const Tensor& a, const Tensor& b);

/// Channels [begin, end) of an [H,W,C] tensor.
Tensor slice_channels(const Tensor& x, std::size_t begin, std::size_t end);

/// [H,W,C] complex -> [H,W,2C] real: re in channels 0..C, im in C..2C.
Tensor complex_to_real_channels(const ComplexTensor& x);

}  // namespace hsiduo
