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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "hsiduo/tensor.hpp"

namespace hsiduo {

enum class FftDirection { kForward, kInverse };

bool is_power_of_two(std::size_t n);

/// Precomputed radix-2 plan for one transform length.
class FftPlan {
 public:
  /// Throws DimensionError unless n is a power of two.
  explicit FftPlan(std::size_t n);

  std::size_t size() const { return n_; }
  /// exp(-2*pi*i*k/n) for k in [0, n/2).
  std::span<const std::complex<double>> twiddles() const { return twiddles_; }

  /// In-place transform. Forward is unnormalized; inverse divides by n.
  void transform(std::span<std::complex<double>> x, FftDirection dir) const;

 private:
  std::size_t n_;
  std::vector<std::complex<double>> twiddles_;
  std::vector<std::size_t> bit_reverse_;
};

std::vector<std::complex<double>> fft_1d(std::span<const std::complex<double>> x,
                                         FftDirection dir = FftDirection::kForward);

/// Unnormalized forward 2D transform of an [S,S] complex matrix (rows then columns).
ComplexTensor fft_2d(const ComplexTensor& slice, FftDirection dir = FftDirection::kForward);

/// Per-band 2D spatial FFT of a real [S,S,C] patch, scaled by 1/S^2.
/// Bands are transformed independently; DC stays at bin (0,0).
ComplexTensor bandwise_fft(const Tensor& patch);

}  // namespace hsiduo
