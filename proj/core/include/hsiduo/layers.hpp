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
#include <span>
#include <vector>

#include "hsiduo/random.hpp"
#include "hsiduo/tensor.hpp"

namespace hsiduo {

/// Real 3D convolution weights: kernels [Mh,Mw,Md,Cin,Cout], bias [Cout].
struct ConvParams {
  Tensor kernels;
  Tensor bias;

  std::size_t in_channels() const { return kernels.dim(3); }
  std::size_t out_channels() const { return kernels.dim(4); }
};

/// Complex 3D convolution weights, same layout as ConvParams.
struct ComplexConvParams {
  ComplexTensor kernels;
  ComplexTensor bias;

  std::size_t in_channels() const { return kernels.dim(3); }
  std::size_t out_channels() const { return kernels.dim(4); }
};

/// Squeeze-and-excitation bottleneck: w1 [C/r, C], w2 [C, C/r]. No biases.
struct SeParams {
  Tensor w1;
  Tensor w2;
  std::size_t ratio = 1;

  std::size_t channels() const { return w1.dim(1); }
  std::size_t reduced() const { return w1.dim(0); }
};

/// Fully-connected layer: weights [out, in], bias [out].
struct DenseParams {
  Tensor weights;
  Tensor bias;

  std::size_t in_features() const { return weights.dim(1); }
  std::size_t out_features() const { return weights.dim(0); }
};

// Initialization. Biases start at zero; weights are Glorot-uniform.
// Complex weights draw re and im independently with the bound scaled by 1/sqrt(2).
ConvParams init_conv(std::size_t mh, std::size_t mw, std::size_t md, std::size_t in_channels,
                     std::size_t out_channels, Rng& rng);
ComplexConvParams init_complex_conv(std::size_t mh, std::size_t mw, std::size_t md,
                                    std::size_t in_channels, std::size_t out_channels, Rng& rng);
SeParams init_se(std::size_t channels, std::size_t ratio, Rng& rng);
DenseParams init_dense(std::size_t in_features, std::size_t out_features, Rng& rng);

/// Output extent of a valid (unpadded) convolution, or DimensionError.
Shape conv_output_shape(const Shape& input, const Shape& kernels);

/// Valid cross-correlation of x [H,W,D,Cin]. Linear part only.
Tensor conv3d_real(const Tensor& x, const ConvParams& p);

/// Complex multiply-accumulate version of conv3d_real, plus complex bias.
ComplexTensor conv3d_complex(const ComplexTensor& x, const ComplexConvParams& p);

Tensor relu(const Tensor& x);
std::vector<double> relu(std::span<const double> x);

/// ReLU on real and imaginary parts independently.
ComplexTensor crelu(const ComplexTensor& z);

/// [H,W,D,C] -> [H,W,D*C]; channel index becomes d*C + c.
Tensor fold_depth(const Tensor& x);
ComplexTensor fold_depth(const ComplexTensor& x);

/// concat(real_maps, re/im channels of complex_maps).
Tensor fuse_streams(const Tensor& real_maps, const ComplexTensor& complex_maps);

/// Global average pool of each channel of u [H,W,C].
std::vector<double> se_squeeze(const Tensor& u);
/// s = sigmoid(W2 relu(W1 z)).
std::vector<double> se_excite(std::span<const double> z, const SeParams& p);
/// out(i,j,c) = s[c] * u(i,j,c).
Tensor se_scale(const Tensor& u, std::span<const double> s);

double sigmoid(double x);

std::vector<double> dense(std::span<const double> x, const DenseParams& p);

/// Max-subtracted softmax.
std::vector<double> softmax(std::span<const double> logits);

/// Per-element multipliers for inverted dropout: 0 with probability `rate`,
/// 1/(1-rate) otherwise. Throws ConfigError unless 0 <= rate < 1.
std::vector<double> dropout_mask(std::size_t n, double rate, Rng& rng);

/// Inverted dropout in training mode, identity otherwise.
std::vector<double> dropout(std::span<const double> x, double rate, Rng& rng, bool training);

}  // namespace hsiduo
