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

#include <span>
#include <vector>

#include "hsiduo/layers.hpp"
#include "hsiduo/tensor.hpp"

namespace hsiduo {

// Reverse-mode rules for each layer. Parameter gradients are accumulated
// (+=) into `grad`, so a zero-initialized bundle can collect a whole batch.
// Complex parameters use the real-composite convention: the re and im parts
// of every weight are independent real variables, and a complex gradient
// G = dL/dRe + i dL/dIm is propagated as conj(K) * G.

/// -sum target_k * log(max(pred_k, 1e-12)).
double cross_entropy(std::span<const double> pred, std::span<const double> target);

/// Gradient of cross_entropy(softmax(logits), target) w.r.t. the logits: pred - target.
std::vector<double> softmax_cross_entropy_grad(std::span<const double> pred,
                                               std::span<const double> target);

/// `grad_x` may be null when the input gradient is not needed.
void conv3d_real_backward(const Tensor& x, const ConvParams& p, const Tensor& grad_out,
                          ConvParams& grad, Tensor* grad_x);

void conv3d_complex_backward(const ComplexTensor& x, const ComplexConvParams& p,
                             const ComplexTensor& grad_out, ComplexConvParams& grad,
                             ComplexTensor* grad_x);

/// Gradient through relu, given the pre-activation.
Tensor relu_backward(const Tensor& pre, const Tensor& grad_out);
std::vector<double> relu_backward(std::span<const double> pre, std::span<const double> grad_out);

ComplexTensor crelu_backward(const ComplexTensor& pre, const ComplexTensor& grad_out);

/// Backward through se_scale(u, se_excite(se_squeeze(u))). Returns dL/du.
Tensor se_block_backward(const Tensor& u, const SeParams& p, const Tensor& grad_out, SeParams& grad);

/// Returns dL/dx.
std::vector<double> dense_backward(std::span<const double> x, const DenseParams& p,
                                   std::span<const double> grad_out, DenseParams& grad);

/// Inverse of fuse_streams for gradients: splits [H,W,Cr+2Cc] into the real
/// part and the complex part.
void split_fused_grad(const Tensor& grad, std::size_t real_channels, Tensor& grad_real,
                      ComplexTensor& grad_complex);

}  // namespace hsiduo
