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

#include "hsiduo/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hsiduo/error.hpp"

namespace hsiduo {

double cross_entropy(std::span<const double> pred, std::span<const double> target) {
  if (pred.size() != target.size()) {
    throw DimensionError("cross_entropy: " + std::to_string(pred.size()) + " predictions vs " +
                         std::to_string(target.size()) + " targets");
  }
  double loss = 0.0;
  for (std::size_t k = 0; k < pred.size(); ++k) {
    if (target[k] != 0.0) loss -= target[k] * std::log(std::max(pred[k], 1e-12));
  }
  return loss;
}

std::vector<double> softmax_cross_entropy_grad(std::span<const double> pred,
                                               std::span<const double> target) {
  if (pred.size() != target.size()) {
    throw DimensionError("softmax_cross_entropy_grad: length mismatch");
  }
  std::vector<double> g(pred.size());
  for (std::size_t k = 0; k < pred.size(); ++k) g[k] = pred[k] - target[k];
  return g;
}

void conv3d_real_backward(const Tensor& x, const ConvParams& p, const Tensor& grad_out,
                          ConvParams& grad, Tensor* grad_x) {
  const Shape out_shape = conv_output_shape(x.shape(), p.kernels.shape());
  if (grad_out.shape() != out_shape) {
    throw DimensionError("conv3d_real_backward: grad " + shape_to_string(grad_out.shape()) +
                         " vs output " + shape_to_string(out_shape));
  }
  if (grad_x) *grad_x = Tensor(x.shape());

  const std::size_t W = x.dim(1), D = x.dim(2), cin = x.dim(3);
  const std::size_t mh = p.kernels.dim(0), mw = p.kernels.dim(1), md = p.kernels.dim(2);
  const std::size_t cout = p.kernels.dim(4);
  const std::size_t run = md * cin;
  const double* xs = x.data().data();
  const double* ks = p.kernels.data().data();
  double* dk = grad.kernels.data().data();
  double* db = grad.bias.data().data();
  double* dx = grad_x ? grad_x->data().data() : nullptr;

  for (std::size_t ox = 0; ox < out_shape[0]; ++ox) {
    for (std::size_t oy = 0; oy < out_shape[1]; ++oy) {
      for (std::size_t oz = 0; oz < out_shape[2]; ++oz) {
        const double* g = grad_out.data().data() + ((ox * out_shape[1] + oy) * out_shape[2] + oz) * cout;
        for (std::size_t o = 0; o < cout; ++o) db[o] += g[o];
        for (std::size_t i = 0; i < mh; ++i) {
          for (std::size_t j = 0; j < mw; ++j) {
            const std::size_t xoff = (((ox + i) * W + (oy + j)) * D + oz) * cin;
            const std::size_t koff = (i * mw + j) * run * cout;
            for (std::size_t t = 0; t < run; ++t) {
              const double xv = xs[xoff + t];
              double* dkr = dk + koff + t * cout;
              const double* kr = ks + koff + t * cout;
              double acc = 0.0;
              for (std::size_t o = 0; o < cout; ++o) {
                dkr[o] += xv * g[o];
                acc += kr[o] * g[o];
              }
              if (dx) dx[xoff + t] += acc;
            }
          }
        }
      }
    }
  }
}

void conv3d_complex_backward(const ComplexTensor& x, const ComplexConvParams& p,
                             const ComplexTensor& grad_out, ComplexConvParams& grad,
                             ComplexTensor* grad_x) {
  const Shape out_shape = conv_output_shape(x.shape(), p.kernels.shape());
  if (grad_out.shape() != out_shape) {
    throw DimensionError("conv3d_complex_backward: grad " + shape_to_string(grad_out.shape()) +
                         " vs output " + shape_to_string(out_shape));
  }
  if (grad_x) *grad_x = ComplexTensor(x.shape());

  const std::size_t W = x.dim(1), D = x.dim(2), cin = x.dim(3);
  const std::size_t mh = p.kernels.dim(0), mw = p.kernels.dim(1), md = p.kernels.dim(2);
  const std::size_t cout = p.kernels.dim(4);
  const std::size_t run = md * cin;
  const double* xr = x.re().data();
  const double* xi = x.im().data();
  const double* kr = p.kernels.re().data();
  const double* ki = p.kernels.im().data();
  double* dkr = grad.kernels.re().data();
  double* dki = grad.kernels.im().data();
  double* dbr = grad.bias.re().data();
  double* dbi = grad.bias.im().data();
  double* dxr = grad_x ? grad_x->re().data() : nullptr;
  double* dxi = grad_x ? grad_x->im().data() : nullptr;

  for (std::size_t ox = 0; ox < out_shape[0]; ++ox) {
    for (std::size_t oy = 0; oy < out_shape[1]; ++oy) {
      for (std::size_t oz = 0; oz < out_shape[2]; ++oz) {
        const std::size_t goff = ((ox * out_shape[1] + oy) * out_shape[2] + oz) * cout;
        const double* gr = grad_out.re().data() + goff;
        const double* gi = grad_out.im().data() + goff;
        for (std::size_t o = 0; o < cout; ++o) {
          dbr[o] += gr[o];
          dbi[o] += gi[o];
        }
        for (std::size_t i = 0; i < mh; ++i) {
          for (std::size_t j = 0; j < mw; ++j) {
            const std::size_t xoff = (((ox + i) * W + (oy + j)) * D + oz) * cin;
            const std::size_t koff = (i * mw + j) * run * cout;
            for (std::size_t t = 0; t < run; ++t) {
              const double vr = xr[xoff + t], vi = xi[xoff + t];
              const std::size_t k0 = koff + t * cout;
              double acc_r = 0.0, acc_i = 0.0;
              for (std::size_t o = 0; o < cout; ++o) {
                // dL/dK = conj(X) * G, dL/dX = conj(K) * G
                dkr[k0 + o] += vr * gr[o] + vi * gi[o];
                dki[k0 + o] += vr * gi[o] - vi * gr[o];
                acc_r += kr[k0 + o] * gr[o] + ki[k0 + o] * gi[o];
                acc_i += kr[k0 + o] * gi[o] - ki[k0 + o] * gr[o];
              }
              if (dxr) {
                dxr[xoff + t] += acc_r;
                dxi[xoff + t] += acc_i;
              }
            }
          }
        }
      }
    }
  }
}

Tensor relu_backward(const Tensor& pre, const Tensor& grad_out) {
  if (pre.shape() != grad_out.shape()) throw DimensionError("relu_backward: shape mismatch");
  Tensor g(pre.shape());
  for (std::size_t i = 0; i < pre.size(); ++i) g[i] = pre[i] > 0.0 ? grad_out[i] : 0.0;
  return g;
}

std::vector<double> relu_backward(std::span<const double> pre, std::span<const double> grad_out) {
  if (pre.size() != grad_out.size()) throw DimensionError("relu_backward: length mismatch");
  std::vector<double> g(pre.size());
  for (std::size_t i = 0; i < pre.size(); ++i) g[i] = pre[i] > 0.0 ? grad_out[i] : 0.0;
  return g;
}

ComplexTensor crelu_backward(const ComplexTensor& pre, const ComplexTensor& grad_out) {
  if (pre.shape() != grad_out.shape()) throw DimensionError("crelu_backward: shape mismatch");
  ComplexTensor g(pre.shape());
  for (std::size_t i = 0; i < pre.size(); ++i) {
    g.re()[i] = pre.re()[i] > 0.0 ? grad_out.re()[i] : 0.0;
    g.im()[i] = pre.im()[i] > 0.0 ? grad_out.im()[i] : 0.0;
  }
  return g;
}

Tensor se_block_backward(const Tensor& u, const SeParams& p, const Tensor& grad_out, SeParams& grad) {
  if (u.shape() != grad_out.shape()) throw DimensionError("se_block_backward: shape mismatch");
  const std::size_t pixels = u.dim(0) * u.dim(1), c = p.channels(), r = p.reduced();
  if (u.dim(2) != c) throw DimensionError("se_block_backward: map channels != SE channels");

  // Recompute the excitation path.
  const auto z = se_squeeze(u);
  std::vector<double> pre_hidden(r), hidden(r);
  for (std::size_t i = 0; i < r; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < c; ++k) acc += p.w1[i * c + k] * z[k];
    pre_hidden[i] = acc;
    hidden[i] = acc > 0.0 ? acc : 0.0;
  }
  std::vector<double> s(c);
  for (std::size_t k = 0; k < c; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < r; ++i) acc += p.w2[k * r + i] * hidden[i];
    s[k] = sigmoid(acc);
  }

  Tensor du(u.shape());
  std::vector<double> ds(c, 0.0);
  for (std::size_t q = 0; q < pixels; ++q) {
    for (std::size_t k = 0; k < c; ++k) {
      ds[k] += grad_out[q * c + k] * u[q * c + k];
      du[q * c + k] = s[k] * grad_out[q * c + k];
    }
  }
  std::vector<double> dt(c);
  for (std::size_t k = 0; k < c; ++k) dt[k] = ds[k] * s[k] * (1.0 - s[k]);

  std::vector<double> dh(r, 0.0);
  for (std::size_t k = 0; k < c; ++k) {
    for (std::size_t i = 0; i < r; ++i) {
      grad.w2[k * r + i] += dt[k] * hidden[i];
      dh[i] += p.w2[k * r + i] * dt[k];
    }
  }
  std::vector<double> dz(c, 0.0);
  for (std::size_t i = 0; i < r; ++i) {
    const double da = pre_hidden[i] > 0.0 ? dh[i] : 0.0;
    if (da == 0.0) continue;
    for (std::size_t k = 0; k < c; ++k) {
      grad.w1[i * c + k] += da * z[k];
      dz[k] += p.w1[i * c + k] * da;
    }
  }
  const double inv = 1.0 / static_cast<double>(pixels);
  for (std::size_t q = 0; q < pixels; ++q) {
    for (std::size_t k = 0; k < c; ++k) du[q * c + k] += dz[k] * inv;
  }
  return du;
}

std::vector<double> dense_backward(std::span<const double> x, const DenseParams& p,
                                   std::span<const double> grad_out, DenseParams& grad) {
  const std::size_t in = p.in_features(), out = p.out_features();
  if (x.size() != in || grad_out.size() != out) {
    throw DimensionError("dense_backward: shapes do not match weights " +
                         shape_to_string(p.weights.shape()));
  }
  std::vector<double> dx(in, 0.0);
  const double* w = p.weights.data().data();
  double* dw = grad.weights.data().data();
  for (std::size_t o = 0; o < out; ++o) {
    const double g = grad_out[o];
    grad.bias[o] += g;
    if (g == 0.0) continue;
    const double* row = w + o * in;
    double* drow = dw + o * in;
    for (std::size_t i = 0; i < in; ++i) {
      drow[i] += g * x[i];
      dx[i] += row[i] * g;
    }
  }
  return dx;
}

void split_fused_grad(const Tensor& grad, std::size_t real_channels, Tensor& grad_real,
                      ComplexTensor& grad_complex) {
  if (grad.rank() != 3 || grad.dim(2) < real_channels || (grad.dim(2) - real_channels) % 2 != 0) {
    throw DimensionError("split_fused_grad: cannot split " + shape_to_string(grad.shape()) +
                         " at " + std::to_string(real_channels));
  }
  const std::size_t total = grad.dim(2);
  const std::size_t cc = (total - real_channels) / 2;
  grad_real = slice_channels(grad, 0, real_channels);
  grad_complex = ComplexTensor(slice_channels(grad, real_channels, real_channels + cc),
                               slice_channels(grad, real_channels + cc, total));
}

}  // namespace hsiduo
