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

#include "hsiduo/layers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hsiduo/error.hpp"

namespace hsiduo {

namespace {

void fill_uniform(std::span<double> v, double bound, Rng& rng) {
  for (auto& x : v) x = rng.uniform(-bound, bound);
}

double glorot_bound(std::size_t fan_in, std::size_t fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

void check_conv_shapes(const Shape& x, const Shape& k, std::size_t bias_len) {
  if (k.size() != 5) {
    throw DimensionError("conv kernels must be [Mh,Mw,Md,Cin,Cout], got " + shape_to_string(k));
  }
  if (x.size() != 4) {
    throw DimensionError("conv input must be [H,W,D,C], got " + shape_to_string(x));
  }
  if (x[3] != k[3]) {
    throw DimensionError("conv input has " + std::to_string(x[3]) + " channels, kernels expect " +
                         std::to_string(k[3]));
  }
  if (bias_len != k[4]) {
    throw DimensionError("conv bias length " + std::to_string(bias_len) + " != out channels " +
                         std::to_string(k[4]));
  }
}

}  // namespace

ConvParams init_conv(std::size_t mh, std::size_t mw, std::size_t md, std::size_t in_channels,
                     std::size_t out_channels, Rng& rng) {
  ConvParams p{Tensor({mh, mw, md, in_channels, out_channels}), Tensor({out_channels})};
  const std::size_t taps = mh * mw * md;
  fill_uniform(p.kernels.data(), glorot_bound(taps * in_channels, taps * out_channels), rng);
  return p;
}

ComplexConvParams init_complex_conv(std::size_t mh, std::size_t mw, std::size_t md,
                                    std::size_t in_channels, std::size_t out_channels, Rng& rng) {
  ComplexConvParams p{ComplexTensor(Shape{mh, mw, md, in_channels, out_channels}),
                      ComplexTensor(Shape{out_channels})};
  const std::size_t taps = mh * mw * md;
  const double bound =
      glorot_bound(taps * in_channels, taps * out_channels) / std::sqrt(2.0);
  fill_uniform(p.kernels.re(), bound, rng);
  fill_uniform(p.kernels.im(), bound, rng);
  return p;
}

SeParams init_se(std::size_t channels, std::size_t ratio, Rng& rng) {
  if (ratio == 0 || channels % ratio != 0 || channels / ratio == 0) {
    throw DimensionError("SE ratio " + std::to_string(ratio) + " must divide channel count " +
                         std::to_string(channels));
  }
  const std::size_t reduced = channels / ratio;
  SeParams p{Tensor({reduced, channels}), Tensor({channels, reduced}), ratio};
  fill_uniform(p.w1.data(), glorot_bound(channels, reduced), rng);
  fill_uniform(p.w2.data(), glorot_bound(reduced, channels), rng);
  return p;
}

DenseParams init_dense(std::size_t in_features, std::size_t out_features, Rng& rng) {
  DenseParams p{Tensor({out_features, in_features}), Tensor({out_features})};
  fill_uniform(p.weights.data(), glorot_bound(in_features, out_features), rng);
  return p;
}

Shape conv_output_shape(const Shape& input, const Shape& kernels) {
  check_conv_shapes(input, kernels, kernels.size() == 5 ? kernels[4] : 0);
  Shape out(4);
  for (std::size_t a = 0; a < 3; ++a) {
    if (kernels[a] == 0 || input[a] < kernels[a]) {
      throw DimensionError("kernel " + shape_to_string(kernels) + " larger than input " +
                           shape_to_string(input));
    }
    out[a] = input[a] - kernels[a] + 1;
  }
  out[3] = kernels[4];
  return out;
}

Tensor conv3d_real(const Tensor& x, const ConvParams& p) {
  check_conv_shapes(x.shape(), p.kernels.shape(), p.bias.size());
  const Shape out_shape = conv_output_shape(x.shape(), p.kernels.shape());
  Tensor out(out_shape);

  const std::size_t W = x.dim(1), D = x.dim(2), cin = x.dim(3);
  const std::size_t mh = p.kernels.dim(0), mw = p.kernels.dim(1), md = p.kernels.dim(2);
  const std::size_t cout = p.kernels.dim(4);
  const std::size_t run = md * cin;  // contiguous (depth, channel) run per (i, j)
  const double* xs = x.data().data();
  const double* ks = p.kernels.data().data();
  double* os = out.data().data();

  for (std::size_t ox = 0; ox < out_shape[0]; ++ox) {
    for (std::size_t oy = 0; oy < out_shape[1]; ++oy) {
      for (std::size_t oz = 0; oz < out_shape[2]; ++oz) {
        double* acc = os + ((ox * out_shape[1] + oy) * out_shape[2] + oz) * cout;
        std::copy_n(p.bias.data().data(), cout, acc);
        for (std::size_t i = 0; i < mh; ++i) {
          for (std::size_t j = 0; j < mw; ++j) {
            const double* xp = xs + (((ox + i) * W + (oy + j)) * D + oz) * cin;
            const double* kp = ks + (i * mw + j) * run * cout;
            for (std::size_t t = 0; t < run; ++t) {
              const double xv = xp[t];
              const double* kr = kp + t * cout;
              for (std::size_t o = 0; o < cout; ++o) acc[o] += xv * kr[o];
            }
          }
        }
      }
    }
  }
  return out;
}

ComplexTensor conv3d_complex(const ComplexTensor& x, const ComplexConvParams& p) {
  check_conv_shapes(x.shape(), p.kernels.shape(), p.bias.size());
  const Shape out_shape = conv_output_shape(x.shape(), p.kernels.shape());
  ComplexTensor out(out_shape);

  const std::size_t W = x.dim(1), D = x.dim(2), cin = x.dim(3);
  const std::size_t mh = p.kernels.dim(0), mw = p.kernels.dim(1), md = p.kernels.dim(2);
  const std::size_t cout = p.kernels.dim(4);
  const std::size_t run = md * cin;
  const double* xr = x.re().data();
  const double* xi = x.im().data();
  const double* kr = p.kernels.re().data();
  const double* ki = p.kernels.im().data();

  for (std::size_t ox = 0; ox < out_shape[0]; ++ox) {
    for (std::size_t oy = 0; oy < out_shape[1]; ++oy) {
      for (std::size_t oz = 0; oz < out_shape[2]; ++oz) {
        const std::size_t base = ((ox * out_shape[1] + oy) * out_shape[2] + oz) * cout;
        double* ar = out.re().data() + base;
        double* ai = out.im().data() + base;
        std::copy_n(p.bias.re().data(), cout, ar);
        std::copy_n(p.bias.im().data(), cout, ai);
        for (std::size_t i = 0; i < mh; ++i) {
          for (std::size_t j = 0; j < mw; ++j) {
            const std::size_t xoff = (((ox + i) * W + (oy + j)) * D + oz) * cin;
            const std::size_t koff = (i * mw + j) * run * cout;
            for (std::size_t t = 0; t < run; ++t) {
              const double vr = xr[xoff + t], vi = xi[xoff + t];
              const double* wr = kr + koff + t * cout;
              const double* wi = ki + koff + t * cout;
              for (std::size_t o = 0; o < cout; ++o) {
                ar[o] += wr[o] * vr - wi[o] * vi;
                ai[o] += wr[o] * vi + wi[o] * vr;
              }
            }
          }
        }
      }
    }
  }
  return out;
}

Tensor relu(const Tensor& x) {
  return elementwise(x, [](double v) { return v > 0.0 ? v : 0.0; });
}

std::vector<double> relu(std::span<const double> x) {
  std::vector<double> out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [](double v) { return v > 0.0 ? v : 0.0; });
  return out;
}

ComplexTensor crelu(const ComplexTensor& z) {
  ComplexTensor out(z.shape());
  for (std::size_t i = 0; i < z.size(); ++i) {
    out.re()[i] = z.re()[i] > 0.0 ? z.re()[i] : 0.0;
    out.im()[i] = z.im()[i] > 0.0 ? z.im()[i] : 0.0;
  }
  return out;
}

Tensor fold_depth(const Tensor& x) {
  if (x.rank() != 4) throw DimensionError("fold_depth expects [H,W,D,C], got " + shape_to_string(x.shape()));
  return x.reshaped({x.dim(0), x.dim(1), x.dim(2) * x.dim(3)});
}

ComplexTensor fold_depth(const ComplexTensor& x) {
  if (x.rank() != 4) throw DimensionError("fold_depth expects [H,W,D,C], got " + shape_to_string(x.shape()));
  return x.reshaped({x.dim(0), x.dim(1), x.dim(2) * x.dim(3)});
}

Tensor fuse_streams(const Tensor& real_maps, const ComplexTensor& complex_maps) {
  return concat_channels(real_maps, complex_to_real_channels(complex_maps));
}

std::vector<double> se_squeeze(const Tensor& u) {
  if (u.rank() != 3) throw DimensionError("se_squeeze expects [H,W,C], got " + shape_to_string(u.shape()));
  const std::size_t pixels = u.dim(0) * u.dim(1), c = u.dim(2);
  std::vector<double> z(c, 0.0);
  for (std::size_t p = 0; p < pixels; ++p) {
    for (std::size_t k = 0; k < c; ++k) z[k] += u[p * c + k];
  }
  const double inv = 1.0 / static_cast<double>(pixels);
  for (auto& v : z) v *= inv;
  return z;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

std::vector<double> se_excite(std::span<const double> z, const SeParams& p) {
  const std::size_t c = p.channels(), r = p.reduced();
  if (z.size() != c || p.w2.dim(0) != c || p.w2.dim(1) != r) {
    throw DimensionError("se_excite: z has " + std::to_string(z.size()) + " entries, W1 " +
                         shape_to_string(p.w1.shape()) + ", W2 " + shape_to_string(p.w2.shape()));
  }
  std::vector<double> hidden(r, 0.0);
  for (std::size_t i = 0; i < r; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < c; ++k) acc += p.w1[i * c + k] * z[k];
    hidden[i] = acc > 0.0 ? acc : 0.0;
  }
  std::vector<double> s(c);
  for (std::size_t k = 0; k < c; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < r; ++i) acc += p.w2[k * r + i] * hidden[i];
    s[k] = sigmoid(acc);
  }
  return s;
}

Tensor se_scale(const Tensor& u, std::span<const double> s) {
  if (u.rank() != 3 || s.size() != u.dim(2)) {
    throw DimensionError("se_scale: " + std::to_string(s.size()) + " weights for map " +
                         shape_to_string(u.shape()));
  }
  const std::size_t pixels = u.dim(0) * u.dim(1), c = u.dim(2);
  Tensor out(u.shape());
  for (std::size_t p = 0; p < pixels; ++p) {
    for (std::size_t k = 0; k < c; ++k) out[p * c + k] = s[k] * u[p * c + k];
  }
  return out;
}

std::vector<double> dense(std::span<const double> x, const DenseParams& p) {
  const std::size_t in = p.in_features(), out = p.out_features();
  if (x.size() != in || p.bias.size() != out) {
    throw DimensionError("dense: input of " + std::to_string(x.size()) + " for weights " +
                         shape_to_string(p.weights.shape()));
  }
  std::vector<double> y(out);
  const double* w = p.weights.data().data();
  for (std::size_t o = 0; o < out; ++o) {
    double acc = p.bias[o];
    const double* row = w + o * in;
    for (std::size_t i = 0; i < in; ++i) acc += row[i] * x[i];
    y[o] = acc;
  }
  return y;
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out(logits.size());
  if (logits.empty()) return out;
  const double m = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - m);
    total += out[i];
  }
  for (auto& v : out) v /= total;
  return out;
}

std::vector<double> dropout_mask(std::size_t n, double rate, Rng& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw ConfigError("dropout rate must lie in [0, 1), got " + std::to_string(rate));
  }
  std::vector<double> mask(n, 1.0);
  if (rate == 0.0) return mask;
  const double keep_scale = 1.0 / (1.0 - rate);
  for (auto& m : mask) m = rng.uniform() < rate ? 0.0 : keep_scale;
  return mask;
}

std::vector<double> dropout(std::span<const double> x, double rate, Rng& rng, bool training) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw ConfigError("dropout rate must lie in [0, 1), got " + std::to_string(rate));
  }
  std::vector<double> out(x.begin(), x.end());
  if (!training) return out;
  const auto mask = dropout_mask(x.size(), rate, rng);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= mask[i];
  return out;
}

}  // namespace hsiduo
