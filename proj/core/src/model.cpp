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

#include "hsiduo/model.hpp"

#include <cmath>
#include <utility>

#include "hsiduo/autodiff.hpp"
#include "hsiduo/error.hpp"
#include "hsiduo/random.hpp"

namespace hsiduo {

namespace {

template <typename Params, typename Span, typename Fn>
void visit(Params& p, Fn&& fn) {
  for (std::size_t l = 0; l < p.real_convs.size(); ++l) {
    auto& c = p.real_convs[l];
    const std::string base = "real_conv" + std::to_string(l);
    fn(base + ".kernel", c.kernels.shape(), Span(c.kernels.data()));
    fn(base + ".bias", c.bias.shape(), Span(c.bias.data()));
  }
  for (std::size_t l = 0; l < p.complex_convs.size(); ++l) {
    auto& c = p.complex_convs[l];
    const std::string base = "complex_conv" + std::to_string(l);
    fn(base + ".kernel.re", c.kernels.shape(), Span(c.kernels.re()));
    fn(base + ".kernel.im", c.kernels.shape(), Span(c.kernels.im()));
    fn(base + ".bias.re", c.bias.shape(), Span(c.bias.re()));
    fn(base + ".bias.im", c.bias.shape(), Span(c.bias.im()));
  }
  if (p.se) {
    fn(std::string("se.w1"), p.se->w1.shape(), Span(p.se->w1.data()));
    fn(std::string("se.w2"), p.se->w2.shape(), Span(p.se->w2.data()));
  }
  for (std::size_t l = 0; l < p.dense.size(); ++l) {
    auto& d = p.dense[l];
    const std::string base = "dense" + std::to_string(l);
    fn(base + ".weights", d.weights.shape(), Span(d.weights.data()));
    fn(base + ".bias", d.bias.shape(), Span(d.bias.data()));
  }
}

void check_finite(std::span<const double> v, const std::string& layer) {
  for (double x : v) {
    if (!std::isfinite(x)) throw NumericError("non-finite activation in " + layer);
  }
}

std::uint64_t mix_mask(std::uint64_t h, std::span<const double> pre) {
  std::uint64_t word = 0;
  int bits = 0;
  for (double x : pre) {
    word = (word << 1) | (x > 0.0 ? 1U : 0U);
    if (++bits == 64) {
      h = (h ^ word) * 0x100000001b3ULL;
      word = 0;
      bits = 0;
    }
  }
  return (h ^ word ^ static_cast<std::uint64_t>(pre.size())) * 0x100000001b3ULL;
}

}  // namespace

void for_each_param(ModelParams& params,
                    const std::function<void(const std::string&, const Shape&, std::span<double>)>& fn) {
  visit<ModelParams, std::span<double>>(params, fn);
}

void for_each_param(const ModelParams& params,
                    const std::function<void(const std::string&, const Shape&, std::span<const double>)>& fn) {
  visit<const ModelParams, std::span<const double>>(params, fn);
}

ModelParams zeros_like(const ModelParams& params) {
  ModelParams z = params;
  for_each_param(z, [](const std::string&, const Shape&, std::span<double> v) {
    std::fill(v.begin(), v.end(), 0.0);
  });
  return z;
}

std::size_t parameter_count(const ModelParams& params) {
  std::size_t n = 0;
  for_each_param(params, [&](const std::string&, const Shape&, std::span<const double> v) { n += v.size(); });
  return n;
}

void accumulate(ModelParams& params, const ModelParams& other, double scale) {
  std::vector<std::span<const double>> src;
  for_each_param(other, [&](const std::string&, const Shape&, std::span<const double> v) { src.push_back(v); });
  std::size_t i = 0;
  for_each_param(params, [&](const std::string& name, const Shape&, std::span<double> v) {
    if (i >= src.size() || src[i].size() != v.size()) {
      throw DimensionError("accumulate: layout mismatch at " + name);
    }
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += scale * src[i][k];
    ++i;
  });
  if (i != src.size()) throw DimensionError("accumulate: parameter count mismatch");
}

void round_to_f32(ModelParams& params) {
  for_each_param(params, [](const std::string&, const Shape&, std::span<double> v) {
    for (auto& x : v) x = static_cast<double>(static_cast<float>(x));
  });
}

DualBranchModel::DualBranchModel(ModelConfig cfg, std::size_t n_classes, std::uint64_t init_seed)
    : cfg_(std::move(cfg)), n_classes_(n_classes) {
  validate(cfg_);
  geom_ = hsiduo::geometry(cfg_);
  if (n_classes_ < 2) throw ConfigError("n_classes: need at least 2 classes");

  Rng rng(init_seed);
  std::size_t in_ch = 1;
  for (const auto& spec : cfg_.real_stream) {
    params_.real_convs.push_back(
        init_conv(spec.kernel[0], spec.kernel[1], spec.kernel[2], in_ch, spec.channels, rng));
    in_ch = spec.channels;
  }
  in_ch = 1;
  for (const auto& spec : cfg_.complex_stream) {
    params_.complex_convs.push_back(
        init_complex_conv(spec.kernel[0], spec.kernel[1], spec.kernel[2], in_ch, spec.channels, rng));
    in_ch = spec.channels;
  }
  if (cfg_.se_enabled) params_.se = init_se(geom_.fused_channels, cfg_.se_ratio, rng);
  std::size_t features = geom_.flat_features;
  for (auto width : cfg_.dense_widths) {
    params_.dense.push_back(init_dense(features, width, rng));
    features = width;
  }
  params_.dense.push_back(init_dense(features, n_classes_, rng));
}

DualBranchModel::DualBranchModel(ModelConfig cfg, std::size_t n_classes, ModelParams params)
    : cfg_(std::move(cfg)), n_classes_(n_classes), params_(std::move(params)) {
  validate(cfg_);
  geom_ = hsiduo::geometry(cfg_);
  if (n_classes_ < 2) throw ConfigError("n_classes: need at least 2 classes");
  check_params();
}

void DualBranchModel::check_params() const {
  // A freshly initialized model has the reference layout.
  const DualBranchModel reference(cfg_, n_classes_, std::uint64_t{0});
  std::vector<std::pair<std::string, Shape>> expected;
  for_each_param(reference.params_, [&](const std::string& n, const Shape& s, std::span<const double>) {
    expected.emplace_back(n, s);
  });
  std::size_t i = 0;
  for_each_param(params_, [&](const std::string& n, const Shape& s, std::span<const double> v) {
    if (i >= expected.size() || expected[i].first != n || expected[i].second != s ||
        v.size() != shape_size(s)) {
      throw DimensionError("parameter " + n + " " + shape_to_string(s) +
                           " does not match the configured architecture");
    }
    ++i;
  });
  if (i != expected.size()) {
    throw DimensionError("expected " + std::to_string(expected.size()) + " parameter tensors, got " +
                         std::to_string(i));
  }
}

std::vector<double> DualBranchModel::predict_proba(const Tensor& real_patch,
                                                   const ComplexTensor& complex_patch) const {
  const std::vector<double> none(n_classes_, 0.0);
  return forward_backward(real_patch, complex_patch, none, std::nullopt, nullptr).probabilities;
}

std::size_t DualBranchModel::predict(const Tensor& real_patch, const ComplexTensor& complex_patch) const {
  const auto p = predict_proba(real_patch, complex_patch);
  std::size_t best = 0;
  for (std::size_t k = 1; k < p.size(); ++k) {
    if (p[k] > p[best]) best = k;
  }
  return best;
}

DualBranchModel::Pass DualBranchModel::forward_backward(const Tensor& real_patch,
                                                        const ComplexTensor& complex_patch,
                                                        std::span<const double> target,
                                                        std::optional<std::uint64_t> dropout_seed,
                                                        GradientBundle* grad, double grad_scale) const {
  const std::size_t s = cfg_.patch_size, bands = cfg_.pca_components;
  const Shape patch_shape{s, s, bands};
  if (real_patch.shape() != patch_shape || complex_patch.shape() != patch_shape) {
    throw DimensionError("model expects patches " + shape_to_string(patch_shape) + ", got " +
                         shape_to_string(real_patch.shape()) + " and " +
                         shape_to_string(complex_patch.shape()));
  }
  if (target.size() != n_classes_) {
    throw DimensionError("target has " + std::to_string(target.size()) + " entries for " +
                         std::to_string(n_classes_) + " classes");
  }

  Pass pass;
  std::uint64_t signature = 0xcbf29ce484222325ULL;

  // Real stream.
  const std::size_t n_real = params_.real_convs.size();
  std::vector<Tensor> real_in(n_real), real_pre(n_real);
  Tensor x = real_patch.reshaped({s, s, bands, 1});
  for (std::size_t l = 0; l < n_real; ++l) {
    real_in[l] = std::move(x);
    real_pre[l] = conv3d_real(real_in[l], params_.real_convs[l]);
    check_finite(real_pre[l].data(), "real_conv" + std::to_string(l));
    signature = mix_mask(signature, real_pre[l].data());
    x = relu(real_pre[l]);
  }
  const Shape real_out_shape = x.shape();
  const Tensor real_maps = fold_depth(x);

  // Complex stream.
  const std::size_t n_cplx = params_.complex_convs.size();
  std::vector<ComplexTensor> cplx_in(n_cplx), cplx_pre(n_cplx);
  ComplexTensor z = complex_patch.reshaped({s, s, bands, 1});
  for (std::size_t l = 0; l < n_cplx; ++l) {
    cplx_in[l] = std::move(z);
    cplx_pre[l] = conv3d_complex(cplx_in[l], params_.complex_convs[l]);
    const std::string name = "complex_conv" + std::to_string(l);
    check_finite(cplx_pre[l].re(), name);
    check_finite(cplx_pre[l].im(), name);
    signature = mix_mask(signature, cplx_pre[l].re());
    signature = mix_mask(signature, cplx_pre[l].im());
    z = crelu(cplx_pre[l]);
  }
  const Shape cplx_out_shape = z.shape();
  const ComplexTensor complex_maps = fold_depth(z);

  // Fusion and channel attention.
  const Tensor fused = fuse_streams(real_maps, complex_maps);
  Tensor attended;
  if (params_.se) {
    const auto squeeze = se_squeeze(fused);
    attended = se_scale(fused, se_excite(squeeze, *params_.se));
    check_finite(attended.data(), "se");
  } else {
    attended = fused;
  }

  // Dense head.
  const std::size_t n_hidden = params_.dense.size() - 1;
  std::vector<std::vector<double>> dense_in(params_.dense.size()), dense_pre(n_hidden), masks(n_hidden);
  std::vector<double> h(attended.data().begin(), attended.data().end());
  for (std::size_t l = 0; l < n_hidden; ++l) {
    dense_in[l] = std::move(h);
    dense_pre[l] = dense(dense_in[l], params_.dense[l]);
    check_finite(dense_pre[l], "dense" + std::to_string(l));
    signature = mix_mask(signature, dense_pre[l]);
    h = relu(dense_pre[l]);
    if (dropout_seed) {
      Rng rng(derive_seed(*dropout_seed, {l}));
      masks[l] = dropout_mask(h.size(), cfg_.dropout, rng);
      for (std::size_t i = 0; i < h.size(); ++i) h[i] *= masks[l][i];
    }
  }
  dense_in[n_hidden] = std::move(h);
  const auto logits = dense(dense_in[n_hidden], params_.dense[n_hidden]);
  check_finite(logits, "dense" + std::to_string(n_hidden));
  pass.probabilities = softmax(logits);
  pass.loss = cross_entropy(pass.probabilities, target);
  pass.activation_signature = signature;
  if (!std::isfinite(pass.loss)) throw NumericError("non-finite loss after softmax");

  if (!grad) return pass;

  // Backward.
  auto g = softmax_cross_entropy_grad(pass.probabilities, target);
  for (auto& v : g) v *= grad_scale;
  g = dense_backward(dense_in[n_hidden], params_.dense[n_hidden], g, grad->dense[n_hidden]);
  for (std::size_t l = n_hidden; l-- > 0;) {
    if (dropout_seed) {
      for (std::size_t i = 0; i < g.size(); ++i) g[i] *= masks[l][i];
    }
    g = relu_backward(dense_pre[l], g);
    g = dense_backward(dense_in[l], params_.dense[l], g, grad->dense[l]);
  }

  Tensor g_attended = Tensor::from_flat(attended.shape(), std::move(g));
  Tensor g_fused = params_.se ? se_block_backward(fused, *params_.se, g_attended, *grad->se)
                              : std::move(g_attended);

  Tensor g_real;
  ComplexTensor g_cplx;
  split_fused_grad(g_fused, real_maps.dim(2), g_real, g_cplx);

  Tensor gr = std::move(g_real).reshaped(real_out_shape);
  for (std::size_t l = n_real; l-- > 0;) {
    gr = relu_backward(real_pre[l], gr);
    Tensor gx;
    conv3d_real_backward(real_in[l], params_.real_convs[l], gr, grad->real_convs[l], l > 0 ? &gx : nullptr);
    gr = std::move(gx);
  }

  ComplexTensor gc = g_cplx.reshaped(cplx_out_shape);
  for (std::size_t l = n_cplx; l-- > 0;) {
    gc = crelu_backward(cplx_pre[l], gc);
    ComplexTensor gx;
    conv3d_complex_backward(cplx_in[l], params_.complex_convs[l], gc, grad->complex_convs[l],
                            l > 0 ? &gx : nullptr);
    gc = std::move(gx);
  }
  return pass;
}

}  // namespace hsiduo
