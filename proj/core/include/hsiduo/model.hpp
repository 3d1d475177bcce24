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
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hsiduo/config.hpp"
#include "hsiduo/layers.hpp"
#include "hsiduo/tensor.hpp"

namespace hsiduo {

/// Every trainable tensor of the dual-branch network.
struct ModelParams {
  std::vector<ConvParams> real_convs;
  std::vector<ComplexConvParams> complex_convs;
  std::optional<SeParams> se;
  /// Hidden layers in order, then the output layer.
  std::vector<DenseParams> dense;
};

/// Gradients share the parameter layout; complex weights carry independent
/// re and im gradients.
using GradientBundle = ModelParams;

/// Visits every parameter tensor in declaration order (the checkpoint order).
/// Complex tensors are visited as two real tensors, "<name>.re" and "<name>.im".
void for_each_param(ModelParams& params,
                    const std::function<void(const std::string&, const Shape&, std::span<double>)>& fn);
void for_each_param(const ModelParams& params,
                    const std::function<void(const std::string&, const Shape&, std::span<const double>)>& fn);

ModelParams zeros_like(const ModelParams& params);
std::size_t parameter_count(const ModelParams& params);
/// params += scale * other. Layouts must match.
void accumulate(ModelParams& params, const ModelParams& other, double scale = 1.0);
/// Rounds every parameter to the nearest 32-bit float (checkpoint precision).
void round_to_f32(ModelParams& params);

/// Real-valued 3D-CNN stream and complex-valued 3D-CNN stream over the same
/// patch, fused by channel concatenation, optionally recalibrated by a
/// squeeze-and-excitation block, then classified by a dense head.
///
/// Inputs per sample: the standardized real patch [S,S,P] and its band-wise
/// FFT [S,S,P]. Both are treated as single-channel volumes of depth P.
class DualBranchModel {
 public:
  /// Validates `cfg` and draws initial weights from `init_seed`.
  DualBranchModel(ModelConfig cfg, std::size_t n_classes, std::uint64_t init_seed);
  /// Adopts existing parameters; throws DimensionError if their shapes do not
  /// match what `cfg` implies.
  DualBranchModel(ModelConfig cfg, std::size_t n_classes, ModelParams params);

  const ModelConfig& config() const { return cfg_; }
  const ModelGeometry& geometry() const { return geom_; }
  std::size_t n_classes() const { return n_classes_; }
  const ModelParams& params() const { return params_; }
  ModelParams& params() { return params_; }

  /// Class probabilities in evaluation mode (dropout off).
  std::vector<double> predict_proba(const Tensor& real_patch, const ComplexTensor& complex_patch) const;
  /// Zero-based class index with the highest probability.
  std::size_t predict(const Tensor& real_patch, const ComplexTensor& complex_patch) const;

  struct Pass {
    double loss = 0.0;
    std::vector<double> probabilities;
    /// Hash of every ReLU/CReLU on-off pattern; differs when a kink is crossed.
    std::uint64_t activation_signature = 0;
  };

  /// One-sample forward pass with cross-entropy against `target` (one-hot).
  /// With `dropout_seed` set, dropout runs in training mode with masks drawn
  /// from that seed. If `grad` is non-null, adds grad_scale * dLoss/dParam.
  /// Throws NumericError naming the layer if a non-finite value appears.
  Pass forward_backward(const Tensor& real_patch, const ComplexTensor& complex_patch,
                        std::span<const double> target, std::optional<std::uint64_t> dropout_seed,
                        GradientBundle* grad, double grad_scale = 1.0) const;

 private:
  void check_params() const;

  ModelConfig cfg_;
  ModelGeometry geom_;
  std::size_t n_classes_;
  ModelParams params_;
};

}  // namespace hsiduo
