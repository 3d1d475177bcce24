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
#include <span>
#include <vector>

#include "hsiduo/config.hpp"
#include "hsiduo/model.hpp"
#include "hsiduo/tensor.hpp"

namespace hsiduo {

/// Model-ready inputs: one (real patch, complex patch, zero-based label) per sample.
struct PatchDataset {
  std::vector<Tensor> real;
  std::vector<ComplexTensor> complex;
  std::vector<std::size_t> labels;
  std::size_t n_classes = 0;

  std::size_t size() const { return labels.size(); }
  bool empty() const { return labels.empty(); }
};

std::vector<double> one_hot(std::size_t label, std::size_t n_classes);

/// Adam moments for every parameter tensor, in for_each_param order.
struct AdamState {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::int64_t step = 0;
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;

  static AdamState for_params(const ModelParams& params, double learning_rate);
};

/// Bias-corrected Adam update of one flat parameter block at step `t` (1-based).
void adam_update(std::span<double> params, std::span<const double> grads, std::span<double> m,
                 std::span<double> v, std::int64_t t, double learning_rate, double beta1, double beta2,
                 double epsilon);

/// Advances state.step and updates every parameter. Throws DimensionError on layout mismatch.
void adam_step(ModelParams& params, const GradientBundle& grads, AdamState& state);

/// Mean loss and its gradient over `indices` of `data`. Per-sample gradients
/// are computed on up to `threads` workers and summed in index order, so the
/// result does not depend on the thread count.
struct BatchResult {
  double loss = 0.0;
  GradientBundle grads;
};
BatchResult batch_gradient(const DualBranchModel& model, const PatchDataset& data,
                           std::span<const std::size_t> indices, std::uint64_t dropout_seed,
                           bool training, std::size_t threads);

struct Evaluation {
  double loss = 0.0;
  double accuracy = 0.0;
  std::vector<std::size_t> predictions;
};
Evaluation evaluate(const DualBranchModel& model, const PatchDataset& data, std::size_t threads);

struct EpochRecord {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_oa = 0.0;
};

struct FitOptions {
  std::size_t threads = 1;
  /// Lower is better. Defaults to validation loss (training loss if the
  /// validation set is empty).
  std::function<double(const EpochRecord&)> monitor;
  std::function<void(const EpochRecord&)> on_epoch;
};

struct FitResult {
  ModelParams best_params;
  std::vector<EpochRecord> history;
  int best_epoch = 0;
  double best_metric = 0.0;
  bool stopped_early = false;
};

/// Adam training with early stopping. Stops once the monitored metric has not
/// strictly improved for `patience` consecutive epochs and returns the
/// parameters of the best epoch. Throws DataError on an empty training set.
FitResult fit(const DualBranchModel& model, const PatchDataset& train, const PatchDataset& val,
              const TrainConfig& cfg, const FitOptions& options = {});

/// History as a JSON array of {epoch, train_loss, val_loss, val_oa}.
std::string history_to_json(const std::vector<EpochRecord>& history);

}  // namespace hsiduo
