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

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hsiduo/config.hpp"
#include "hsiduo/data.hpp"
#include "hsiduo/metrics.hpp"
#include "hsiduo/model.hpp"
#include "hsiduo/pca.hpp"
#include "hsiduo/train.hpp"

namespace hsiduo {

/// Band-standardized, PCA-reduced cube [H, W, P]. `pca` is fitted on the standardized bands.
struct PreparedScene {
  PcaModel pca;
  Tensor features;
};
PreparedScene prepare_features(const HsiCube& cube, std::size_t pca_components);

/// Real patch and its band-wise FFT for every sample. Labels become zero-based.
PatchDataset build_patch_dataset(const Tensor& features, const std::vector<Sample>& samples,
                                 std::size_t patch_size, std::size_t n_classes, std::size_t threads = 1);

std::vector<std::string> class_names_of(const LabelMap& labels);

struct TrainRun {
  DualBranchModel model;  // best weights, rounded to checkpoint precision
  FitResult fit;
  Split split;
  ConfusionMatrix confusion;  // on the test split
  TrialMetrics metrics;
};

/// standardize -> PCA -> stratified split -> patches/FFT -> fit -> test
/// evaluation. Every random stream is derived from `seed`.
TrainRun run_training(const HsiCube& cube, const LabelMap& labels, ModelConfig cfg, std::uint64_t seed,
                      std::size_t threads = 1, const std::function<void(const EpochRecord&)>& on_epoch = {});

/// Predicted class label (1-based) per pixel, row-major. Pixels that are
/// unlabeled in `labels` get 0 unless `full` is set.
std::vector<std::uint16_t> predict_map(const DualBranchModel& model, const Tensor& features,
                                       const LabelMap& labels, bool full, std::size_t threads = 1);

/// Fixed map palette; class 0 is black, classes >= 16 wrap onto 1..15.
const std::array<std::array<std::uint8_t, 3>, 16>& map_palette();
/// Binary PPM (P6) bytes of a row-major label image.
std::string render_ppm(std::size_t height, std::size_t width, const std::vector<std::uint16_t>& classes);

}  // namespace hsiduo
