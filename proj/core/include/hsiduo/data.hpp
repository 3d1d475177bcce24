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
#include <string>
#include <vector>

#include "hsiduo/tensor.hpp"

namespace hsiduo {

/// Reflectance cube, values [H, W, B] row-major in memory.
struct HsiCube {
  Tensor values;

  std::size_t height() const { return values.dim(0); }
  std::size_t width() const { return values.dim(1); }
  std::size_t bands() const { return values.dim(2); }
};

/// Ground-truth classes per pixel; 0 = unlabeled.
struct LabelMap {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::uint16_t> labels;  // row-major
  /// Declared class count (classes 1..n_classes).
  std::size_t n_classes = 0;
  std::vector<std::string> class_names;

  std::uint16_t at(std::size_t row, std::size_t col) const { return labels[row * width + col]; }
  std::size_t labeled_count() const;
};

// File format: a JSON header plus a raw little-endian payload.
//   cube:   {"height", "width", "bands", "dtype": "f32", "interleave": "bsq", "data": "<file>"}
//   labels: {"height", "width", "dtype": "u16", "data": "<file>", "classes"?, "class_names"?}
// The payload path is relative to the header's directory.

HsiCube load_cube(const std::string& header_path);
LabelMap load_labels(const std::string& header_path);
/// Values are stored as 32-bit floats.
void save_cube(const std::string& header_path, const HsiCube& cube, const std::string& data_name);
void save_labels(const std::string& header_path, const LabelMap& labels, const std::string& data_name);

/// Per band: subtract the mean and divide by the population std. Bands whose
/// std is at most 1e-9 of the largest band std are only centered.
Tensor standardize(const Tensor& reduced);

/// S x S window of all bands, target pixel at (S/2, S/2); zero outside the image.
Tensor extract_patch(const Tensor& image, std::size_t row, std::size_t col, std::size_t size);

struct Sample {
  std::size_t row = 0;
  std::size_t col = 0;
  std::uint16_t label = 0;

  bool operator==(const Sample&) const = default;
};

enum class SampleRole { kTrain, kVal, kTest };

struct SampleSet {
  SampleRole role = SampleRole::kTrain;
  std::vector<Sample> samples;

  std::size_t size() const { return samples.size(); }
};

struct Split {
  SampleSet train{SampleRole::kTrain, {}};
  SampleSet val{SampleRole::kVal, {}};
  SampleSet test{SampleRole::kTest, {}};
};

/// Per class with n labeled pixels: max(2, round(train_frac * n)) drawn
/// without replacement; max(1, round(val_frac * drawn)) of those go to val
/// (none if val_frac == 0); the rest of the class is test.
/// Throws DataError when nothing is labeled or a class has fewer than 2 pixels.
Split stratified_split(const LabelMap& labels, double train_frac, double val_frac, std::uint64_t seed);

struct SyntheticScene {
  HsiCube cube;
  LabelMap labels;
  /// Noise-free spectrum of each class, [n_classes][bands].
  std::vector<std::vector<double>> signatures;
};

/// Classes laid out as contiguous runs of the row-major pixel order, each
/// with a smooth three-Gaussian spectrum plus i.i.d. Gaussian noise; 5% of
/// the pixels keep their spectrum but are marked unlabeled.
SyntheticScene synth_dataset(std::size_t n_classes, std::size_t height, std::size_t width,
                             std::size_t bands, double noise_std, std::uint64_t seed);

}  // namespace hsiduo
