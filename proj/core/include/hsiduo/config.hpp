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
#include <string>
#include <vector>

namespace hsiduo {

/// Optimization and protocol settings.
struct TrainConfig {
  int epochs = 100;
  int batch_size = 16;
  int patience = 10;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  /// Only "f64" is implemented.
  std::string precision = "f64";
  /// Fraction of each class drawn for training (train + validation).
  double train_fraction = 0.01;
  /// Share of the drawn training pixels held out for early stopping.
  double val_fraction = 0.10;
};

/// One valid-padding 3D conv layer: kernel [Mh, Mw, Md] and output channels.
struct ConvSpec {
  std::array<std::size_t, 3> kernel{3, 3, 3};
  std::size_t channels = 8;

  bool operator==(const ConvSpec&) const = default;
};

struct ModelConfig {
  std::size_t pca_components = 16;
  std::size_t patch_size = 8;
  std::vector<ConvSpec> real_stream = default_stream();
  std::vector<ConvSpec> complex_stream = default_stream();
  bool se_enabled = true;
  std::size_t se_ratio = 4;
  std::vector<std::size_t> dense_widths{128};
  double dropout = 0.4;
  TrainConfig train;

  static std::vector<ConvSpec> default_stream();
};

/// Shapes implied by a config for an [S, S, P] input patch.
struct ModelGeometry {
  std::size_t out_height = 0;
  std::size_t out_width = 0;
  std::size_t real_channels = 0;     // depth folded into channels
  std::size_t complex_channels = 0;  // complex channels, before the re/im split
  std::size_t fused_channels = 0;    // real_channels + 2 * complex_channels
  std::size_t flat_features = 0;     // out_height * out_width * fused_channels
};

/// Throws ConfigError naming the first offending field.
void validate(const ModelConfig& cfg);
ModelGeometry geometry(const ModelConfig& cfg);

/// Pretty-printed JSON with every field written out.
std::string to_json(const ModelConfig& cfg);
/// Missing fields take their defaults; unknown fields are rejected.
ModelConfig model_config_from_json(const std::string& text);
ModelConfig load_model_config(const std::string& path);

/// FNV-1a over the canonical (sorted-key, compact) JSON, as 16 hex digits.
std::string config_hash(const ModelConfig& cfg);

}  // namespace hsiduo
