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
#include <vector>

#include "hsiduo/data.hpp"
#include "hsiduo/tensor.hpp"

namespace hsiduo {

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
struct SymmetricEigen {
  std::vector<double> values;  // descending
  Tensor vectors;              // [n, n], column k pairs with values[k]
};
SymmetricEigen jacobi_eigen(const Tensor& symmetric, double tolerance = 1e-14, int max_sweeps = 100);

struct PcaModel {
  std::vector<double> mean;                // [B]
  Tensor components;                       // [B, P], orthonormal columns
  std::vector<double> explained_variance;  // [P], descending

  std::size_t bands() const { return mean.size(); }
  std::size_t n_components() const { return explained_variance.size(); }

  /// [H, W, B] -> [H, W, P]
  Tensor transform(const Tensor& cube) const;
  /// [H, W, P] -> [H, W, B]
  Tensor inverse_transform(const Tensor& reduced) const;
};

/// Sample covariance (divisor N-1) of all pixels.
Tensor pixel_covariance(const Tensor& cube, std::vector<double>* mean = nullptr);

struct PcaFit {
  PcaModel model;
  Tensor reduced;  // [H, W, P]
};

/// Top-`components` eigenvectors of the pixel covariance (all pixels). Each
/// component's sign is fixed so its largest-magnitude entry is positive.
/// Throws ConfigError if components is 0 or exceeds the band count, and
/// NumericError on a non-finite covariance.
PcaFit fit_pca(const HsiCube& cube, std::size_t components);

}  // namespace hsiduo
