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

#include "hsiduo/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hsiduo/error.hpp"

namespace hsiduo {

SymmetricEigen jacobi_eigen(const Tensor& symmetric, double tolerance, int max_sweeps) {
  if (symmetric.rank() != 2 || symmetric.dim(0) != symmetric.dim(1)) {
    throw DimensionError("jacobi_eigen expects a square matrix, got " + shape_to_string(symmetric.shape()));
  }
  const std::size_t n = symmetric.dim(0);
  std::vector<double> a(symmetric.data().begin(), symmetric.data().end());
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  double total = 0.0;
  for (double x : a) total += x * x;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
    }
    if (off == 0.0 || off <= tolerance * tolerance * total) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        a[p * n + q] = a[q * n + p] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a[i * n + i] > a[j * n + j]; });
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = Tensor({n, n});
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a[order[k] * n + order[k]];
    for (std::size_t r = 0; r < n; ++r) out.vectors[r * n + k] = v[r * n + order[k]];
  }
  return out;
}

Tensor pixel_covariance(const Tensor& cube, std::vector<double>* mean_out) {
  if (cube.rank() != 3) throw DimensionError("pixel_covariance expects [H,W,B], got " + shape_to_string(cube.shape()));
  const std::size_t pixels = cube.dim(0) * cube.dim(1), b = cube.dim(2);
  if (pixels < 2) throw DataError("PCA needs at least 2 pixels");
  std::vector<double> mean(b, 0.0);
  for (std::size_t p = 0; p < pixels; ++p) {
    for (std::size_t k = 0; k < b; ++k) mean[k] += cube[p * b + k];
  }
  for (auto& m : mean) m /= static_cast<double>(pixels);

  Tensor cov({b, b});
  std::vector<double> centered(b);
  for (std::size_t p = 0; p < pixels; ++p) {
    for (std::size_t k = 0; k < b; ++k) centered[k] = cube[p * b + k] - mean[k];
    for (std::size_t i = 0; i < b; ++i) {
      for (std::size_t j = i; j < b; ++j) cov[i * b + j] += centered[i] * centered[j];
    }
  }
  const double denom = static_cast<double>(pixels - 1);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = i; j < b; ++j) {
      cov[i * b + j] /= denom;
      cov[j * b + i] = cov[i * b + j];
    }
  }
  if (mean_out) *mean_out = std::move(mean);
  return cov;
}

Tensor PcaModel::transform(const Tensor& cube) const {
  const std::size_t b = bands(), p = n_components();
  if (cube.rank() != 3 || cube.dim(2) != b) {
    throw DimensionError("PCA fitted on " + std::to_string(b) + " bands, got " + shape_to_string(cube.shape()));
  }
  const std::size_t pixels = cube.dim(0) * cube.dim(1);
  Tensor out({cube.dim(0), cube.dim(1), p});
  std::vector<double> centered(b);
  for (std::size_t q = 0; q < pixels; ++q) {
    for (std::size_t k = 0; k < b; ++k) centered[k] = cube[q * b + k] - mean[k];
    for (std::size_t c = 0; c < p; ++c) {
      double acc = 0.0;
      for (std::size_t k = 0; k < b; ++k) acc += components[k * p + c] * centered[k];
      out[q * p + c] = acc;
    }
  }
  return out;
}

Tensor PcaModel::inverse_transform(const Tensor& reduced) const {
  const std::size_t b = bands(), p = n_components();
  if (reduced.rank() != 3 || reduced.dim(2) != p) {
    throw DimensionError("PCA has " + std::to_string(p) + " components, got " + shape_to_string(reduced.shape()));
  }
  const std::size_t pixels = reduced.dim(0) * reduced.dim(1);
  Tensor out({reduced.dim(0), reduced.dim(1), b});
  for (std::size_t q = 0; q < pixels; ++q) {
    for (std::size_t k = 0; k < b; ++k) {
      double acc = mean[k];
      for (std::size_t c = 0; c < p; ++c) acc += components[k * p + c] * reduced[q * p + c];
      out[q * b + k] = acc;
    }
  }
  return out;
}

PcaFit fit_pca(const HsiCube& cube, std::size_t components) {
  const std::size_t b = cube.bands();
  if (components == 0 || components > b) {
    throw ConfigError("pca_components: " + std::to_string(components) + " must lie in [1, " +
                      std::to_string(b) + "]");
  }
  PcaModel model;
  const Tensor cov = pixel_covariance(cube.values, &model.mean);
  for (double x : cov.data()) {
    if (!std::isfinite(x)) throw NumericError("PCA covariance has non-finite entries");
  }
  const auto eig = jacobi_eigen(cov);
  model.components = Tensor({b, components});
  model.explained_variance.resize(components);
  for (std::size_t c = 0; c < components; ++c) {
    // Round-off can leave tiny negative eigenvalues on rank-deficient data.
    model.explained_variance[c] = std::max(eig.values[c], 0.0);
    std::size_t pivot = 0;
    for (std::size_t k = 1; k < b; ++k) {
      if (std::abs(eig.vectors[k * b + c]) > std::abs(eig.vectors[pivot * b + c])) pivot = k;
    }
    const double sign = eig.vectors[pivot * b + c] < 0.0 ? -1.0 : 1.0;
    for (std::size_t k = 0; k < b; ++k) model.components[k * components + c] = sign * eig.vectors[k * b + c];
  }
  Tensor reduced = model.transform(cube.values);
  return {std::move(model), std::move(reduced)};
}

}  // namespace hsiduo
