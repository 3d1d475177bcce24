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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hsiduo/error.hpp"
#include "hsiduo/pca.hpp"
#include "support/oracles.hpp"

namespace hsiduo {
namespace {

HsiCube cube_from_pixels(const std::vector<std::vector<double>>& px) {
  Tensor t({1, px.size(), px[0].size()});
  for (std::size_t i = 0; i < px.size(); ++i)
    for (std::size_t b = 0; b < px[i].size(); ++b) t.at({0, i, b}) = px[i][b];
  return {t};
}

std::vector<std::vector<double>> correlated_pixels(std::size_t n, std::size_t bands, std::mt19937_64& gen) {
  std::normal_distribution<double> d;
  std::vector<std::vector<double>> mix(bands, std::vector<double>(bands));
  for (auto& row : mix)
    for (auto& x : row) x = d(gen);
  std::vector<std::vector<double>> px(n, std::vector<double>(bands, 0.0));
  for (auto& p : px) {
    std::vector<double> z(bands);
    for (std::size_t k = 0; k < bands; ++k) z[k] = d(gen) * (1.0 + static_cast<double>(bands - k));
    for (std::size_t i = 0; i < bands; ++i)
      for (std::size_t k = 0; k < bands; ++k) p[i] += mix[i][k] * z[k];
    p[0] += 3.0;
  }
  return px;
}

TEST(Jacobi, DiagonalizesAndIsOrthonormal) {
  std::mt19937_64 gen(91);
  const auto a = oracle::random_tensor({5, 5}, gen);
  Tensor s({5, 5});
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) s.at({i, j}) = a.at({i, j}) + a.at({j, i});
  const auto e = jacobi_eigen(s);
  for (std::size_t k = 0; k + 1 < 5; ++k) EXPECT_GE(e.values[k], e.values[k + 1]);
  for (std::size_t k = 0; k < 5; ++k) {
    for (std::size_t i = 0; i < 5; ++i) {
      double av = 0.0;
      for (std::size_t j = 0; j < 5; ++j) av += s.at({i, j}) * e.vectors.at({j, k});
      EXPECT_NEAR(av, e.values[k] * e.vectors.at({i, k}), 1e-12);
    }
    for (std::size_t l = 0; l < 5; ++l) {
      double dot = 0.0;
      for (std::size_t i = 0; i < 5; ++i) dot += e.vectors.at({i, k}) * e.vectors.at({i, l});
      EXPECT_NEAR(dot, k == l ? 1.0 : 0.0, 1e-12);
    }
  }
}

TEST(Pca, AxisAlignedData) {
  const auto fit = fit_pca(cube_from_pixels({{1, 0}, {-1, 0}, {2, 0}, {-2, 0}}), 2);
  EXPECT_NEAR(std::abs(fit.model.components.at({0, 0})), 1.0, 1e-12);
  EXPECT_NEAR(fit.model.components.at({1, 0}), 0.0, 1e-12);
  EXPECT_NEAR(fit.model.explained_variance[1], 0.0, 1e-12);
  EXPECT_NEAR(fit.model.explained_variance[0], 10.0 / 3.0, 1e-12);
}

TEST(Pca, MatchesClassicalJacobiOracle) {
  std::mt19937_64 gen(92);
  const auto px = correlated_pixels(100, 6, gen);
  const auto fit = fit_pca(cube_from_pixels(px), 3);
  const auto ref = oracle::classical_jacobi(oracle::covariance(px));
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_NEAR(fit.model.explained_variance[k], ref.values[k], 1e-8 * std::max(1.0, ref.values[k]));
    // Same sign convention as the library: largest-magnitude entry positive.
    std::size_t arg = 0;
    for (std::size_t i = 1; i < 6; ++i)
      if (std::abs(ref.vectors[i][k]) > std::abs(ref.vectors[arg][k])) arg = i;
    const double sign = ref.vectors[arg][k] < 0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(fit.model.components.at({i, k}), sign * ref.vectors[i][k], 1e-8);
  }
}

TEST(Pca, ComponentsOrthonormalAndVariancesSorted) {
  std::mt19937_64 gen(93);
  const auto fit = fit_pca(cube_from_pixels(correlated_pixels(200, 8, gen)), 8);
  const auto& c = fit.model.components;
  for (std::size_t k = 0; k < 8; ++k) {
    if (k + 1 < 8) EXPECT_GE(fit.model.explained_variance[k], fit.model.explained_variance[k + 1]);
    for (std::size_t l = 0; l < 8; ++l) {
      double dot = 0.0;
      for (std::size_t i = 0; i < 8; ++i) dot += c.at({i, k}) * c.at({i, l});
      EXPECT_NEAR(dot, k == l ? 1.0 : 0.0, 1e-8);
    }
  }
}

TEST(Pca, FullRankReconstructionIsLossless) {
  std::mt19937_64 gen(94);
  const auto cube = cube_from_pixels(correlated_pixels(150, 6, gen));
  const auto fit = fit_pca(cube, 6);
  const auto back = fit.model.inverse_transform(fit.reduced);
  for (std::size_t i = 0; i < back.size(); ++i) EXPECT_NEAR(back[i], cube.values[i], 1e-8);
  EXPECT_EQ(fit.model.transform(cube.values), fit.reduced);
}

TEST(Pca, ReducedVarianceMatchesEigenvalues) {
  std::mt19937_64 gen(95);
  const auto fit = fit_pca(cube_from_pixels(correlated_pixels(300, 5, gen)), 2);
  for (std::size_t k = 0; k < 2; ++k) {
    std::vector<double> col;
    for (std::size_t q = 0; q < 300; ++q) col.push_back(fit.reduced[q * 2 + k]);
    const double sd = oracle::two_pass_std(col);
    EXPECT_NEAR(sd * sd * 300.0 / 299.0, fit.model.explained_variance[k], 1e-8 * fit.model.explained_variance[k]);
  }
}

TEST(Pca, CovarianceUsesSampleDivisor) {
  const auto cov = pixel_covariance(cube_from_pixels({{1, 2}, {3, 6}, {5, 1}}).values);
  const auto ref = oracle::covariance({{1, 2}, {3, 6}, {5, 1}});
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(cov.at({i, j}), ref[i][j], 1e-14);
}

TEST(Pca, RejectsBadComponentCounts) {
  const auto cube = cube_from_pixels({{1, 0}, {0, 1}, {1, 1}});
  EXPECT_THROW(fit_pca(cube, 0), ConfigError);
  EXPECT_THROW(fit_pca(cube, 3), ConfigError);
}

}  // namespace
}  // namespace hsiduo
