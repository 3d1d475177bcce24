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
#include "hsiduo/layers.hpp"
#include "support/oracles.hpp"

namespace hsiduo {
namespace {

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  EXPECT_EQ(a.size(), b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

ConvParams random_conv(const Shape& kshape, std::mt19937_64& gen) {
  return {oracle::random_tensor(kshape, gen), oracle::random_tensor({kshape[4]}, gen)};
}

ComplexConvParams random_complex_conv(const Shape& kshape, std::mt19937_64& gen) {
  return {oracle::random_complex(kshape, gen), oracle::random_complex({kshape[4]}, gen)};
}

TEST(Conv3dReal, IdentityKernel) {
  std::mt19937_64 gen(31);
  const auto x = oracle::random_tensor({3, 4, 5, 1}, gen);
  ConvParams p{Tensor::from_flat({1, 1, 1, 1, 1}, {1.0}), Tensor({1})};
  EXPECT_EQ(conv3d_real(x, p), x);
}

TEST(Conv3dReal, ZeroKernelsGiveBias) {
  std::mt19937_64 gen(32);
  const auto x = oracle::random_tensor({4, 4, 4, 2}, gen);
  ConvParams p{Tensor({2, 2, 2, 2, 3}), Tensor::from_flat({3}, {0.5, -1.0, 2.0})};
  const auto y = conv3d_real(x, p);
  ASSERT_EQ(y.shape(), (Shape{3, 3, 3, 3}));
  for (std::size_t i = 0; i < y.size(); ++i) EXPECT_EQ(y[i], p.bias[i % 3]);
}

TEST(Conv3dReal, MatchesDirectSummation) {
  std::mt19937_64 gen(33);
  const auto x = oracle::random_tensor({4, 4, 4, 2}, gen);
  const auto p = random_conv({2, 2, 2, 2, 3}, gen);
  EXPECT_LT(max_abs_diff(conv3d_real(x, p).data(), oracle::direct_conv3d(x, p.kernels, p.bias).data()), 1e-12);
}

TEST(Conv3dReal, MatchesDirectSummationOnRandomShapes) {
  std::mt19937_64 gen(34);
  std::uniform_int_distribution<std::size_t> ext(3, 5), ch(1, 3), k(1, 3), co(1, 4);
  for (int rep = 0; rep < 20; ++rep) {
    const Shape xs{ext(gen), ext(gen), ext(gen), ch(gen)};
    const Shape ks{k(gen), k(gen), k(gen), xs[3], co(gen)};
    const auto x = oracle::random_tensor(xs, gen);
    const auto p = random_conv(ks, gen);
    EXPECT_LT(max_abs_diff(conv3d_real(x, p).data(), oracle::direct_conv3d(x, p.kernels, p.bias).data()), 1e-12);
  }
}

TEST(Conv3dReal, RejectsBadShapes) {
  EXPECT_THROW(conv3d_real(Tensor({2, 2, 2, 1}), ConvParams{Tensor({3, 3, 3, 1, 1}), Tensor({1})}), DimensionError);
  EXPECT_THROW(conv3d_real(Tensor({4, 4, 4, 2}), ConvParams{Tensor({3, 3, 3, 1, 1}), Tensor({1})}), DimensionError);
}

TEST(Conv3dComplex, RealInputsReduceToRealConv) {
  std::mt19937_64 gen(35);
  const auto x = oracle::random_tensor({4, 4, 4, 2}, gen);
  const auto p = random_conv({2, 2, 2, 2, 3}, gen);
  const ComplexConvParams cp{ComplexTensor(p.kernels), ComplexTensor(p.bias)};
  const auto y = conv3d_complex(ComplexTensor(x), cp);
  const auto ref = conv3d_real(x, p);
  EXPECT_LT(max_abs_diff(y.re(), ref.data()), 1e-14);
  for (double v : y.im()) EXPECT_EQ(v, 0.0);
}

TEST(Conv3dComplex, KernelIRotatesInput) {
  std::mt19937_64 gen(36);
  const auto x = oracle::random_complex({3, 3, 3, 1}, gen);
  ComplexConvParams p{ComplexTensor(Tensor({1, 1, 1, 1, 1}), Tensor::from_flat({1, 1, 1, 1, 1}, {1.0})),
                      ComplexTensor(Shape{1})};
  const auto y = conv3d_complex(x, p);
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_EQ(y.re()[i], -x.im()[i]);
    EXPECT_EQ(y.im()[i], x.re()[i]);
  }
}

TEST(Conv3dComplex, MatchesDirectComplexSummation) {
  std::mt19937_64 gen(37);
  std::uniform_int_distribution<std::size_t> ext(3, 5), ch(1, 3), k(1, 3), co(1, 4);
  {
    const auto x = oracle::random_complex({4, 4, 4, 2}, gen);
    const auto p = random_complex_conv({2, 2, 2, 2, 3}, gen);
    const auto y = conv3d_complex(x, p);
    const auto ref = oracle::direct_conv3d_complex(x, p.kernels, p.bias);
    EXPECT_LT(max_abs_diff(y.re(), ref.re()), 1e-12);
    EXPECT_LT(max_abs_diff(y.im(), ref.im()), 1e-12);
  }
  for (int rep = 0; rep < 20; ++rep) {
    const Shape xs{ext(gen), ext(gen), ext(gen), ch(gen)};
    const Shape ks{k(gen), k(gen), k(gen), xs[3], co(gen)};
    const auto x = oracle::random_complex(xs, gen);
    const auto p = random_complex_conv(ks, gen);
    const auto y = conv3d_complex(x, p);
    const auto ref = oracle::direct_conv3d_complex(x, p.kernels, p.bias);
    EXPECT_LT(max_abs_diff(y.re(), ref.re()), 1e-12);
    EXPECT_LT(max_abs_diff(y.im(), ref.im()), 1e-12);
  }
}

TEST(Activations, CreluClipsEachPartIndependently) {
  ComplexTensor z(Tensor::from_flat({3}, {1.0, -1.0, -1.0}), Tensor::from_flat({3}, {2.0, 2.0, -2.0}));
  const auto y = crelu(z);
  EXPECT_EQ(y.real_part().values(), (std::vector<double>{1.0, 0.0, 0.0}));
  EXPECT_EQ(y.imag_part().values(), (std::vector<double>{2.0, 2.0, 0.0}));
}

TEST(Activations, ReluAndSigmoid) {
  EXPECT_EQ(relu(Tensor::from_flat({3}, {-1.0, 0.0, 2.5})).values(), (std::vector<double>{0.0, 0.0, 2.5}));
  EXPECT_EQ(sigmoid(0.0), 0.5);
  EXPECT_NEAR(sigmoid(2.0), 1.0 / (1.0 + std::exp(-2.0)), 1e-15);
  EXPECT_EQ(sigmoid(-800.0), 0.0);  // no overflow in exp
  EXPECT_EQ(sigmoid(800.0), 1.0);
}

TEST(FoldDepth, ChannelIndexIsDepthMajor) {
  std::mt19937_64 gen(38);
  const auto x = oracle::random_tensor({2, 3, 4, 5}, gen);
  const auto y = fold_depth(x);
  ASSERT_EQ(y.shape(), (Shape{2, 3, 20}));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t d = 0; d < 4; ++d)
        for (std::size_t c = 0; c < 5; ++c) EXPECT_EQ(y.at({i, j, d * 5 + c}), x.at({i, j, d, c}));
}

TEST(FuseStreams, ZeroComplexStream) {
  std::mt19937_64 gen(39);
  const auto r = oracle::random_tensor({2, 2, 3}, gen);
  const auto y = fuse_streams(r, ComplexTensor(Shape{2, 2, 2}));
  ASSERT_EQ(y.shape(), (Shape{2, 2, 7}));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 7; ++k) EXPECT_EQ(y.at({i, j, k}), k < 3 ? r.at({i, j, k}) : 0.0);
}

TEST(FuseStreams, EmptyRealStream) {
  std::mt19937_64 gen(40);
  const auto z = oracle::random_complex({2, 2, 2}, gen);
  EXPECT_EQ(fuse_streams(Tensor({2, 2, 0}), z), complex_to_real_channels(z));
}

TEST(FuseStreams, MatchesIndexOracle) {
  std::mt19937_64 gen(41);
  const auto r = oracle::random_tensor({2, 2, 3}, gen);
  const auto z = oracle::random_complex({2, 2, 2}, gen);
  const auto y = fuse_streams(r, z);
  const auto re = z.real_part(), im = z.imag_part();
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(y.at({i, j, k}), r.at({i, j, k}));
      for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_EQ(y.at({i, j, 3 + k}), re.at({i, j, k}));
        EXPECT_EQ(y.at({i, j, 5 + k}), im.at({i, j, k}));
      }
    }
}

TEST(SeSqueeze, Averages) {
  EXPECT_EQ(se_squeeze(Tensor::from_flat({2, 2, 1}, {1, 2, 3, 4})), (std::vector<double>{2.5}));
  Tensor c({3, 7, 1});
  for (auto& v : c.data()) v = -1.25;
  EXPECT_NEAR(se_squeeze(c)[0], -1.25, 1e-15);

  std::mt19937_64 gen(42);
  const auto u = oracle::random_tensor({3, 5, 4}, gen);
  const auto z = se_squeeze(u);
  for (std::size_t c2 = 0; c2 < 4; ++c2) {
    double s = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 5; ++j) s += u.at({i, j, c2});
    EXPECT_NEAR(z[c2], s / 15.0, 1e-14);
  }
}

TEST(SeExcite, ZeroWeightsGiveOneHalf) {
  SeParams p{Tensor({2, 4}), Tensor({4, 2}), 2};
  std::mt19937_64 gen(43);
  const auto z = oracle::random_tensor({4}, gen);
  for (double s : se_excite(z.data(), p)) EXPECT_EQ(s, 0.5);

  std::mt19937_64 gen2(44);
  SeParams q{oracle::random_tensor({2, 4}, gen2), oracle::random_tensor({4, 2}, gen2), 2};
  for (double s : se_excite(std::vector<double>(4, 0.0), q)) EXPECT_EQ(s, 0.5);
}

TEST(SeExcite, MatchesCompositionAndStaysInOpenUnitInterval) {
  std::mt19937_64 gen(45);
  for (int rep = 0; rep < 20; ++rep) {
    SeParams p{oracle::random_tensor({2, 4}, gen, -1, 1), oracle::random_tensor({4, 2}, gen, -1, 1), 2};
    const auto z = oracle::random_tensor({4}, gen, -3, 3);
    const auto s = se_excite(z.data(), p);
    for (std::size_t c = 0; c < 4; ++c) {
      double t = 0.0;
      for (std::size_t i = 0; i < 2; ++i) {
        double h = 0.0;
        for (std::size_t k = 0; k < 4; ++k) h += p.w1.at({i, k}) * z[k];
        t += p.w2.at({c, i}) * std::max(h, 0.0);
      }
      EXPECT_NEAR(s[c], 1.0 / (1.0 + std::exp(-t)), 1e-12);
      EXPECT_GT(s[c], 0.0);
      EXPECT_LT(s[c], 1.0);
    }
  }
}

TEST(SeScale, ScalesPerChannel) {
  std::mt19937_64 gen(46);
  const auto u = oracle::random_tensor({2, 3, 4}, gen);
  EXPECT_EQ(se_scale(u, std::vector<double>(4, 1.0)), u);
  const auto zeroed = se_scale(u, std::vector<double>(4, 0.0));
  for (double v : zeroed.data()) EXPECT_EQ(v, 0.0);
  const auto s = oracle::random_tensor({4}, gen);
  const auto y = se_scale(u, s.data());
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(y.at({i, j, c}), s[c] * u.at({i, j, c}));
}

TEST(Head, SoftmaxIsShiftInvariantAndNormalized) {
  for (double p : softmax(std::vector<double>{0.0, 0.0, 0.0})) EXPECT_NEAR(p, 1.0 / 3.0, 1e-15);
  const auto a = softmax(std::vector<double>{1.0, 2.0, 3.0});
  const auto b = softmax(std::vector<double>{1001.0, 1002.0, 1003.0});
  double sum = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(a[i], b[i], 1e-15);
    sum += a[i];
  }
  EXPECT_NEAR(sum, 1.0, 1e-15);
}

TEST(Head, DenseIdentityAndAffine) {
  Tensor eye({3, 3});
  for (std::size_t i = 0; i < 3; ++i) eye.at({i, i}) = 1.0;
  const std::vector<double> x{0.5, -2.0, 4.0};
  EXPECT_EQ(dense(x, DenseParams{eye, Tensor({3})}), x);

  DenseParams p{Tensor::from_flat({2, 3}, {1, 2, 3, 4, 5, 6}), Tensor::from_flat({2}, {0.5, -0.5})};
  EXPECT_EQ(dense(x, p), (std::vector<double>{0.5 - 4.0 + 12.0 + 0.5, 2.0 - 10.0 + 24.0 - 0.5}));
}

TEST(Head, DropoutZeroRateAndEvalAreIdentity) {
  Rng rng(1);
  const std::vector<double> x{1.0, -2.0, 3.0};
  EXPECT_EQ(dropout(x, 0.0, rng, true), x);
  EXPECT_EQ(dropout(x, 0.5, rng, false), x);
  EXPECT_THROW(dropout(x, 1.0, rng, true), ConfigError);
  EXPECT_THROW(dropout(x, -0.1, rng, true), ConfigError);
}

TEST(Head, DropoutMaskIsInvertedAndKeepsExpectation) {
  Rng rng(2);
  const auto mask = dropout_mask(100000, 0.4, rng);
  double sum = 0.0;
  std::size_t zeros = 0;
  for (double m : mask) {
    if (m == 0.0) {
      ++zeros;
    } else {
      EXPECT_DOUBLE_EQ(m, 1.0 / 0.6);
    }
    sum += m;
  }
  EXPECT_NEAR(static_cast<double>(zeros) / 1e5, 0.4, 0.01);
  EXPECT_NEAR(sum / 1e5, 1.0, 0.02);
}

TEST(Init, ShapesZeroBiasesAndGlorotBounds) {
  Rng rng(3);
  const auto c = init_conv(3, 3, 5, 1, 8, rng);
  EXPECT_EQ(c.kernels.shape(), (Shape{3, 3, 5, 1, 8}));
  for (double b : c.bias.data()) EXPECT_EQ(b, 0.0);
  const double bound = std::sqrt(6.0 / (45.0 * 1 + 45.0 * 8));
  for (double w : c.kernels.data()) EXPECT_LE(std::abs(w), bound);

  const auto z = init_complex_conv(3, 3, 3, 2, 4, rng);
  const double zb = std::sqrt(6.0 / (27.0 * 2 + 27.0 * 4)) / std::sqrt(2.0);
  for (std::size_t i = 0; i < z.kernels.size(); ++i) {
    EXPECT_LE(std::abs(z.kernels.re()[i]), zb);
    EXPECT_LE(std::abs(z.kernels.im()[i]), zb);
  }

  const auto se = init_se(16, 4, rng);
  EXPECT_EQ(se.w1.shape(), (Shape{4, 16}));
  EXPECT_EQ(se.w2.shape(), (Shape{16, 4}));
  const auto d = init_dense(10, 3, rng);
  EXPECT_EQ(d.weights.shape(), (Shape{3, 10}));
  EXPECT_EQ(d.bias.shape(), (Shape{3}));
}

}  // namespace
}  // namespace hsiduo
