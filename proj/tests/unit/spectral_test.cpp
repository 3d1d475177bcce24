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
#include <complex>
#include <random>
#include <vector>

#include "hsiduo/error.hpp"
#include "hsiduo/spectral.hpp"
#include "support/oracles.hpp"

namespace hsiduo {
namespace {

using cd = std::complex<double>;

std::vector<cd> random_signal(std::size_t n, std::mt19937_64& gen) {
  std::normal_distribution<double> d;
  std::vector<cd> x(n);
  for (auto& v : x) v = {d(gen), d(gen)};
  return x;
}

double max_abs_diff(const std::vector<cd>& a, const std::vector<cd>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

TEST(Fft1d, ConstantSignalIsDcOnly) {
  const std::vector<cd> x(4, 1.0);
  const auto y = fft_1d(x);
  EXPECT_NEAR(std::abs(y[0] - cd(4.0)), 0.0, 1e-15);
  for (std::size_t k = 1; k < 4; ++k) EXPECT_NEAR(std::abs(y[k]), 0.0, 1e-15);
}

TEST(Fft1d, ImpulseGivesFlatSpectrum) {
  const std::vector<cd> x{1.0, 0.0, 0.0, 0.0};
  for (const auto& v : fft_1d(x)) EXPECT_NEAR(std::abs(v - cd(1.0)), 0.0, 1e-15);
}

TEST(Fft1d, MatchesNaiveDftForEveryPowerOfTwoUpTo16) {
  std::mt19937_64 gen(21);
  for (std::size_t n = 1; n <= 16; n *= 2) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto x = random_signal(n, gen);
      EXPECT_LT(max_abs_diff(fft_1d(x), oracle::naive_dft(x)), 1e-9) << "n=" << n;
      EXPECT_LT(max_abs_diff(fft_1d(x, FftDirection::kInverse), oracle::naive_dft(x, true)), 1e-9) << "n=" << n;
    }
  }
}

TEST(Fft1d, RoundTrip) {
  std::mt19937_64 gen(22);
  for (std::size_t n = 1; n <= 16; n *= 2) {
    const auto x = random_signal(n, gen);
    EXPECT_LT(max_abs_diff(fft_1d(fft_1d(x), FftDirection::kInverse), x), 1e-12);
  }
}

TEST(Fft1d, ParsevalAndConjugateSymmetry) {
  std::mt19937_64 gen(23);
  std::normal_distribution<double> d;
  for (std::size_t n = 2; n <= 16; n *= 2) {
    std::vector<cd> x(n);
    for (auto& v : x) v = d(gen);  // real input
    const auto y = fft_1d(x);
    double ex = 0.0, ey = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      ex += std::norm(x[i]);
      ey += std::norm(y[i]);
    }
    EXPECT_NEAR(ex, ey / static_cast<double>(n), 1e-10);
    for (std::size_t k = 1; k < n; ++k) EXPECT_LT(std::abs(y[k] - std::conj(y[n - k])), 1e-10);
  }
}

TEST(Fft1d, RejectsNonPowerOfTwo) {
  EXPECT_THROW(fft_1d(std::vector<cd>(6)), DimensionError);
  EXPECT_THROW(FftPlan(0), DimensionError);
  EXPECT_TRUE(is_power_of_two(1));
  EXPECT_FALSE(is_power_of_two(12));
}

ComplexTensor to_tensor(const std::vector<std::vector<cd>>& m) {
  const std::size_t s = m.size();
  ComplexTensor t(Shape{s, s});
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t b = 0; b < s; ++b) {
      t.re()[a * s + b] = m[a][b].real();
      t.im()[a * s + b] = m[a][b].imag();
    }
  return t;
}

TEST(Fft2d, ConstantSliceConcentratesInDc) {
  const double v = 1.75;
  const auto y = fft_2d(to_tensor(std::vector<std::vector<cd>>(4, std::vector<cd>(4, v))));
  EXPECT_NEAR(y.re()[0], 16.0 * v, 1e-13);
  for (std::size_t i = 1; i < 16; ++i) {
    EXPECT_NEAR(y.re()[i], 0.0, 1e-13);
    EXPECT_NEAR(y.im()[i], 0.0, 1e-13);
  }
  const auto z = fft_2d(ComplexTensor(Shape{4, 4}));
  for (std::size_t i = 0; i < 16; ++i) EXPECT_EQ(std::abs(cd(z.re()[i], z.im()[i])), 0.0);
}

TEST(Fft2d, MatchesNestedLoopDftAndRoundTrips) {
  std::mt19937_64 gen(24);
  for (std::size_t s = 1; s <= 16; s *= 2) {
    std::vector<std::vector<cd>> m(s);
    for (auto& row : m) row = random_signal(s, gen);
    const auto y = fft_2d(to_tensor(m));
    const auto ref = oracle::naive_dft_2d(m);
    double err = 0.0;
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t b = 0; b < s; ++b)
        err = std::max(err, std::abs(cd(y.re()[a * s + b], y.im()[a * s + b]) - ref[a][b]));
    EXPECT_LT(err, 1e-9) << "S=" << s;

    const auto back = fft_2d(y, FftDirection::kInverse);
    double rt = 0.0;
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t b = 0; b < s; ++b)
        rt = std::max(rt, std::abs(cd(back.re()[a * s + b], back.im()[a * s + b]) - m[a][b]));
    EXPECT_LT(rt, 1e-12) << "S=" << s;
  }
}

TEST(Fft2d, ParsevalAndConjugateSymmetryForRealInput) {
  std::mt19937_64 gen(25);
  const std::size_t s = 8;
  const auto x = oracle::random_tensor({s, s}, gen);
  const auto y = fft_2d(ComplexTensor(x));
  double ex = 0.0, ey = 0.0;
  for (std::size_t i = 0; i < s * s; ++i) {
    ex += x[i] * x[i];
    ey += y.re()[i] * y.re()[i] + y.im()[i] * y.im()[i];
  }
  EXPECT_NEAR(ex, ey / static_cast<double>(s * s), 1e-10);
  for (std::size_t u = 0; u < s; ++u)
    for (std::size_t v = 0; v < s; ++v) {
      const std::size_t a = u * s + v, b = ((s - u) % s) * s + (s - v) % s;
      EXPECT_NEAR(y.re()[a], y.re()[b], 1e-10);
      EXPECT_NEAR(y.im()[a], -y.im()[b], 1e-10);
    }
}

TEST(BandwiseFft, PerBandDcAfterScaling) {
  Tensor patch({4, 4, 2});
  for (std::size_t i = 0; i < 16; ++i) {
    patch[i * 2] = 1.0;
    patch[i * 2 + 1] = 2.0;
  }
  const auto y = bandwise_fft(patch);
  ASSERT_EQ(y.shape(), (Shape{4, 4, 2}));
  EXPECT_NEAR(y.re()[0], 1.0, 1e-15);
  EXPECT_NEAR(y.re()[1], 2.0, 1e-15);
  for (std::size_t i = 2; i < y.size(); ++i) {
    EXPECT_NEAR(y.re()[i], 0.0, 1e-15);
    EXPECT_NEAR(y.im()[i], 0.0, 1e-15);
  }
  const auto z = bandwise_fft(Tensor({4, 4, 3}));
  for (std::size_t i = 0; i < z.size(); ++i) EXPECT_EQ(z.re()[i] == 0.0 && z.im()[i] == 0.0, true);
}

TEST(BandwiseFft, EachBandMatchesOracleAndBandsAreIndependent) {
  std::mt19937_64 gen(26);
  const std::size_t s = 8, c = 3;
  auto patch = oracle::random_tensor({s, s, c}, gen);
  const auto y = bandwise_fft(patch);
  for (std::size_t band = 0; band < c; ++band) {
    std::vector<std::vector<cd>> m(s, std::vector<cd>(s));
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t b = 0; b < s; ++b) m[a][b] = patch.at({a, b, band});
    const auto ref = oracle::naive_dft_2d(m);
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t b = 0; b < s; ++b) {
        const std::size_t k = (a * s + b) * c + band;
        EXPECT_LT(std::abs(cd(y.re()[k], y.im()[k]) - ref[a][b] / 64.0), 1e-9);
      }
  }

  patch.at({3, 5, 0}) += 10.0;
  const auto y2 = bandwise_fft(patch);
  for (std::size_t i = 0; i < s * s; ++i)
    for (std::size_t band = 1; band < c; ++band) {
      EXPECT_EQ(y2.re()[i * c + band], y.re()[i * c + band]);
      EXPECT_EQ(y2.im()[i * c + band], y.im()[i * c + band]);
    }
}

TEST(BandwiseFft, RejectsNonSquareOrNonPowerOfTwo) {
  EXPECT_THROW(bandwise_fft(Tensor({4, 8, 1})), DimensionError);
  EXPECT_THROW(bandwise_fft(Tensor({6, 6, 1})), DimensionError);
}

}  // namespace
}  // namespace hsiduo
