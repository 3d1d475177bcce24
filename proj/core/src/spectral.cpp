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

#include "hsiduo/spectral.hpp"

#include <numbers>
#include <utility>

#include "hsiduo/error.hpp"

namespace hsiduo {

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (!is_power_of_two(n)) {
    throw DimensionError("FFT length " + std::to_string(n) + " is not a power of two");
  }
  twiddles_.resize(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    twiddles_[k] = {std::cos(angle), std::sin(angle)};
  }
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  bit_reverse_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1U) << (bits - 1 - b);
    bit_reverse_[i] = r;
  }
}

void FftPlan::transform(std::span<std::complex<double>> x, FftDirection dir) const {
  if (x.size() != n_) {
    throw DimensionError("FFT plan of length " + std::to_string(n_) + " applied to " +
                         std::to_string(x.size()) + " samples");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (i < bit_reverse_[i]) std::swap(x[i], x[bit_reverse_[i]]);
  }
  const bool inverse = dir == FftDirection::kInverse;
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t step = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        std::complex<double> w = twiddles_[k * step];
        if (inverse) w = std::conj(w);
        const std::complex<double> t = w * x[start + k + half];
        x[start + k + half] = x[start + k] - t;
        x[start + k] += t;
      }
    }
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n_);
    for (auto& v : x) v *= scale;
  }
}

std::vector<std::complex<double>> fft_1d(std::span<const std::complex<double>> x, FftDirection dir) {
  FftPlan plan(x.size());
  std::vector<std::complex<double>> out(x.begin(), x.end());
  plan.transform(out, dir);
  return out;
}

namespace {

// Row-column 2D transform on interleaved scratch storage.
void transform_2d(const FftPlan& plan, std::vector<std::complex<double>>& m, FftDirection dir) {
  const std::size_t s = plan.size();
  for (std::size_t r = 0; r < s; ++r) plan.transform(std::span(m).subspan(r * s, s), dir);
  std::vector<std::complex<double>> column(s);
  for (std::size_t c = 0; c < s; ++c) {
    for (std::size_t r = 0; r < s; ++r) column[r] = m[r * s + c];
    plan.transform(column, dir);
    for (std::size_t r = 0; r < s; ++r) m[r * s + c] = column[r];
  }
}

}  // namespace

ComplexTensor fft_2d(const ComplexTensor& slice, FftDirection dir) {
  if (slice.rank() != 2 || slice.dim(0) != slice.dim(1)) {
    throw DimensionError("fft_2d expects a square [S,S] matrix, got " +
                         shape_to_string(slice.shape()));
  }
  const std::size_t s = slice.dim(0);
  FftPlan plan(s);
  std::vector<std::complex<double>> m(s * s);
  for (std::size_t i = 0; i < s * s; ++i) m[i] = {slice.re()[i], slice.im()[i]};
  transform_2d(plan, m, dir);
  ComplexTensor out(slice.shape());
  for (std::size_t i = 0; i < s * s; ++i) {
    out.re()[i] = m[i].real();
    out.im()[i] = m[i].imag();
  }
  return out;
}

ComplexTensor bandwise_fft(const Tensor& patch) {
  if (patch.rank() != 3 || patch.dim(0) != patch.dim(1)) {
    throw DimensionError("bandwise_fft expects a square [S,S,C] patch, got " +
                         shape_to_string(patch.shape()));
  }
  const std::size_t s = patch.dim(0), bands = patch.dim(2);
  FftPlan plan(s);
  const double scale = 1.0 / static_cast<double>(s * s);
  ComplexTensor out(patch.shape());
  std::vector<std::complex<double>> m(s * s);
  for (std::size_t c = 0; c < bands; ++c) {
    for (std::size_t p = 0; p < s * s; ++p) m[p] = {patch[p * bands + c], 0.0};
    transform_2d(plan, m, FftDirection::kForward);
    for (std::size_t p = 0; p < s * s; ++p) {
      out.re()[p * bands + c] = m[p].real() * scale;
      out.im()[p * bands + c] = m[p].imag() * scale;
    }
  }
  return out;
}

}  // namespace hsiduo
