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

#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

#include "hsiduo/layers.hpp"
#include "hsiduo/model.hpp"
#include "hsiduo/spectral.hpp"
#include "hsiduo/train.hpp"

namespace {

using namespace hsiduo;

Tensor filled(const Shape& shape, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Tensor t(shape);
  for (auto& v : t.data()) v = d(gen);
  return t;
}

void BM_Fft1d(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<std::complex<double>> x(n, {1.0, 0.5});
  for (auto _ : state) benchmark::DoNotOptimize(fft_1d(x));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Fft1d)->RangeMultiplier(2)->Range(8, 1024);

void BM_BandwiseFft(benchmark::State& state) {
  const auto s = static_cast<std::size_t>(state.range(0));
  const auto patch = filled({s, s, 16}, 1);
  for (auto _ : state) benchmark::DoNotOptimize(bandwise_fft(patch));
}
BENCHMARK(BM_BandwiseFft)->Arg(4)->Arg(8)->Arg(16);

void BM_Conv3dReal(benchmark::State& state) {
  const auto c = static_cast<std::size_t>(state.range(0));
  const auto x = filled({8, 8, 16, c}, 2);
  const ConvParams p{filled({3, 3, 3, c, 8}, 3), filled({8}, 4)};
  for (auto _ : state) benchmark::DoNotOptimize(conv3d_real(x, p));
}
BENCHMARK(BM_Conv3dReal)->Arg(1)->Arg(8);

void BM_Conv3dComplex(benchmark::State& state) {
  const auto c = static_cast<std::size_t>(state.range(0));
  const ComplexTensor x(filled({8, 8, 16, c}, 5), filled({8, 8, 16, c}, 6));
  const ComplexConvParams p{ComplexTensor(filled({3, 3, 3, c, 8}, 7), filled({3, 3, 3, c, 8}, 8)),
                            ComplexTensor(filled({8}, 9), filled({8}, 10))};
  for (auto _ : state) benchmark::DoNotOptimize(conv3d_complex(x, p));
}
BENCHMARK(BM_Conv3dComplex)->Arg(1)->Arg(8);

void BM_ModelForwardBackward(benchmark::State& state) {
  const ModelConfig cfg;
  const DualBranchModel model(cfg, 9, 11);
  const auto patch = filled({cfg.patch_size, cfg.patch_size, cfg.pca_components}, 12);
  const auto spectrum = bandwise_fft(patch);
  const auto target = one_hot(3, 9);
  auto grad = zeros_like(model.params());
  const bool backward = state.range(0) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.forward_backward(patch, spectrum, target, std::nullopt, backward ? &grad : nullptr));
  }
}
BENCHMARK(BM_ModelForwardBackward)->Arg(0)->Arg(1)->ArgNames({"backward"});

}  // namespace

BENCHMARK_MAIN();
