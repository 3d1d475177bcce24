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
#include <string>
#include <vector>

#include "hsiduo/error.hpp"
#include "hsiduo/spectral.hpp"
#include "hsiduo/train.hpp"
#include "support/oracles.hpp"

namespace hsiduo {
namespace {

TEST(Adam, FirstStepMovesByLearningRate) {
  for (double g : {1e-3, 0.5, -7.0}) {
    std::vector<double> p{1.0}, m{0.0}, v{0.0};
    const std::vector<double> grad{g};
    adam_update(p, grad, m, v, 1, 1e-3, 0.9, 0.999, 1e-8);
    EXPECT_NEAR(p[0] - 1.0, -1e-3 * g / (std::abs(g) + 1e-8), 1e-15);
  }
}

TEST(Adam, ZeroGradientLeavesParamsUnchanged) {
  std::vector<double> p{0.3, -0.2}, m{0.0, 0.0}, v{0.0, 0.0};
  const std::vector<double> grad{0.0, 0.0};
  for (int t = 1; t <= 5; ++t) adam_update(p, grad, m, v, t, 1e-3, 0.9, 0.999, 1e-8);
  EXPECT_EQ(p, (std::vector<double>{0.3, -0.2}));
}

TEST(Adam, MatchesScalarRecurrence) {
  const double lr = 0.01, b1 = 0.9, b2 = 0.999, eps = 1e-8, g = 0.37;
  std::vector<double> p{2.0}, m{0.0}, v{0.0};
  double rp = 2.0, rm = 0.0, rv = 0.0;
  for (int t = 1; t <= 3; ++t) {
    adam_update(p, std::vector<double>{g}, m, v, t, lr, b1, b2, eps);
    rm = b1 * rm + (1 - b1) * g;
    rv = b2 * rv + (1 - b2) * g * g;
    const double mh = rm / (1 - std::pow(b1, t)), vh = rv / (1 - std::pow(b2, t));
    rp -= lr * mh / (std::sqrt(vh) + eps);
    EXPECT_NEAR(p[0], rp, 1e-12);
  }
}

ModelConfig toy_config() {
  ModelConfig cfg;
  cfg.pca_components = 2;
  cfg.patch_size = 4;
  cfg.real_stream = {ConvSpec{{3, 3, 1}, 2}};
  cfg.complex_stream = {ConvSpec{{3, 3, 1}, 2}};
  cfg.se_ratio = 2;
  cfg.dense_widths = {8};
  cfg.dropout = 0.0;
  cfg.train.epochs = 50;
  cfg.train.patience = 50;
  cfg.train.batch_size = 4;
  cfg.train.learning_rate = 1e-2;
  cfg.train.seed = 3;
  return cfg;
}

// Two classes separated by the sign of band 0.
PatchDataset toy_data(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  PatchDataset ds;
  ds.n_classes = 2;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t label = i % 2;
    auto x = oracle::random_tensor({4, 4, 2}, gen, -0.3, 0.3);
    for (std::size_t q = 0; q < 16; ++q) x[q * 2] += label ? 1.0 : -1.0;
    ds.complex.push_back(bandwise_fft(x));
    ds.real.push_back(std::move(x));
    ds.labels.push_back(label);
  }
  return ds;
}

TEST(Fit, OverfitsSeparableToySet) {
  const auto cfg = toy_config();
  const auto train = toy_data(10, 1);
  DualBranchModel model(cfg, 2, 9);
  const auto result = fit(model, train, toy_data(4, 2), cfg.train);
  const DualBranchModel best(cfg, 2, result.best_params);
  EXPECT_EQ(evaluate(best, train, 1).accuracy, 1.0);
  EXPECT_LE(result.history.size(), 50u);
}

TEST(Fit, PatienceOneWithConstantMetricStopsAfterTwoEpochs) {
  auto cfg = toy_config();
  cfg.train.patience = 1;
  DualBranchModel model(cfg, 2, 9);
  FitOptions opt;
  opt.monitor = [](const EpochRecord&) { return 1.0; };
  const auto result = fit(model, toy_data(6, 1), toy_data(2, 2), cfg.train, opt);
  EXPECT_EQ(result.history.size(), 2u);
  EXPECT_EQ(result.best_epoch, 1);
  EXPECT_TRUE(result.stopped_early);
}

TEST(Fit, RestoresBestEpochParameters) {
  auto cfg = toy_config();
  cfg.train.epochs = 6;
  cfg.train.patience = 6;
  DualBranchModel model(cfg, 2, 9);
  FitOptions opt;
  // Epoch 3 is best; later epochs are worse.
  opt.monitor = [](const EpochRecord& r) { return std::abs(r.epoch - 3.0); };
  const auto train = toy_data(6, 1);
  const auto result = fit(model, train, toy_data(2, 2), cfg.train, opt);
  EXPECT_EQ(result.best_epoch, 3);
  EXPECT_EQ(result.history.size(), 6u);

  auto three = cfg.train;
  three.epochs = 3;
  three.patience = 3;
  const auto short_run = fit(model, train, toy_data(2, 2), three, opt);
  EXPECT_EQ(short_run.best_params.dense[0].weights, result.best_params.dense[0].weights);
}

TEST(Fit, SameSeedIsBitwiseReproducible) {
  auto cfg = toy_config();
  cfg.dropout = 0.3;
  cfg.train.epochs = 5;
  cfg.train.patience = 5;
  DualBranchModel model(cfg, 2, 9);
  const auto train = toy_data(10, 1), val = toy_data(4, 2);
  const auto a = fit(model, train, val, cfg.train);
  const auto b = fit(model, train, val, cfg.train);
  ASSERT_EQ(a.history.size(), b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    EXPECT_EQ(a.history[i].train_loss, b.history[i].train_loss);
    EXPECT_EQ(a.history[i].val_loss, b.history[i].val_loss);
  }
  EXPECT_EQ(a.best_params.dense[0].weights, b.best_params.dense[0].weights);
  EXPECT_EQ(a.best_params.real_convs[0].kernels, b.best_params.real_convs[0].kernels);
}

TEST(Fit, ThreadCountDoesNotChangeResults) {
  auto cfg = toy_config();
  cfg.dropout = 0.3;
  cfg.train.epochs = 3;
  cfg.train.patience = 3;
  DualBranchModel model(cfg, 2, 9);
  const auto train = toy_data(10, 1), val = toy_data(4, 2);
  FitOptions four;
  four.threads = 4;
  const auto a = fit(model, train, val, cfg.train);
  const auto b = fit(model, train, val, cfg.train, four);
  EXPECT_EQ(a.history.back().train_loss, b.history.back().train_loss);
  EXPECT_EQ(a.best_params.dense[1].weights, b.best_params.dense[1].weights);
}

TEST(Fit, EmptyValidationFallsBackToTrainingLoss) {
  auto cfg = toy_config();
  cfg.train.epochs = 2;
  cfg.train.patience = 2;
  DualBranchModel model(cfg, 2, 9);
  PatchDataset empty;
  empty.n_classes = 2;
  const auto r = fit(model, toy_data(6, 1), empty, cfg.train);
  for (const auto& e : r.history) EXPECT_EQ(e.val_loss, e.train_loss);
}

TEST(Fit, EmptyTrainingSetIsAnError) {
  const auto cfg = toy_config();
  DualBranchModel model(cfg, 2, 9);
  PatchDataset empty;
  empty.n_classes = 2;
  EXPECT_THROW(fit(model, empty, empty, cfg.train), DataError);
}

TEST(Fit, OnEpochCallbackAndHistoryJson) {
  auto cfg = toy_config();
  cfg.train.epochs = 3;
  cfg.train.patience = 3;
  DualBranchModel model(cfg, 2, 9);
  int calls = 0;
  FitOptions opt;
  opt.on_epoch = [&](const EpochRecord& r) { EXPECT_EQ(r.epoch, ++calls); };
  const auto r = fit(model, toy_data(6, 1), toy_data(2, 2), cfg.train, opt);
  EXPECT_EQ(calls, 3);
  const auto json = history_to_json(r.history);
  EXPECT_NE(json.find("\"train_loss\""), std::string::npos);
  EXPECT_NE(json.find("\"val_oa\""), std::string::npos);
}

TEST(BatchGradient, IsTheMeanOfSampleGradients) {
  const auto cfg = toy_config();
  DualBranchModel model(cfg, 2, 9);
  const auto data = toy_data(3, 4);
  const std::vector<std::size_t> idx{0, 1, 2};
  const auto batch = batch_gradient(model, data, idx, 0, false, 1);
  auto sum = zeros_like(model.params());
  double loss = 0.0;
  for (std::size_t i : idx) {
    loss += model.forward_backward(data.real[i], data.complex[i], one_hot(data.labels[i], 2), std::nullopt, &sum).loss;
  }
  EXPECT_NEAR(batch.loss, loss / 3.0, 1e-14);
  for (std::size_t k = 0; k < sum.dense[0].weights.size(); ++k) {
    EXPECT_NEAR(batch.grads.dense[0].weights[k], sum.dense[0].weights[k] / 3.0, 1e-14);
  }
}

}  // namespace
}  // namespace hsiduo
