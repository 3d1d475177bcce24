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

#include "hsiduo/train.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "hsiduo/error.hpp"
#include "hsiduo/parallel.hpp"
#include "hsiduo/random.hpp"
#include "json.hpp"

namespace hsiduo {

std::vector<double> one_hot(std::size_t label, std::size_t n_classes) {
  if (label >= n_classes) {
    throw DimensionError("label " + std::to_string(label) + " out of range for " +
                         std::to_string(n_classes) + " classes");
  }
  std::vector<double> t(n_classes, 0.0);
  t[label] = 1.0;
  return t;
}

AdamState AdamState::for_params(const ModelParams& params, double learning_rate) {
  AdamState s;
  s.learning_rate = learning_rate;
  for_each_param(params, [&](const std::string&, const Shape&, std::span<const double> v) {
    s.m.emplace_back(v.size(), 0.0);
    s.v.emplace_back(v.size(), 0.0);
  });
  return s;
}

void adam_update(std::span<double> params, std::span<const double> grads, std::span<double> m,
                 std::span<double> v, std::int64_t t, double learning_rate, double beta1, double beta2,
                 double epsilon) {
  if (grads.size() != params.size() || m.size() != params.size() || v.size() != params.size()) {
    throw DimensionError("adam_update: block sizes differ");
  }
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    m[i] = beta1 * m[i] + (1.0 - beta1) * g;
    v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
    const double m_hat = m[i] / c1;
    const double v_hat = v[i] / c2;
    params[i] -= learning_rate * m_hat / (std::sqrt(v_hat) + epsilon);
  }
}

void adam_step(ModelParams& params, const GradientBundle& grads, AdamState& state) {
  std::vector<std::span<const double>> g;
  for_each_param(grads, [&](const std::string&, const Shape&, std::span<const double> v) { g.push_back(v); });
  if (g.size() != state.m.size()) {
    throw DimensionError("adam_step: " + std::to_string(g.size()) + " gradient tensors for " +
                         std::to_string(state.m.size()) + " moment buffers");
  }
  ++state.step;
  std::size_t i = 0;
  for_each_param(params, [&](const std::string& name, const Shape&, std::span<double> p) {
    if (i >= g.size() || g[i].size() != p.size() || state.m[i].size() != p.size()) {
      throw DimensionError("adam_step: shape mismatch at " + name);
    }
    adam_update(p, g[i], state.m[i], state.v[i], state.step, state.learning_rate, state.beta1,
                state.beta2, state.epsilon);
    ++i;
  });
  if (i != g.size()) throw DimensionError("adam_step: parameter count mismatch");
}

BatchResult batch_gradient(const DualBranchModel& model, const PatchDataset& data,
                           std::span<const std::size_t> indices, std::uint64_t dropout_seed,
                           bool training, std::size_t threads) {
  const std::size_t n = indices.size();
  BatchResult result;
  result.grads = zeros_like(model.params());
  if (n == 0) return result;

  const double scale = 1.0 / static_cast<double>(n);
  std::vector<GradientBundle> per_sample(n);
  std::vector<double> losses(n, 0.0);
  parallel_for(n, threads, [&](std::size_t b) {
    const std::size_t idx = indices[b];
    per_sample[b] = zeros_like(model.params());
    const auto target = one_hot(data.labels[idx], model.n_classes());
    std::optional<std::uint64_t> seed;
    if (training) seed = derive_seed(dropout_seed, {b});
    losses[b] = model.forward_backward(data.real[idx], data.complex[idx], target, seed,
                                       &per_sample[b], scale).loss;
  });
  for (std::size_t b = 0; b < n; ++b) {
    accumulate(result.grads, per_sample[b]);
    result.loss += losses[b];
  }
  result.loss *= scale;
  return result;
}

Evaluation evaluate(const DualBranchModel& model, const PatchDataset& data, std::size_t threads) {
  Evaluation e;
  const std::size_t n = data.size();
  e.predictions.assign(n, 0);
  if (n == 0) return e;
  std::vector<double> losses(n, 0.0);
  parallel_for(n, threads, [&](std::size_t i) {
    const auto target = one_hot(data.labels[i], model.n_classes());
    const auto pass = model.forward_backward(data.real[i], data.complex[i], target, std::nullopt, nullptr);
    losses[i] = pass.loss;
    std::size_t best = 0;
    for (std::size_t k = 1; k < pass.probabilities.size(); ++k) {
      if (pass.probabilities[k] > pass.probabilities[best]) best = k;
    }
    e.predictions[i] = best;
  });
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i) {
    e.loss += losses[i];
    if (e.predictions[i] == data.labels[i]) ++correct;
  }
  e.loss /= static_cast<double>(n);
  e.accuracy = static_cast<double>(correct) / static_cast<double>(n);
  return e;
}

FitResult fit(const DualBranchModel& model, const PatchDataset& train, const PatchDataset& val,
              const TrainConfig& cfg, const FitOptions& options) {
  if (train.empty()) throw DataError("training set is empty");
  if (cfg.epochs < 1 || cfg.batch_size < 1 || cfg.patience < 1) {
    throw ConfigError("train: epochs, batch_size and patience must be >= 1");
  }

  DualBranchModel current = model;
  AdamState adam = AdamState::for_params(current.params(), cfg.learning_rate);
  Rng shuffle_rng(derive_seed(cfg.seed, {0x5348u}));

  FitResult result;
  result.best_params = current.params();
  result.best_metric = std::numeric_limits<double>::infinity();
  int since_improvement = 0;

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[shuffle_rng.uniform_index(i)]);
    }
    double loss_sum = 0.0;
    std::size_t step = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size), ++step) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      const std::span<const std::size_t> batch(order.data() + start, end - start);
      const auto seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(epoch), step});
      auto br = batch_gradient(current, train, batch, seed, true, options.threads);
      adam_step(current.params(), br.grads, adam);
      loss_sum += br.loss * static_cast<double>(batch.size());
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(train.size());
    if (!val.empty()) {
      const auto ev = evaluate(current, val, options.threads);
      rec.val_loss = ev.loss;
      rec.val_oa = ev.accuracy;
    } else {
      rec.val_loss = rec.train_loss;
    }
    result.history.push_back(rec);
    if (options.on_epoch) options.on_epoch(rec);

    const double metric = options.monitor ? options.monitor(rec) : rec.val_loss;
    if (!std::isfinite(metric)) throw NumericError("monitored metric diverged at epoch " + std::to_string(epoch));
    if (metric < result.best_metric) {
      result.best_metric = metric;
      result.best_epoch = epoch;
      result.best_params = current.params();
      since_improvement = 0;
    } else if (++since_improvement >= cfg.patience) {
      result.stopped_early = epoch < cfg.epochs;
      break;
    }
  }
  return result;
}

std::string history_to_json(const std::vector<EpochRecord>& history) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : history) {
    arr.push_back({{"epoch", r.epoch}, {"train_loss", r.train_loss}, {"val_loss", r.val_loss}, {"val_oa", r.val_oa}});
  }
  return arr.dump(2) + "\n";
}

}  // namespace hsiduo
