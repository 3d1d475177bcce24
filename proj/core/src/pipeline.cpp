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

#include "hsiduo/pipeline.hpp"

#include <utility>

#include "hsiduo/error.hpp"
#include "hsiduo/parallel.hpp"
#include "hsiduo/random.hpp"
#include "hsiduo/spectral.hpp"

namespace hsiduo {

namespace {

// Stream ids for derive_seed.
constexpr std::uint64_t kSplitStream = 11;
constexpr std::uint64_t kInitStream = 12;
constexpr std::uint64_t kFitStream = 13;

}  // namespace

PreparedScene prepare_features(const HsiCube& cube, std::size_t pca_components) {
  // Bands are scaled before projection so components keep their variance ordering;
  // rescaling each component afterwards would lift pure-noise directions to unit variance.
  const HsiCube scaled{standardize(cube.values)};
  auto pca = fit_pca(scaled, pca_components);
  return {std::move(pca.model), std::move(pca.reduced)};
}

PatchDataset build_patch_dataset(const Tensor& features, const std::vector<Sample>& samples,
                                 std::size_t patch_size, std::size_t n_classes, std::size_t threads) {
  PatchDataset ds;
  ds.n_classes = n_classes;
  const std::size_t n = samples.size();
  ds.real.resize(n);
  ds.complex.resize(n);
  ds.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (samples[i].label == 0 || samples[i].label > n_classes) {
      throw DataError("sample label " + std::to_string(samples[i].label) + " outside 1.." + std::to_string(n_classes));
    }
    ds.labels[i] = samples[i].label - 1U;
  }
  parallel_for(n, threads, [&](std::size_t i) {
    ds.real[i] = extract_patch(features, samples[i].row, samples[i].col, patch_size);
    ds.complex[i] = bandwise_fft(ds.real[i]);
  });
  return ds;
}

std::vector<std::string> class_names_of(const LabelMap& labels) {
  if (!labels.class_names.empty()) return labels.class_names;
  std::vector<std::string> names;
  for (std::size_t k = 1; k <= labels.n_classes; ++k) names.push_back("class_" + std::to_string(k));
  return names;
}

TrainRun run_training(const HsiCube& cube, const LabelMap& labels, ModelConfig cfg, std::uint64_t seed,
                      std::size_t threads, const std::function<void(const EpochRecord&)>& on_epoch) {
  validate(cfg);
  if (labels.height != cube.height() || labels.width != cube.width()) {
    throw DataError("label map " + std::to_string(labels.height) + "x" + std::to_string(labels.width) +
                    " does not match cube " + std::to_string(cube.height()) + "x" + std::to_string(cube.width()));
  }
  cfg.train.seed = seed;
  const std::size_t n_classes = labels.n_classes;

  const auto scene = prepare_features(cube, cfg.pca_components);
  auto split = stratified_split(labels, cfg.train.train_fraction, cfg.train.val_fraction,
                                derive_seed(seed, {kSplitStream}));
  const auto train = build_patch_dataset(scene.features, split.train.samples, cfg.patch_size, n_classes, threads);
  const auto val = build_patch_dataset(scene.features, split.val.samples, cfg.patch_size, n_classes, threads);
  const auto test = build_patch_dataset(scene.features, split.test.samples, cfg.patch_size, n_classes, threads);

  const DualBranchModel initial(cfg, n_classes, derive_seed(seed, {kInitStream}));
  TrainConfig tcfg = cfg.train;
  tcfg.seed = derive_seed(seed, {kFitStream});
  FitOptions options;
  options.threads = threads;
  options.on_epoch = on_epoch;
  auto fitted = fit(initial, train, val, tcfg, options);

  ModelParams best = fitted.best_params;
  round_to_f32(best);
  DualBranchModel model(cfg, n_classes, std::move(best));

  ConfusionMatrix confusion(n_classes);
  const auto ev = evaluate(model, test, threads);
  for (std::size_t i = 0; i < test.size(); ++i) confusion.add(test.labels[i], ev.predictions[i]);
  const auto metrics = trial_metrics(confusion);
  return TrainRun{std::move(model), std::move(fitted), std::move(split), std::move(confusion), metrics};
}

std::vector<std::uint16_t> predict_map(const DualBranchModel& model, const Tensor& features,
                                       const LabelMap& labels, bool full, std::size_t threads) {
  if (features.rank() != 3 || features.dim(0) != labels.height || features.dim(1) != labels.width) {
    throw DimensionError("predict_map: features " + shape_to_string(features.shape()) + " vs labels " +
                         std::to_string(labels.height) + "x" + std::to_string(labels.width));
  }
  const std::size_t pixels = labels.height * labels.width;
  const std::size_t s = model.config().patch_size;
  std::vector<std::uint16_t> out(pixels, 0);
  parallel_for(pixels, threads, [&](std::size_t p) {
    if (!full && labels.labels[p] == 0) return;
    const Tensor patch = extract_patch(features, p / labels.width, p % labels.width, s);
    out[p] = static_cast<std::uint16_t>(model.predict(patch, bandwise_fft(patch)) + 1);
  });
  return out;
}

const std::array<std::array<std::uint8_t, 3>, 16>& map_palette() {
  static const std::array<std::array<std::uint8_t, 3>, 16> palette{{
      {0, 0, 0},       {230, 25, 75},  {60, 180, 75},   {255, 225, 25},
      {0, 130, 200},   {245, 130, 48}, {145, 30, 180},  {70, 240, 240},
      {240, 50, 230},  {210, 245, 60}, {250, 190, 212}, {0, 128, 128},
      {220, 190, 255}, {170, 110, 40}, {255, 250, 200}, {128, 0, 0},
  }};
  return palette;
}

std::string render_ppm(std::size_t height, std::size_t width, const std::vector<std::uint16_t>& classes) {
  if (classes.size() != height * width) throw DimensionError("render_ppm: pixel count does not match size");
  std::string out = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  out.reserve(out.size() + 3 * classes.size());
  const auto& palette = map_palette();
  for (auto c : classes) {
    const std::size_t idx = c == 0 ? 0 : 1 + (static_cast<std::size_t>(c) - 1) % 15;
    for (auto v : palette[idx]) out.push_back(static_cast<char>(v));
  }
  return out;
}

}  // namespace hsiduo
