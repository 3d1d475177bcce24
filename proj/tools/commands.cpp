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

#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include "hsiduo/checkpoint.hpp"
#include "hsiduo/error.hpp"
#include "hsiduo/parallel.hpp"
#include "hsiduo/pipeline.hpp"
#include "json.hpp"

namespace hsiduo::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestionError("cannot write " + path.string());
  out << text;
  if (!out) throw IngestionError("write failed for " + path.string());
}

void ensure_dir(const std::string& dir) {
  if (dir.empty()) throw ConfigError("--out: an output path is required");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IngestionError("cannot create output directory " + dir);
}

// Maps library errors onto the exit-code contract.
template <typename Fn>
int guarded(const char* command, Fn&& fn) {
  try {
    return fn();
  } catch (const NumericError& e) {
    std::cerr << "hsiduo " << command << ": numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const Error& e) {
    std::cerr << "hsiduo " << command << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "hsiduo " << command << ": " << e.what() << "\n";
    return kExitUsage;
  }
}

ModelConfig resolve_config(const TrainOptions& opt) {
  ModelConfig cfg = opt.config.empty() ? ModelConfig{} : load_model_config(opt.config);
  if (opt.no_se) cfg.se_enabled = false;
  if (opt.epochs) {
    cfg.train.epochs = *opt.epochs;
    if (cfg.train.patience > cfg.train.epochs) cfg.train.patience = cfg.train.epochs;
  }
  cfg.train.seed = opt.seed;
  validate(cfg);
  return cfg;
}

struct TrialOutcome {
  TrialMetrics metrics;
  ConfusionMatrix confusion;
};

// One full training run writing its artifacts into `dir`.
TrialOutcome train_into(const HsiCube& cube, const LabelMap& labels, const ModelConfig& cfg,
                        std::uint64_t seed, const fs::path& dir, std::size_t threads, bool quiet) {
  std::function<void(const EpochRecord&)> log;
  if (!quiet) {
    log = [](const EpochRecord& r) {
      std::fprintf(stderr, "epoch %3d  train_loss %.5f  val_loss %.5f  val_oa %.4f\n", r.epoch, r.train_loss,
                   r.val_loss, r.val_oa);
    };
  }
  auto run = run_training(cube, labels, cfg, seed, threads, log);
  const auto names = class_names_of(labels);
  save_checkpoint((dir / "model.json").string(), run.model, names);
  write_text(dir / "history.json", history_to_json(run.fit.history));
  const auto report = aggregate_trials({run.metrics});
  write_text(dir / "report.json", eval_report_json(names, run.confusion, report));
  if (!quiet) {
    std::fprintf(stderr, "test OA %.4f  AA %.4f  kappa %.4f  (best epoch %d)\n", run.metrics.oa, run.metrics.aa,
                 run.metrics.kappa, run.fit.best_epoch);
  }
  return {run.metrics, run.confusion};
}

json manifest_base(const TrainOptions& opt, const ModelConfig& cfg) {
  return json{{"seed", opt.seed},
              {"config_hash", config_hash(cfg)},
              {"config", json::parse(to_json(cfg))},
              {"inputs", {{"cube", opt.cube}, {"labels", opt.labels}, {"config", opt.config}}},
              {"threads", resolve_threads(opt.threads)}};
}

}  // namespace

int cmd_synth(const SynthOptions& opt) {
  return guarded("synth", [&] {
    if (opt.classes < 2) throw ConfigError("--classes: need >= 2 classes");
    ensure_dir(opt.out);
    const auto scene = synth_dataset(opt.classes, opt.height, opt.width, opt.bands, opt.noise, opt.seed);
    const fs::path dir(opt.out);
    save_cube((dir / "cube.json").string(), scene.cube, "cube.raw");
    save_labels((dir / "labels.json").string(), scene.labels, "labels.raw");
    const json manifest = {{"generator", "synth"},
                           {"seed", opt.seed},
                           {"classes", opt.classes},
                           {"height", opt.height},
                           {"width", opt.width},
                           {"bands", opt.bands},
                           {"noise", opt.noise},
                           {"outputs", {"cube.json", "cube.raw", "labels.json", "labels.raw"}}};
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
    return kExitOk;
  });
}

int cmd_train(const TrainOptions& opt) {
  return guarded("train", [&] {
    const auto cfg = resolve_config(opt);
    const auto cube = load_cube(opt.cube);
    const auto labels = load_labels(opt.labels);
    ensure_dir(opt.out);
    json manifest = manifest_base(opt, cfg);
    manifest["started"] = utc_now();
    const fs::path dir(opt.out);
    train_into(cube, labels, cfg, opt.seed, dir, resolve_threads(opt.threads), opt.quiet);
    manifest["trial_seeds"] = {opt.seed};
    manifest["outputs"] = {"model.json", "model.bin", "history.json", "report.json"};
    manifest["finished"] = utc_now();
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
    return kExitOk;
  });
}

int cmd_trial(const TrialOptions& opt) {
  return guarded("trial", [&] {
    if (opt.repeats < 1) throw ConfigError("--repeats: must be >= 1");
    const auto cfg = resolve_config(opt.train);
    const auto cube = load_cube(opt.train.cube);
    const auto labels = load_labels(opt.train.labels);
    ensure_dir(opt.train.out);
    const fs::path dir(opt.train.out);
    json manifest = manifest_base(opt.train, cfg);
    manifest["started"] = utc_now();
    manifest["repeats"] = opt.repeats;

    std::vector<TrialMetrics> trials;
    std::vector<ConfusionMatrix> confusions;
    json seeds = json::array();
    for (int i = 0; i < opt.repeats; ++i) {
      const std::uint64_t seed = opt.train.seed + static_cast<std::uint64_t>(i);
      seeds.push_back(seed);
      char name[32];
      std::snprintf(name, sizeof name, "trial_%02d", i);
      ensure_dir((dir / name).string());
      if (!opt.train.quiet) std::fprintf(stderr, "== trial %d/%d (seed %llu)\n", i + 1, opt.repeats,
                                         static_cast<unsigned long long>(seed));
      auto outcome = train_into(cube, labels, cfg, seed, dir / name, resolve_threads(opt.train.threads),
                                opt.train.quiet);
      trials.push_back(outcome.metrics);
      confusions.push_back(std::move(outcome.confusion));
    }
    const auto report = aggregate_trials(trials);
    write_text(dir / "report.json", eval_report_json(class_names_of(labels), confusions[report.best_trial], report));
    manifest["trial_seeds"] = seeds;
    manifest["outputs"] = {"report.json", "trial_NN/"};
    manifest["finished"] = utc_now();
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
    if (!opt.train.quiet) {
      std::fprintf(stderr, "OA %.2f +- %.2f  AA %.2f +- %.2f  kappa x100 %.2f +- %.2f  (n=%zu)\n",
                   100 * report.oa.mean, 100 * report.oa.std, 100 * report.aa.mean, 100 * report.aa.std,
                   100 * report.kappa.mean, 100 * report.kappa.std, report.n);
    }
    return kExitOk;
  });
}

int cmd_map(const MapOptions& opt) {
  return guarded("map", [&] {
    if (opt.out.empty()) throw ConfigError("--out: an output path is required");
    const auto ckpt = load_checkpoint(opt.checkpoint);
    const auto cube = load_cube(opt.cube);
    const auto labels = load_labels(opt.labels);
    if (labels.height != cube.height() || labels.width != cube.width()) {
      throw DataError("label map and cube differ in size");
    }
    if (labels.n_classes != ckpt.model.n_classes()) {
      throw ConfigError("checkpoint predicts " + std::to_string(ckpt.model.n_classes()) +
                        " classes but the label map declares " + std::to_string(labels.n_classes));
    }
    const auto scene = prepare_features(cube, ckpt.model.config().pca_components);
    const auto classes = predict_map(ckpt.model, scene.features, labels, opt.full, resolve_threads(opt.threads));
    const fs::path out(opt.out);
    if (out.has_parent_path()) ensure_dir(out.parent_path().string());
    write_text(out, render_ppm(labels.height, labels.width, classes));
    return kExitOk;
  });
}

int cmd_emit_default_config() {
  std::cout << to_json(ModelConfig{});
  return kExitOk;
}

}  // namespace hsiduo::cli
