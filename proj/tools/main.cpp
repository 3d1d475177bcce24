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

#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

void add_train_flags(CLI::App* cmd, hsiduo::cli::TrainOptions& opt) {
  cmd->add_option("--cube", opt.cube, "Cube header (JSON)")->required();
  cmd->add_option("--labels", opt.labels, "Label header (JSON)")->required();
  cmd->add_option("--config", opt.config, "Model/train config JSON (defaults if omitted)");
  cmd->add_option("--seed", opt.seed, "Master seed");
  cmd->add_option("--out", opt.out, "Output directory")->required();
  cmd->add_option("--threads", opt.threads, "Worker threads (default: HSIDUO_THREADS or 1)");
  cmd->add_option("--epochs", opt.epochs, "Override train.epochs");
  cmd->add_flag("--no-se", opt.no_se, "Disable the squeeze-and-excitation block");
  cmd->add_flag("--quiet", opt.quiet, "Suppress per-epoch progress");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace hsiduo::cli;
  CLI::App app{"Dual-branch real/complex 3D-CNN hyperspectral classifier"};
  app.require_subcommand(0, 1);

  bool emit_default = false;
  app.add_flag("--emit-default-config", emit_default, "Print the default config JSON and exit");

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic labeled cube");
  synth_cmd->add_option("--classes", synth.classes, "Number of classes");
  synth_cmd->add_option("--height", synth.height, "Rows");
  synth_cmd->add_option("--width", synth.width, "Columns");
  synth_cmd->add_option("--bands", synth.bands, "Spectral bands");
  synth_cmd->add_option("--noise", synth.noise, "Noise standard deviation");
  synth_cmd->add_option("--seed", synth.seed, "Seed");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Train once and evaluate on the test split");
  add_train_flags(train_cmd, train);

  TrialOptions trial;
  auto* trial_cmd = app.add_subcommand("trial", "Repeat training with seeds master+i and aggregate");
  add_train_flags(trial_cmd, trial.train);
  trial_cmd->add_option("--repeats", trial.repeats, "Number of trials");

  MapOptions map;
  auto* map_cmd = app.add_subcommand("map", "Render a classification map as binary PPM");
  map_cmd->add_option("--cube", map.cube, "Cube header (JSON)")->required();
  map_cmd->add_option("--labels", map.labels, "Label header (JSON)")->required();
  map_cmd->add_option("--checkpoint", map.checkpoint, "Checkpoint manifest (model.json)")->required();
  map_cmd->add_option("--out", map.out, "Output PPM path")->required();
  map_cmd->add_flag("--full", map.full, "Predict every pixel, not only labeled ones");
  map_cmd->add_option("--threads", map.threads, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  if (emit_default) return cmd_emit_default_config();
  if (*synth_cmd) return cmd_synth(synth);
  if (*train_cmd) return cmd_train(train);
  if (*trial_cmd) return cmd_trial(trial);
  if (*map_cmd) return cmd_map(map);
  std::cerr << app.help();
  return kExitUsage;
}
