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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

namespace hsiduo::cli {

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

struct SynthOptions {
  std::size_t classes = 3;
  std::size_t height = 32;
  std::size_t width = 32;
  std::size_t bands = 16;
  double noise = 0.1;
  std::uint64_t seed = 1;
  std::string out;
};

struct TrainOptions {
  std::string cube;
  std::string labels;
  std::string config;  // empty: built-in defaults
  std::uint64_t seed = 0;
  std::string out;
  std::size_t threads = 0;  // 0: HSIDUO_THREADS or 1
  bool no_se = false;
  std::optional<int> epochs;
  bool quiet = false;
};

struct TrialOptions {
  TrainOptions train;
  int repeats = 10;
};

struct MapOptions {
  std::string cube;
  std::string labels;
  std::string checkpoint;
  std::string out;
  bool full = false;
  std::size_t threads = 0;
};

int cmd_synth(const SynthOptions& opt);
int cmd_train(const TrainOptions& opt);
int cmd_trial(const TrialOptions& opt);
int cmd_map(const MapOptions& opt);
/// Writes the default config JSON to stdout.
int cmd_emit_default_config();

}  // namespace hsiduo::cli
