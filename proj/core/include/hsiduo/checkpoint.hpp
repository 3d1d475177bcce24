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

#include <string>
#include <vector>

#include "hsiduo/model.hpp"

namespace hsiduo {

// Checkpoint = JSON manifest + flat payload of little-endian 32-bit floats.
// The payload holds every parameter tensor in for_each_param order; the
// manifest lists {name, shape, offset, count} per tensor (offset in bytes),
// the model config and the class names.

struct Checkpoint {
  DualBranchModel model;
  std::vector<std::string> class_names;
};

/// Writes `<manifest_path>` and the payload file `payload_name` next to it.
void save_checkpoint(const std::string& manifest_path, const DualBranchModel& model,
                     const std::vector<std::string>& class_names,
                     const std::string& payload_name = "model.bin");

/// Throws IngestionError on unreadable or truncated files and DimensionError
/// when the payload layout does not match the manifest's config.
Checkpoint load_checkpoint(const std::string& manifest_path);

}  // namespace hsiduo
