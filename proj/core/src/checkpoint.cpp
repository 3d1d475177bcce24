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

#include "hsiduo/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hsiduo/error.hpp"
#include "json.hpp"

namespace hsiduo {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kFormat = "hsiduo-checkpoint-v1";

void put_f32le(std::string& out, double value) {
  const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(value));
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xFFu));
}

float get_f32le(const unsigned char* p) {
  const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                             (static_cast<std::uint32_t>(p[2]) << 16) |
                             (static_cast<std::uint32_t>(p[3]) << 24);
  return std::bit_cast<float>(bits);
}

}  // namespace

void save_checkpoint(const std::string& manifest_path, const DualBranchModel& model,
                     const std::vector<std::string>& class_names, const std::string& payload_name) {
  std::string payload;
  json layers = json::array();
  for_each_param(model.params(), [&](const std::string& name, const Shape& shape, std::span<const double> v) {
    layers.push_back({{"name", name}, {"shape", shape}, {"offset", payload.size()}, {"count", v.size()}});
    for (double x : v) put_f32le(payload, x);
  });

  json manifest = {
      {"format", kFormat},
      {"dtype", "f32le"},
      {"data", payload_name},
      {"total_bytes", payload.size()},
      {"n_classes", model.n_classes()},
      {"class_names", class_names},
      {"config", json::parse(to_json(model.config()))},
      {"config_hash", config_hash(model.config())},
      {"layers", layers},
  };

  const fs::path mpath(manifest_path);
  const fs::path ppath = mpath.parent_path() / payload_name;
  std::ofstream bin(ppath, std::ios::binary);
  if (!bin) throw IngestionError("cannot write checkpoint payload " + ppath.string());
  bin.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  std::ofstream js(mpath);
  if (!js) throw IngestionError("cannot write checkpoint manifest " + mpath.string());
  js << manifest.dump(2) << "\n";
  if (!bin || !js) throw IngestionError("write failed for checkpoint " + mpath.string());
}

Checkpoint load_checkpoint(const std::string& manifest_path) {
  std::ifstream js(manifest_path);
  if (!js) throw IngestionError("cannot open checkpoint manifest " + manifest_path);
  json manifest;
  try {
    manifest = json::parse(js);
  } catch (const json::exception& e) {
    throw IngestionError("checkpoint manifest " + manifest_path + ": " + e.what());
  }
  if (manifest.value("format", "") != kFormat) {
    throw IngestionError("checkpoint manifest " + manifest_path + ": unknown format");
  }

  const ModelConfig cfg = model_config_from_json(manifest.at("config").dump());
  const std::size_t n_classes = manifest.at("n_classes").get<std::size_t>();
  std::vector<std::string> names = manifest.value("class_names", std::vector<std::string>{});

  const fs::path ppath = fs::path(manifest_path).parent_path() / manifest.at("data").get<std::string>();
  std::ifstream bin(ppath, std::ios::binary);
  if (!bin) throw IngestionError("cannot open checkpoint payload " + ppath.string());
  std::vector<unsigned char> payload((std::istreambuf_iterator<char>(bin)), std::istreambuf_iterator<char>());
  const std::size_t expected_bytes = manifest.at("total_bytes").get<std::size_t>();
  if (payload.size() != expected_bytes) {
    throw IngestionError("checkpoint payload " + ppath.string() + ": expected " +
                         std::to_string(expected_bytes) + " bytes, found " + std::to_string(payload.size()));
  }

  // Shapes come from the config; the manifest's layer table must agree.
  DualBranchModel model(cfg, n_classes, std::uint64_t{0});
  const auto& layers = manifest.at("layers");
  std::size_t i = 0;
  for_each_param(model.params(), [&](const std::string& name, const Shape& shape, std::span<double> v) {
    if (i >= layers.size()) throw DimensionError("checkpoint lacks tensor " + name);
    const auto& entry = layers[i++];
    if (entry.at("name").get<std::string>() != name || entry.at("shape").get<Shape>() != shape) {
      throw DimensionError("checkpoint tensor " + entry.at("name").get<std::string>() +
                           " does not match configured " + name + " " + shape_to_string(shape));
    }
    const std::size_t offset = entry.at("offset").get<std::size_t>();
    if (offset + 4 * v.size() > payload.size()) {
      throw IngestionError("checkpoint tensor " + name + " runs past the payload end");
    }
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = get_f32le(payload.data() + offset + 4 * k);
  });
  if (i != layers.size()) throw DimensionError("checkpoint has extra tensors beyond the configured model");
  return {std::move(model), std::move(names)};
}

}  // namespace hsiduo
