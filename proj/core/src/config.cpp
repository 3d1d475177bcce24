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

#include "hsiduo/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "hsiduo/error.hpp"
#include "hsiduo/spectral.hpp"
#include "json.hpp"

namespace hsiduo {

using nlohmann::json;

std::vector<ConvSpec> ModelConfig::default_stream() {
  return {ConvSpec{{3, 3, 5}, 8}, ConvSpec{{3, 3, 3}, 16}, ConvSpec{{3, 3, 3}, 32}};
}

namespace {

// Spatial/depth extent and channel count after a conv stack.
struct StreamOut {
  std::size_t h, w, d, c;
};

StreamOut run_stream(const std::vector<ConvSpec>& stream, std::size_t s, std::size_t p,
                     const std::string& field) {
  if (stream.empty()) throw ConfigError(field + ": at least one conv layer is required");
  StreamOut o{s, s, p, 1};
  for (std::size_t l = 0; l < stream.size(); ++l) {
    const auto& spec = stream[l];
    const std::string name = field + "[" + std::to_string(l) + "]";
    for (auto k : spec.kernel) {
      if (k == 0) throw ConfigError(name + ".kernel: dimensions must be >= 1");
    }
    if (spec.channels == 0) throw ConfigError(name + ".channels: must be >= 1");
    if (spec.kernel[0] > o.h || spec.kernel[1] > o.w || spec.kernel[2] > o.d) {
      throw ConfigError(name + ".kernel: larger than its input (" + std::to_string(o.h) + "x" +
                        std::to_string(o.w) + "x" + std::to_string(o.d) + ")");
    }
    o = {o.h - spec.kernel[0] + 1, o.w - spec.kernel[1] + 1, o.d - spec.kernel[2] + 1, spec.channels};
  }
  return o;
}

json stream_to_json(const std::vector<ConvSpec>& stream) {
  json arr = json::array();
  for (const auto& s : stream) arr.push_back({{"kernel", s.kernel}, {"channels", s.channels}});
  return arr;
}

json to_json_value(const ModelConfig& cfg) {
  const auto& t = cfg.train;
  return json{
      {"pca_components", cfg.pca_components},
      {"patch_size", cfg.patch_size},
      {"real_stream", stream_to_json(cfg.real_stream)},
      {"complex_stream", stream_to_json(cfg.complex_stream)},
      {"se_enabled", cfg.se_enabled},
      {"se_ratio", cfg.se_ratio},
      {"dense_widths", cfg.dense_widths},
      {"dropout", cfg.dropout},
      {"train",
       {{"epochs", t.epochs},
        {"batch_size", t.batch_size},
        {"patience", t.patience},
        {"learning_rate", t.learning_rate},
        {"seed", t.seed},
        {"precision", t.precision},
        {"train_fraction", t.train_fraction},
        {"val_fraction", t.val_fraction}}},
  };
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ConfigError(where + key + ": unknown field");
  }
}

template <typename T>
void read_field(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + key + ": " + e.what());
  }
}

std::vector<ConvSpec> stream_from_json(const json& j, const std::string& field) {
  if (!j.is_array()) throw ConfigError(field + ": expected an array");
  std::vector<ConvSpec> out;
  for (std::size_t l = 0; l < j.size(); ++l) {
    const std::string where = field + "[" + std::to_string(l) + "].";
    const auto& e = j[l];
    if (!e.is_object()) throw ConfigError(where + ": expected an object");
    reject_unknown(e, {"kernel", "channels"}, where);
    ConvSpec spec;
    read_field(e, "kernel", spec.kernel, where);
    read_field(e, "channels", spec.channels, where);
    out.push_back(spec);
  }
  return out;
}

}  // namespace

void validate(const ModelConfig& cfg) {
  if (cfg.pca_components == 0) throw ConfigError("pca_components: must be >= 1");
  if (cfg.patch_size < 2 || !is_power_of_two(cfg.patch_size)) {
    throw ConfigError("patch_size: must be a power of two >= 2, got " + std::to_string(cfg.patch_size));
  }
  if (!(cfg.dropout >= 0.0 && cfg.dropout < 1.0)) throw ConfigError("dropout: must lie in [0, 1)");
  for (std::size_t i = 0; i < cfg.dense_widths.size(); ++i) {
    if (cfg.dense_widths[i] == 0) {
      throw ConfigError("dense_widths[" + std::to_string(i) + "]: must be >= 1");
    }
  }
  const auto g = geometry(cfg);
  if (cfg.se_enabled) {
    if (cfg.se_ratio == 0 || g.fused_channels % cfg.se_ratio != 0) {
      throw ConfigError("se_ratio: " + std::to_string(cfg.se_ratio) +
                        " does not divide the fused channel count " + std::to_string(g.fused_channels));
    }
  }
  const auto& t = cfg.train;
  if (t.epochs < 1) throw ConfigError("train.epochs: must be >= 1");
  if (t.batch_size < 1) throw ConfigError("train.batch_size: must be >= 1");
  if (t.patience < 1) throw ConfigError("train.patience: must be >= 1");
  if (t.patience > t.epochs) throw ConfigError("train.patience: must not exceed train.epochs");
  if (!(t.learning_rate > 0.0)) throw ConfigError("train.learning_rate: must be > 0");
  if (t.precision != "f64") {
    throw ConfigError("train.precision: only \"f64\" is supported, got \"" + t.precision + "\"");
  }
  if (!(t.train_fraction > 0.0 && t.train_fraction <= 1.0)) {
    throw ConfigError("train.train_fraction: must lie in (0, 1]");
  }
  if (!(t.val_fraction >= 0.0 && t.val_fraction < 1.0)) {
    throw ConfigError("train.val_fraction: must lie in [0, 1)");
  }
}

ModelGeometry geometry(const ModelConfig& cfg) {
  const auto r = run_stream(cfg.real_stream, cfg.patch_size, cfg.pca_components, "real_stream");
  const auto c = run_stream(cfg.complex_stream, cfg.patch_size, cfg.pca_components, "complex_stream");
  if (r.h != c.h || r.w != c.w) {
    throw ConfigError("complex_stream: spatial output " + std::to_string(c.h) + "x" +
                      std::to_string(c.w) + " differs from real_stream " + std::to_string(r.h) +
                      "x" + std::to_string(r.w));
  }
  ModelGeometry g;
  g.out_height = r.h;
  g.out_width = r.w;
  g.real_channels = r.d * r.c;
  g.complex_channels = c.d * c.c;
  g.fused_channels = g.real_channels + 2 * g.complex_channels;
  g.flat_features = g.out_height * g.out_width * g.fused_channels;
  return g;
}

std::string to_json(const ModelConfig& cfg) { return to_json_value(cfg).dump(2) + "\n"; }

ModelConfig model_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  reject_unknown(j,
                 {"pca_components", "patch_size", "real_stream", "complex_stream", "se_enabled",
                  "se_ratio", "dense_widths", "dropout", "train"},
                 "");
  ModelConfig cfg;
  read_field(j, "pca_components", cfg.pca_components, "");
  read_field(j, "patch_size", cfg.patch_size, "");
  if (j.contains("real_stream")) cfg.real_stream = stream_from_json(j["real_stream"], "real_stream");
  if (j.contains("complex_stream")) {
    cfg.complex_stream = stream_from_json(j["complex_stream"], "complex_stream");
  }
  read_field(j, "se_enabled", cfg.se_enabled, "");
  read_field(j, "se_ratio", cfg.se_ratio, "");
  read_field(j, "dense_widths", cfg.dense_widths, "");
  read_field(j, "dropout", cfg.dropout, "");
  if (j.contains("train")) {
    const auto& t = j["train"];
    if (!t.is_object()) throw ConfigError("train: expected an object");
    reject_unknown(t,
                   {"epochs", "batch_size", "patience", "learning_rate", "seed", "precision",
                    "train_fraction", "val_fraction"},
                   "train.");
    read_field(t, "epochs", cfg.train.epochs, "train.");
    read_field(t, "batch_size", cfg.train.batch_size, "train.");
    read_field(t, "patience", cfg.train.patience, "train.");
    read_field(t, "learning_rate", cfg.train.learning_rate, "train.");
    read_field(t, "seed", cfg.train.seed, "train.");
    read_field(t, "precision", cfg.train.precision, "train.");
    read_field(t, "train_fraction", cfg.train.train_fraction, "train.");
    read_field(t, "val_fraction", cfg.train.val_fraction, "train.");
  }
  return cfg;
}

ModelConfig load_model_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return model_config_from_json(ss.str());
}

std::string config_hash(const ModelConfig& cfg) {
  const std::string canonical = to_json_value(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace hsiduo
