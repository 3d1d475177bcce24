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

#include "hsiduo/data.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>

#include "hsiduo/error.hpp"
#include "hsiduo/random.hpp"
#include "json.hpp"

namespace hsiduo {

namespace fs = std::filesystem;
using nlohmann::json;

std::size_t LabelMap::labeled_count() const {
  return static_cast<std::size_t>(std::count_if(labels.begin(), labels.end(), [](auto v) { return v != 0; }));
}

namespace {

json read_header(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open header " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IngestionError("header " + path + ": " + e.what());
  }
}

template <typename T>
T header_field(const json& h, const char* key, const std::string& path) {
  if (!h.contains(key)) throw IngestionError("header " + path + ": missing field \"" + key + "\"");
  try {
    return h.at(key).get<T>();
  } catch (const json::exception& e) {
    throw IngestionError("header " + path + ": field \"" + key + "\": " + e.what());
  }
}

std::vector<unsigned char> read_payload(const std::string& header_path, const json& h, std::size_t expected) {
  const fs::path data = fs::path(header_path).parent_path() / header_field<std::string>(h, "data", header_path);
  std::ifstream in(data, std::ios::binary);
  if (!in) throw IngestionError("cannot open payload " + data.string() + " (named by " + header_path + ")");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() != expected) {
    throw IngestionError("payload " + data.string() + ": expected " + std::to_string(expected) +
                         " bytes, found " + std::to_string(bytes.size()));
  }
  return bytes;
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestionError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IngestionError("write failed for " + path.string());
}

std::uint32_t read_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

HsiCube load_cube(const std::string& header_path) {
  const json h = read_header(header_path);
  const auto height = header_field<std::size_t>(h, "height", header_path);
  const auto width = header_field<std::size_t>(h, "width", header_path);
  const auto bands = header_field<std::size_t>(h, "bands", header_path);
  const auto dtype = header_field<std::string>(h, "dtype", header_path);
  const auto interleave = h.value("interleave", std::string("bsq"));
  if (dtype != "f32") throw IngestionError("header " + header_path + ": unsupported dtype \"" + dtype + "\"");
  if (interleave != "bsq") {
    throw IngestionError("header " + header_path + ": unsupported interleave \"" + interleave + "\"");
  }
  if (height == 0 || width == 0 || bands == 0) throw IngestionError("header " + header_path + ": zero dimension");

  const std::size_t pixels = height * width;
  const auto bytes = read_payload(header_path, h, pixels * bands * 4);
  HsiCube cube{Tensor({height, width, bands})};
  for (std::size_t b = 0; b < bands; ++b) {
    for (std::size_t p = 0; p < pixels; ++p) {
      const float v = std::bit_cast<float>(read_u32le(bytes.data() + 4 * (b * pixels + p)));
      if (!std::isfinite(v)) {
        throw IngestionError("payload of " + header_path + ": non-finite value at band " + std::to_string(b));
      }
      cube.values[p * bands + b] = v;
    }
  }
  return cube;
}

LabelMap load_labels(const std::string& header_path) {
  const json h = read_header(header_path);
  LabelMap m;
  m.height = header_field<std::size_t>(h, "height", header_path);
  m.width = header_field<std::size_t>(h, "width", header_path);
  const auto dtype = header_field<std::string>(h, "dtype", header_path);
  if (dtype != "u16") throw IngestionError("header " + header_path + ": unsupported dtype \"" + dtype + "\"");
  const std::size_t pixels = m.height * m.width;
  const auto bytes = read_payload(header_path, h, pixels * 2);
  m.labels.resize(pixels);
  std::uint16_t max_label = 0;
  for (std::size_t p = 0; p < pixels; ++p) {
    m.labels[p] = static_cast<std::uint16_t>(bytes[2 * p] | (bytes[2 * p + 1] << 8));
    max_label = std::max(max_label, m.labels[p]);
  }
  m.n_classes = h.contains("classes") ? header_field<std::size_t>(h, "classes", header_path) : max_label;
  if (max_label > m.n_classes) {
    throw IngestionError("labels " + header_path + ": label " + std::to_string(max_label) +
                         " exceeds declared class count " + std::to_string(m.n_classes));
  }
  if (h.contains("class_names")) {
    m.class_names = header_field<std::vector<std::string>>(h, "class_names", header_path);
    if (m.class_names.size() != m.n_classes) {
      throw IngestionError("labels " + header_path + ": class_names has " + std::to_string(m.class_names.size()) +
                           " entries for " + std::to_string(m.n_classes) + " classes");
    }
  }
  return m;
}

void save_cube(const std::string& header_path, const HsiCube& cube, const std::string& data_name) {
  const std::size_t pixels = cube.height() * cube.width(), bands = cube.bands();
  std::string bytes;
  bytes.reserve(pixels * bands * 4);
  for (std::size_t b = 0; b < bands; ++b) {
    for (std::size_t p = 0; p < pixels; ++p) {
      const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(cube.values[p * bands + b]));
      for (int k = 0; k < 4; ++k) bytes.push_back(static_cast<char>((bits >> (8 * k)) & 0xFFu));
    }
  }
  const fs::path header(header_path);
  write_file(header.parent_path() / data_name, bytes);
  const json h = {{"height", cube.height()}, {"width", cube.width()}, {"bands", bands},
                  {"dtype", "f32"},          {"interleave", "bsq"},   {"data", data_name}};
  write_file(header, h.dump(2) + "\n");
}

void save_labels(const std::string& header_path, const LabelMap& labels, const std::string& data_name) {
  std::string bytes;
  bytes.reserve(labels.labels.size() * 2);
  for (auto v : labels.labels) {
    bytes.push_back(static_cast<char>(v & 0xFFu));
    bytes.push_back(static_cast<char>((v >> 8) & 0xFFu));
  }
  const fs::path header(header_path);
  write_file(header.parent_path() / data_name, bytes);
  json h = {{"height", labels.height}, {"width", labels.width}, {"dtype", "u16"},
            {"data", data_name},       {"classes", labels.n_classes}};
  if (!labels.class_names.empty()) h["class_names"] = labels.class_names;
  write_file(header, h.dump(2) + "\n");
}

Tensor standardize(const Tensor& reduced) {
  if (reduced.rank() != 3) throw DimensionError("standardize expects [H,W,P], got " + shape_to_string(reduced.shape()));
  const std::size_t pixels = reduced.dim(0) * reduced.dim(1), p = reduced.dim(2);
  std::vector<double> mean(p, 0.0), stddev(p, 0.0);
  for (std::size_t q = 0; q < pixels; ++q) {
    for (std::size_t c = 0; c < p; ++c) mean[c] += reduced[q * p + c];
  }
  for (auto& m : mean) m /= static_cast<double>(pixels);
  for (std::size_t q = 0; q < pixels; ++q) {
    for (std::size_t c = 0; c < p; ++c) {
      const double d = reduced[q * p + c] - mean[c];
      stddev[c] += d * d;
    }
  }
  double largest = 0.0;
  for (auto& s : stddev) {
    s = std::sqrt(s / static_cast<double>(pixels));
    largest = std::max(largest, s);
  }
  Tensor out(reduced.shape());
  for (std::size_t q = 0; q < pixels; ++q) {
    for (std::size_t c = 0; c < p; ++c) {
      const double centered = reduced[q * p + c] - mean[c];
      const bool degenerate = !(stddev[c] > 1e-9 * largest) || stddev[c] == 0.0;
      out[q * p + c] = degenerate ? centered : centered / stddev[c];
    }
  }
  return out;
}

Tensor extract_patch(const Tensor& image, std::size_t row, std::size_t col, std::size_t size) {
  if (image.rank() != 3) throw DimensionError("extract_patch expects [H,W,P], got " + shape_to_string(image.shape()));
  const std::size_t h = image.dim(0), w = image.dim(1), p = image.dim(2);
  if (row >= h || col >= w) {
    throw DimensionError("extract_patch: pixel (" + std::to_string(row) + "," + std::to_string(col) +
                         ") outside " + shape_to_string(image.shape()));
  }
  Tensor patch({size, size, p});
  const auto half = static_cast<std::ptrdiff_t>(size / 2);
  for (std::size_t i = 0; i < size; ++i) {
    const std::ptrdiff_t r = static_cast<std::ptrdiff_t>(row) - half + static_cast<std::ptrdiff_t>(i);
    if (r < 0 || r >= static_cast<std::ptrdiff_t>(h)) continue;
    for (std::size_t j = 0; j < size; ++j) {
      const std::ptrdiff_t c = static_cast<std::ptrdiff_t>(col) - half + static_cast<std::ptrdiff_t>(j);
      if (c < 0 || c >= static_cast<std::ptrdiff_t>(w)) continue;
      const std::size_t src = (static_cast<std::size_t>(r) * w + static_cast<std::size_t>(c)) * p;
      std::copy_n(image.data().begin() + static_cast<std::ptrdiff_t>(src), p,
                  patch.data().begin() + static_cast<std::ptrdiff_t>((i * size + j) * p));
    }
  }
  return patch;
}

Split stratified_split(const LabelMap& labels, double train_frac, double val_frac, std::uint64_t seed) {
  if (!(train_frac > 0.0 && train_frac <= 1.0)) throw ConfigError("train_fraction must lie in (0, 1]");
  if (!(val_frac >= 0.0 && val_frac < 1.0)) throw ConfigError("val_fraction must lie in [0, 1)");

  std::map<std::uint16_t, std::vector<Sample>> by_class;
  for (std::size_t r = 0; r < labels.height; ++r) {
    for (std::size_t c = 0; c < labels.width; ++c) {
      const auto l = labels.at(r, c);
      if (l != 0) by_class[l].push_back({r, c, l});
    }
  }
  if (by_class.empty()) throw DataError("no labeled pixels");
  const std::size_t n_classes = std::max<std::size_t>(labels.n_classes, by_class.rbegin()->first);
  for (std::size_t k = 1; k <= n_classes; ++k) {
    const auto it = by_class.find(static_cast<std::uint16_t>(k));
    const std::size_t n = it == by_class.end() ? 0 : it->second.size();
    if (n < 2) {
      throw DataError("class " + std::to_string(k) + " has " + std::to_string(n) +
                      " labeled pixels; at least 2 are required");
    }
  }

  Split split;
  for (auto& [label, pool] : by_class) {
    Rng rng(derive_seed(seed, {label}));
    const std::size_t n = pool.size();
    const auto drawn = std::min(n, std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(train_frac * static_cast<double>(n)))));
    // Partial Fisher-Yates: the first `drawn` entries become the sample.
    for (std::size_t i = 0; i < drawn; ++i) std::swap(pool[i], pool[i + rng.uniform_index(n - i)]);
    std::size_t n_val = 0;
    if (val_frac > 0.0) {
      n_val = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(val_frac * static_cast<double>(drawn))));
      n_val = std::min(n_val, drawn - 1);
    }
    for (std::size_t i = 0; i < drawn; ++i) (i < n_val ? split.val : split.train).samples.push_back(pool[i]);
    for (std::size_t i = drawn; i < n; ++i) split.test.samples.push_back(pool[i]);
  }
  auto row_major = [](const Sample& a, const Sample& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; };
  std::sort(split.test.samples.begin(), split.test.samples.end(), row_major);
  return split;
}

SyntheticScene synth_dataset(std::size_t n_classes, std::size_t height, std::size_t width, std::size_t bands,
                             double noise_std, std::uint64_t seed) {
  if (n_classes < 2) throw ConfigError("classes: need >= 2 classes");
  if (n_classes > 65535) throw ConfigError("classes: at most 65535 classes");
  if (height == 0 || width == 0 || height * width < 10 * n_classes) {
    throw ConfigError("height/width: need at least 10 pixels per class");
  }
  if (bands == 0) throw ConfigError("bands: must be >= 1");
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) throw ConfigError("noise: must be a finite value >= 0");

  SyntheticScene scene;
  const double b_max = static_cast<double>(bands - 1);
  const double min_distance = 0.25 * std::sqrt(static_cast<double>(bands));
  Rng sig_rng(derive_seed(seed, {1}));
  auto draw_signature = [&] {
    std::vector<double> s(bands, 0.0);
    for (int g = 0; g < 3; ++g) {
      const double amp = sig_rng.uniform(0.3, 1.0);
      const double center = sig_rng.uniform(0.0, b_max);
      const double spread = sig_rng.uniform(std::max(1.0, bands / 10.0), std::max(1.5, bands / 4.0));
      for (std::size_t b = 0; b < bands; ++b) {
        const double d = (static_cast<double>(b) - center) / spread;
        s[b] += amp * std::exp(-0.5 * d * d);
      }
    }
    return s;
  };
  auto distance_to_others = [&](const std::vector<double>& s) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& o : scene.signatures) {
      double d2 = 0.0;
      for (std::size_t b = 0; b < bands; ++b) d2 += (s[b] - o[b]) * (s[b] - o[b]);
      best = std::min(best, std::sqrt(d2));
    }
    return best;
  };
  for (std::size_t k = 0; k < n_classes; ++k) {
    auto best = draw_signature();
    double best_d = distance_to_others(best);
    for (int attempt = 0; attempt < 1000 && best_d < min_distance; ++attempt) {
      auto candidate = draw_signature();
      const double d = distance_to_others(candidate);
      if (d > best_d) {
        best = std::move(candidate);
        best_d = d;
      }
    }
    scene.signatures.push_back(std::move(best));
  }

  const std::size_t pixels = height * width;
  LabelMap& lm = scene.labels;
  lm.height = height;
  lm.width = width;
  lm.n_classes = n_classes;
  lm.labels.resize(pixels);
  std::vector<std::size_t> class_of(pixels);
  std::vector<std::size_t> labeled(n_classes, 0);
  for (std::size_t p = 0; p < pixels; ++p) {
    class_of[p] = p * n_classes / pixels;
    lm.labels[p] = static_cast<std::uint16_t>(class_of[p] + 1);
    ++labeled[class_of[p]];
  }
  for (std::size_t k = 0; k < n_classes; ++k) lm.class_names.push_back("class_" + std::to_string(k + 1));

  Rng mask_rng(derive_seed(seed, {2}));
  std::vector<std::size_t> order(pixels);
  for (std::size_t p = 0; p < pixels; ++p) order[p] = p;
  for (std::size_t i = pixels; i > 1; --i) std::swap(order[i - 1], order[mask_rng.uniform_index(i)]);
  const auto to_hide = static_cast<std::size_t>(std::llround(0.05 * static_cast<double>(pixels)));
  std::size_t hidden = 0;
  for (std::size_t i = 0; i < pixels && hidden < to_hide; ++i) {
    const std::size_t p = order[i];
    if (labeled[class_of[p]] <= 2) continue;
    lm.labels[p] = 0;
    --labeled[class_of[p]];
    ++hidden;
  }

  Rng noise_rng(derive_seed(seed, {3}));
  scene.cube.values = Tensor({height, width, bands});
  for (std::size_t p = 0; p < pixels; ++p) {
    const auto& sig = scene.signatures[class_of[p]];
    for (std::size_t b = 0; b < bands; ++b) {
      const double noise = noise_std > 0.0 ? noise_rng.normal(0.0, noise_std) : 0.0;
      scene.cube.values[p * bands + b] = sig[b] + noise;
    }
  }
  return scene;
}

}  // namespace hsiduo
