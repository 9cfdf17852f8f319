// Copyright 2026 The DC3 Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "dc3/catalog.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "dc3/error.hpp"
#include "dc3/image_io.hpp"

namespace dc3 {
namespace {

static_assert(std::endian::native == std::endian::little,
              "feature IO assumes a little-endian host");

constexpr std::uint8_t kMagic[4] = {'D', 'C', '3', 'F'};
constexpr std::size_t kHeaderSize = 16;

std::uint32_t read_u32(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
         (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

struct FeatureHeader {
  std::uint32_t version;
  std::uint32_t count;
  std::uint32_t dim;
};

FeatureHeader parse_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::BadMagic, "expected DC3F");
  }
  if (bytes.size() < kHeaderSize) {
    throw Error(ErrorCode::TruncatedFile, "header is shorter than 16 bytes");
  }
  FeatureHeader h{read_u32(bytes.data() + 4), read_u32(bytes.data() + 8),
                  read_u32(bytes.data() + 12)};
  if (h.version != kFeatureFormatVersion) {
    throw Error(ErrorCode::UnsupportedVersion, std::to_string(h.version));
  }
  if (h.count == 0 || h.dim == 0) {
    throw Error(ErrorCode::EmptyInput, "count and dim must be positive");
  }
  return h;
}

FeatureHeader read_feature_header(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());
  std::uint8_t buf[kHeaderSize] = {};
  in.read(reinterpret_cast<char*>(buf), kHeaderSize);
  return parse_header({buf, static_cast<std::size_t>(in.gcount())});
}

template <typename T>
T require(const nlohmann::json& node, const char* key, const std::string& where) {
  if (!node.is_object() || !node.contains(key)) {
    throw Error(ErrorCode::MalformedJson, where + ": missing \"" + key + "\"");
  }
  try {
    return node.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::MalformedJson, where + ": bad type for \"" + key + "\"");
  }
}

}  // namespace

FeatureMatrix::FeatureMatrix(std::size_t count, std::size_t dim)
    : count_(count), dim_(dim), data_(count * dim, 0.0f) {}

FeatureMatrix::FeatureMatrix(std::size_t count, std::size_t dim,
                             std::vector<float> data)
    : count_(count), dim_(dim), data_(std::move(data)) {
  if (data_.size() != count * dim) {
    throw Error(ErrorCode::DimensionMismatch,
                "data has " + std::to_string(data_.size()) + " values, expected " +
                    std::to_string(count * dim));
  }
}

FeatureMatrix FeatureMatrix::gather(std::span<const std::size_t> rows) const {
  FeatureMatrix out(rows.size(), dim_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto src = row(rows[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

FeatureMatrix parse_features(std::span<const std::uint8_t> bytes) {
  const FeatureHeader h = parse_header(bytes);
  const std::size_t values = std::size_t(h.count) * h.dim;
  if (bytes.size() - kHeaderSize < values * sizeof(float)) {
    throw Error(ErrorCode::TruncatedFile,
                "expected " + std::to_string(values) + " floats, found " +
                    std::to_string((bytes.size() - kHeaderSize) / sizeof(float)));
  }
  std::vector<float> data(values);
  std::memcpy(data.data(), bytes.data() + kHeaderSize, values * sizeof(float));
  for (std::size_t i = 0; i < values; ++i) {
    if (!std::isfinite(data[i])) {
      throw Error(ErrorCode::NonFiniteValue,
                  std::to_string(i / h.dim) + ", " + std::to_string(i % h.dim));
    }
  }
  return FeatureMatrix(h.count, h.dim, std::move(data));
}

FeatureMatrix load_features(const std::filesystem::path& path) {
  return parse_features(read_file_bytes(path));
}

std::vector<std::uint8_t> serialize_features(const FeatureMatrix& features) {
  std::vector<std::uint8_t> out(kMagic, kMagic + 4);
  put_u32(out, kFeatureFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(features.count()));
  put_u32(out, static_cast<std::uint32_t>(features.dim()));
  const auto* raw = reinterpret_cast<const std::uint8_t*>(features.data().data());
  out.insert(out.end(), raw, raw + features.data().size() * sizeof(float));
  return out;
}

void write_features(const std::filesystem::path& path,
                    const FeatureMatrix& features) {
  write_file_bytes(path, serialize_features(features));
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) {
    throw Error(ErrorCode::MissingFile, path.string());
  }
  std::ifstream in(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedJson, path.string() + ": " + e.what());
  }

  DatasetManifest m;
  m.root = path.parent_path();
  m.name = require<std::string>(doc, "name", "manifest");
  m.classes = require<std::vector<std::string>>(doc, "classes", "manifest");
  m.feature_file = require<std::string>(doc, "feature_file", "manifest");
  if (!doc.contains("samples") || !doc["samples"].is_array()) {
    throw Error(ErrorCode::MalformedJson, "manifest: \"samples\" must be an array");
  }

  if (m.classes.empty()) {
    throw Error(ErrorCode::InvalidManifest, "classes list is empty");
  }
  std::unordered_set<std::string> class_set;
  for (const auto& c : m.classes) {
    if (!class_set.insert(c).second) {
      throw Error(ErrorCode::InvalidManifest, "duplicate class \"" + c + "\"");
    }
  }

  std::unordered_set<std::string> ids;
  for (std::size_t i = 0; i < doc["samples"].size(); ++i) {
    const auto& node = doc["samples"][i];
    const std::string where = "samples[" + std::to_string(i) + "]";
    SampleRecord s;
    s.id = require<std::string>(node, "id", where);
    s.class_label = require<std::string>(node, "class", where);
    s.image_path = require<std::string>(node, "image", where);
    const auto row = require<std::int64_t>(node, "feature_row", where);
    if (s.id.empty()) throw Error(ErrorCode::InvalidManifest, where + ": empty id");
    if (row < 0) throw Error(ErrorCode::DanglingFeatureRow, s.id);
    s.feature_row = static_cast<std::size_t>(row);
    if (!ids.insert(s.id).second) throw Error(ErrorCode::DuplicateId, s.id);
    if (!class_set.contains(s.class_label)) {
      throw Error(ErrorCode::UnknownClass, s.id + ": " + s.class_label);
    }
    m.samples.push_back(std::move(s));
  }

  const FeatureHeader header = read_feature_header(m.feature_path());
  std::unordered_set<std::size_t> rows;
  for (const auto& s : m.samples) {
    if (s.feature_row >= header.count || !rows.insert(s.feature_row).second) {
      throw Error(ErrorCode::DanglingFeatureRow, s.id);
    }
    if (!std::filesystem::is_regular_file(m.image_path(s))) {
      throw Error(ErrorCode::MissingFile, s.id + ": " + m.image_path(s).string());
    }
  }
  return m;
}

void write_manifest(const std::filesystem::path& path,
                    const DatasetManifest& manifest) {
  nlohmann::ordered_json doc;
  doc["name"] = manifest.name;
  doc["classes"] = manifest.classes;
  doc["feature_file"] = manifest.feature_file;
  doc["samples"] = nlohmann::ordered_json::array();
  for (const auto& s : manifest.samples) {
    doc["samples"].push_back({{"id", s.id},
                              {"class", s.class_label},
                              {"image", s.image_path},
                              {"feature_row", s.feature_row}});
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string());
  out << doc.dump(2) << '\n';
}

std::vector<std::size_t> class_view(const DatasetManifest& manifest,
                                    std::string_view label) {
  if (std::find(manifest.classes.begin(), manifest.classes.end(), label) ==
      manifest.classes.end()) {
    throw Error(ErrorCode::UnknownClass, std::string(label));
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < manifest.samples.size(); ++i) {
    if (manifest.samples[i].class_label == label) out.push_back(i);
  }
  return out;
}

FeatureMatrix gather_features(const DatasetManifest& manifest,
                              const FeatureMatrix& features,
                              std::span<const std::size_t> sample_indices) {
  std::vector<std::size_t> rows;
  rows.reserve(sample_indices.size());
  for (auto i : sample_indices) rows.push_back(manifest.samples.at(i).feature_row);
  return features.gather(rows);
}

}  // namespace dc3
