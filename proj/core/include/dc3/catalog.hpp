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
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dc3 {

struct SampleRecord {
  std::string id;
  std::string class_label;
  std::string image_path;  // relative to the manifest's directory
  std::size_t feature_row = 0;

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

// Dense row-major matrix of per-sample features.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t count, std::size_t dim);
  FeatureMatrix(std::size_t count, std::size_t dim, std::vector<float> data);

  std::size_t count() const noexcept { return count_; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const float> data() const noexcept { return data_; }
  std::span<float> data() noexcept { return data_; }

  std::span<const float> row(std::size_t i) const noexcept {
    return {data_.data() + i * dim_, dim_};
  }
  std::span<float> row(std::size_t i) noexcept {
    return {data_.data() + i * dim_, dim_};
  }
  float& operator()(std::size_t i, std::size_t j) noexcept {
    return data_[i * dim_ + j];
  }
  float operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * dim_ + j];
  }

  // New matrix holding the given rows, in the given order.
  FeatureMatrix gather(std::span<const std::size_t> rows) const;

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  std::size_t count_ = 0;
  std::size_t dim_ = 0;
  std::vector<float> data_;
};

struct DatasetManifest {
  std::string name;
  std::vector<std::string> classes;
  std::vector<SampleRecord> samples;
  std::string feature_file;
  // Directory the manifest was loaded from; relative paths resolve here.
  std::filesystem::path root;

  std::filesystem::path image_path(const SampleRecord& s) const {
    return root / s.image_path;
  }
  std::filesystem::path feature_path() const { return root / feature_file; }
};

inline constexpr std::uint32_t kFeatureFormatVersion = 1;

// Parses and validates manifest.json. The feature file header is read to
// check every feature_row, and every image path must exist.
DatasetManifest load_manifest(const std::filesystem::path& path);

FeatureMatrix load_features(const std::filesystem::path& path);
FeatureMatrix parse_features(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> serialize_features(const FeatureMatrix& features);
void write_features(const std::filesystem::path& path,
                    const FeatureMatrix& features);

void write_manifest(const std::filesystem::path& path,
                    const DatasetManifest& manifest);

// Indices into manifest.samples of one class, in manifest order.
std::vector<std::size_t> class_view(const DatasetManifest& manifest,
                                    std::string_view label);

// Feature rows of the given samples, in order.
FeatureMatrix gather_features(const DatasetManifest& manifest,
                              const FeatureMatrix& features,
                              std::span<const std::size_t> sample_indices);

}  // namespace dc3
